from collections import deque
from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class PossibleWorld:
    """Edge-indexed presence mask of one deterministic instance of a graph."""
    present: np.ndarray

    def __len__(self):
        return len(self.present)


def sample_world(graph, rng):
    # u in [0, 1) so p = 1 edges are always present
    return PossibleWorld(rng.uniforms(graph.m) < graph.probs)


def reachable(graph, world, s, t):
    """BFS over the edges present in ``world``; s always reaches itself."""
    if s == t:
        return True
    present = world.present
    seen = np.zeros(graph.n, dtype=bool)
    seen[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for e in graph.out_edges[u]:
            if not present[e]:
                continue
            v = graph.target_list[e]
            if v == t:
                return True
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return False
