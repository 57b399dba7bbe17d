from dataclasses import dataclass
import networkx as nx

from core.utils.config_utils import load_key
from core.utils.errors import WorkloadExhausted


@dataclass(frozen=True)
class Workload:
    """Query pairs ``(s, t, hops)``; every t sits exactly ``hops`` BFS steps from s."""
    pairs: tuple
    seed: int = 0

    def __len__(self):
        return len(self.pairs)


def generate_workload(graph, n_pairs=None, hops=None, rng=None, retries=None):
    """Distinct random sources, each with one random target at exactly ``hops`` hops.

    Sources are tried in a random order; at most ``retries * n_pairs`` of them are
    looked at before giving up.
    """
    n_pairs = int(load_key('bench.pairs')) if n_pairs is None else int(n_pairs)
    hops = int(load_key('bench.hops')) if hops is None else int(hops)
    retries = int(load_key('bench.workload_retries')) if retries is None else int(retries)
    if hops < 1:
        raise ValueError("hops must be at least 1, s = t pairs are degenerate")
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")

    skeleton = graph.to_networkx()
    budget = retries * n_pairs
    pairs = []
    for tried, s in enumerate(rng.permutation(graph.n).tolist()):
        if len(pairs) == n_pairs or tried >= budget:
            break
        dist = nx.single_source_shortest_path_length(skeleton, s, cutoff=hops)
        ring = sorted(v for v, d in dist.items() if d == hops)
        if ring:
            pairs.append((s, ring[rng.integers(len(ring))], hops))
    if len(pairs) < n_pairs:
        raise WorkloadExhausted(len(pairs), n_pairs, hops)
    return Workload(pairs=tuple(pairs), seed=rng.seed)
