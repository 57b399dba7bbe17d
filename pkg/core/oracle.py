import numpy as np

from core.graph_utils.possible_world import PossibleWorld
from core.utils.config_utils import load_key
from core.utils.decorator import timed_estimate
from core.utils.errors import EdgeBudgetExceeded
from core.utils.models import Estimate

# ------------
# exact s-t reliability by enumerating every possible world
# ------------

def world_probability(graph, world):
    """Pr(world) = prod p(e) over present edges * prod (1 - p(e)) over absent ones."""
    present = np.asarray(world.present, dtype=bool)
    if len(present) != graph.m:
        raise ValueError(f"mask of length {len(present)} for a graph with {graph.m} edges")
    return float(np.prod(np.where(present, graph.probs, 1.0 - graph.probs)))


def _world_block(graph, start, stop):
    """Presence matrix (worlds x edges) and probabilities for world ids start..stop-1."""
    ids = np.arange(start, stop, dtype=np.int64)
    bits = ((ids[:, None] >> np.arange(graph.m, dtype=np.int64)[None, :]) & 1).astype(bool)
    probs = np.where(bits, graph.probs[None, :], 1.0 - graph.probs[None, :]).prod(axis=1)
    return bits, probs


def _reach_block(graph, bits, s):
    """reach[v, w] = v reachable from s in world w, by relaxing edges to a fixpoint."""
    reach = np.zeros((graph.n, bits.shape[0]), dtype=bool)
    reach[s] = True
    changed = True
    while changed:
        changed = False
        for e in range(graph.m):
            u, v = graph.source_list[e], graph.target_list[e]
            gained = reach[u] & bits[:, e] & ~reach[v]
            if gained.any():
                reach[v] |= gained
                changed = True
    return reach


def world_probabilities(graph, max_edges=None):
    """Probability of every one of the 2^m worlds, world id bit e = edge e present."""
    max_edges = load_key('oracle.max_edges') if max_edges is None else max_edges
    if graph.m > max_edges:
        raise EdgeBudgetExceeded(graph.m, max_edges)
    return _world_block(graph, 0, 1 << graph.m)[1]


def exact_reliability(graph, s, t, max_edges=None):
    graph.check_node(s)
    graph.check_node(t)
    if s == t:
        return 1.0
    max_edges = load_key('oracle.max_edges') if max_edges is None else max_edges
    if graph.m > max_edges:
        raise EdgeBudgetExceeded(graph.m, max_edges)
    block = int(load_key('oracle.block_size'))
    total = 0.0
    for start in range(0, 1 << graph.m, block):
        stop = min(start + block, 1 << graph.m)
        bits, probs = _world_block(graph, start, stop)
        reach = _reach_block(graph, bits, s)
        total += float(probs[reach[t]].sum())
    return min(max(total, 0.0), 1.0)

# ------------
# conditioning helpers
# ------------

def force_present(graph, e):
    return graph.conditioned(present=[e])


def force_absent(graph, e):
    return graph.conditioned(absent=[e])


def world_from_id(graph, world_id):
    bits = (world_id >> np.arange(graph.m, dtype=np.int64)) & 1
    return PossibleWorld(bits.astype(bool))


@timed_estimate
def oracle_estimate(graph, s, t, K, rng=None):
    """Exact value dressed as an estimate; a zero-variance estimator for the harness."""
    return Estimate(exact_reliability(graph, s, t), samples_used=max(int(K), 1),
                    seed=rng.seed if rng is not None else 0)


if __name__ == '__main__':
    from core.graph_utils import UncertainGraph
    diamond = UncertainGraph(4, [(0, 1, 0.5), (0, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5)])
    print(exact_reliability(diamond, 0, 3))
