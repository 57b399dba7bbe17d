from collections import deque
from dataclasses import dataclass
import numpy as np

from core.estimator_backend.mc import mc_hits
from core.utils.config_utils import default_seed, load_key
from core.utils.decorator import timed_estimate
from core.utils.errors import InsufficientEdges
from core.utils.models import Estimate
from core.utils.rng import RandomStream

# status of a stratum edge
ABSENT, PRESENT, FREE = 0, 1, None


@dataclass(frozen=True)
class StratumPlan:
    """r BFS-selected edges and the r + 1 strata they induce.

    Stratum 0 drops every selected edge. Stratum i (1 <= i <= r) keeps edge i,
    drops the edges before it and leaves the ones after it free.
    """
    T: tuple
    status: tuple
    pi: tuple

    @property
    def r(self):
        return len(self.T)


@dataclass(frozen=True)
class RssParams:
    r: int = 50
    threshold: int = 5

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be at least 1")
        if self.threshold < 1:
            raise ValueError("threshold must be at least 1")

    @classmethod
    def from_config(cls):
        return cls(r=int(load_key('rss.r')), threshold=int(load_key('rss.threshold')))


def _bfs_uncertain_edges(graph, s, limit):
    """Uncertain edges (p < 1) in BFS order from s, at most ``limit`` of them.

    Edges into nodes already seen count too; certain edges are walked but not picked.
    """
    picked = []
    seen = {s}
    queue = deque([s])
    while queue and len(picked) < limit:
        u = queue.popleft()
        for e in graph.out_edges[u]:
            if graph.prob_list[e] < 1.0:
                picked.append(e)
                if len(picked) == limit:
                    break
            v = graph.target_list[e]
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return picked


def build_strata(graph, s, r):
    T = _bfs_uncertain_edges(graph, s, r)
    if len(T) < r:
        raise InsufficientEdges(len(T), r)
    probs = [graph.prob_list[e] for e in T]
    status = [tuple(ABSENT for _ in T)]
    pi = [float(np.prod([1.0 - p for p in probs]))]
    absent_prefix = 1.0
    for i, p in enumerate(probs):
        status.append(tuple([ABSENT] * i + [PRESENT] + [FREE] * (r - i - 1)))
        pi.append(absent_prefix * p)
        absent_prefix *= 1.0 - p
    return StratumPlan(T=tuple(T), status=tuple(status), pi=tuple(pi))


def _simplify(graph, plan, i, s):
    """Simplified stratum graph plus the old -> new node id map of the kept nodes."""
    absent = {e for e, x in zip(plan.T, plan.status[i]) if x == ABSENT}
    present = {e: 1.0 for e, x in zip(plan.T, plan.status[i]) if x == PRESENT}
    reached = graph.reachable_from(s, usable=lambda e: e not in absent)
    keep_nodes = sorted(reached)
    keep_edges = [e for e in range(graph.m) if e not in absent and graph.source_list[e] in reached]
    sub = graph.subgraph(keep_edges, prob_overrides=present, keep_nodes=keep_nodes)
    return sub, {u: k for k, u in enumerate(keep_nodes)}


def simplify_graph(graph, plan, i, s):
    if not 0 <= i <= plan.r:
        raise ValueError(f"stratum {i} outside 0..{plan.r}")
    return _simplify(graph, plan, i, s)[0]


def allocate_samples(pi, K):
    """Integer K_i proportional to pi_i, summing to K (largest remainder)."""
    raw = np.asarray(pi, dtype=np.float64) * K
    alloc = np.floor(raw).astype(np.int64)
    rest = K - int(alloc.sum())
    if rest > 0:
        order = np.argsort(-(raw - alloc), kind='stable')
        alloc[order[:rest]] += 1
    return alloc.tolist()


def _leaf_value(graph, s, t, K, params, rng):
    """Value of a call that needs no stratification, None otherwise."""
    if t is None:
        return 0.0
    if s == t:
        return 1.0
    if t not in graph.reachable_from(s):
        return 0.0
    if t in graph.reachable_from(s, usable=lambda e: graph.prob_list[e] >= 1.0):
        return 1.0
    if K < params.threshold:
        return mc_hits(graph, s, t, K, rng) / K
    return None


def _stratify(graph, s, t, K, params, rng, trace):
    """Weighted sum over the strata tree, expanded depth first from an explicit stack.

    Stack entries are ``(graph, s, t, K, origins, depth, weight)``; ``origins`` maps
    edges of the entry's graph back to the caller's graph and ``weight`` is the
    product of the stratum probabilities above it.
    """
    total = 0.0
    work = [(graph, s, t, K, np.arange(graph.m), 0, 1.0)]
    while work:
        sub, u, v, k, origins, depth, weight = work.pop()
        value = _leaf_value(sub, u, v, k, params, rng)
        if value is None:
            try:
                plan = build_strata(sub, u, params.r)
            except InsufficientEdges:
                value = mc_hits(sub, u, v, k, rng) / k
        if value is not None:
            total += weight * value
            continue
        alloc = allocate_samples(plan.pi, k)
        if trace is not None:
            trace.append((depth, tuple(int(origins[e]) for e in plan.T), tuple(alloc)))
        children = []
        for i, (pi, k_i) in enumerate(zip(plan.pi, alloc)):
            if pi == 0.0:
                continue
            child, node_map = _simplify(sub, plan, i, u)
            # a stratum allocated no samples still gets one so its term is not dropped
            children.append((child, node_map[u], node_map.get(v), max(k_i, 1), origins[child.edge_origin],
                             depth + 1, weight * pi))
        work.extend(reversed(children))
    return total


@timed_estimate
def rss_estimate(graph, s, t, K, params=None, rng=None, trace=None):
    """Recursive stratified sampling.

    ``trace``, when a list, receives ``(depth, selected edges, K_i per stratum)``
    for every stratified call, edges given as ids of ``graph``.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    graph.check_node(s)
    graph.check_node(t)
    params = params or RssParams.from_config()
    rng = rng or RandomStream(default_seed())
    value = _stratify(graph, s, t, K, params, rng, trace)
    return Estimate(min(max(value, 0.0), 1.0), samples_used=K, seed=rng.seed)
