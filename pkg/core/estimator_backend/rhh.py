import math
from dataclasses import dataclass, field
from enum import Enum

from core.estimator_backend.mc import mc_hits
from core.utils.config_utils import default_seed, load_key
from core.utils.decorator import timed_estimate
from core.utils.errors import NoExpandableEdge
from core.utils.models import Estimate
from core.utils.rng import RandomStream


@dataclass(frozen=True)
class PrefixGroup:
    """Worlds that contain every edge of E1 and none of E2."""
    E1: frozenset = field(default_factory=frozenset)
    E2: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.E1 & self.E2:
            raise ValueError(f"edges {sorted(self.E1 & self.E2)} both forced present and absent")

    def include(self, e):
        return PrefixGroup(self.E1 | {e}, self.E2)

    def exclude(self, e):
        return PrefixGroup(self.E1, self.E2 | {e})


@dataclass(frozen=True)
class RhhParams:
    threshold: int = 5

    def __post_init__(self):
        if self.threshold < 1:
            raise ValueError("threshold must be at least 1")

    @classmethod
    def from_config(cls):
        return cls(threshold=int(load_key('rhh.threshold')))


class Termination(Enum):
    PATH_FOUND = 'path'
    CUT_FOUND = 'cut'
    UNDECIDED = 'undecided'


def group_probability(graph, g):
    p = 1.0
    for e in g.E1:
        p *= graph.prob_list[e]
    for e in g.E2:
        p *= 1.0 - graph.prob_list[e]
    return p


def _certain(graph, g, e):
    """Edge present in every world of the group: forced by E1 or of probability 1."""
    return e in g.E1 or (graph.prob_list[e] >= 1.0 and e not in g.E2)


def detect_termination(graph, g, s, t):
    if s == t:
        return Termination.PATH_FOUND
    if t in graph.reachable_from(s, usable=lambda e: _certain(graph, g, e)):
        return Termination.PATH_FOUND
    if t not in graph.reachable_from(s, usable=lambda e: e not in g.E2):
        return Termination.CUT_FOUND
    return Termination.UNDECIDED


def select_expandable_edge(graph, g, s):
    """First undetermined edge met by a DFS from s that only walks certain edges.

    Certain edges are the E1 edges and every edge of probability 1; they are never
    split on. Out-edges are tried in adjacency (edge index) order and a certain
    edge is descended into before the next sibling is looked at.
    """
    visited = {s}
    stack = [iter(graph.out_edges[s])]
    while stack:
        for e in stack[-1]:
            if e in g.E2:
                continue
            if _certain(graph, g, e):
                v = graph.target_list[e]
                if v not in visited:
                    visited.add(v)
                    stack.append(iter(graph.out_edges[v]))
                    break
                continue
            return e
        else:
            stack.pop()
    raise NoExpandableEdge(f"no undetermined edge leaves the certain-reached set of {s}")


def _fallback(graph, g, s, t, K, rng):
    """Plain MC on the conditioned graph: E1 edges certain, E2 edges deleted."""
    probs = list(graph.prob_list)
    for e in g.E1:
        probs[e] = 1.0
    for e in g.E2:
        probs[e] = 0.0
    return mc_hits(graph, s, t, K, rng, probs=probs) / K


def _split_tree(graph, s, t, K, params, rng, trace):
    """Sum of weight * leaf value over the split tree, walked depth first.

    A node of the work stack is ``(group, K, depth, weight)`` where ``weight`` is
    the product of the branch probabilities above it. The right branch is pushed
    first so nodes are expanded in the same order as a left-first recursion.
    """
    total = 0.0
    work = [(PrefixGroup(), K, 0, 1.0)]
    while work:
        g, k, depth, weight = work.pop()
        state = detect_termination(graph, g, s, t)
        if state is Termination.PATH_FOUND:
            total += weight
            continue
        if state is Termination.CUT_FOUND:
            continue
        if k <= params.threshold:
            total += weight * _fallback(graph, g, s, t, k, rng)
            continue
        e = select_expandable_edge(graph, g, s)
        p = graph.prob_list[e]
        k1 = math.floor(k * p)
        k2 = k - k1
        if trace is not None:
            trace.append((depth, int(graph.edge_origin[e]), k1, k2))
        # a branch allocated no samples still gets one so its term is not dropped
        work.append((g.exclude(e), max(k2, 1), depth + 1, weight * (1.0 - p)))
        work.append((g.include(e), max(k1, 1), depth + 1, weight * p))
    return total


@timed_estimate
def rhh_estimate(graph, s, t, K, params=None, rng=None, trace=None):
    """Recursive sampling with proportional sample allocation.

    ``trace``, when a list, receives ``(depth, edge, K1, K2)`` for every split.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    graph.check_node(s)
    graph.check_node(t)
    params = params or RhhParams.from_config()
    rng = rng or RandomStream(default_seed())
    value = _split_tree(graph, s, t, K, params, rng, trace)
    return Estimate(min(max(value, 0.0), 1.0), samples_used=K, seed=rng.seed)
