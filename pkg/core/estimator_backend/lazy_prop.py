import heapq
from collections import deque
import numpy as np

from core.utils.decorator import timed_estimate
from core.utils.models import Estimate


def geometric_draw(p, rng):
    """Inactive visits before an edge of probability p fires: P(X=k) = (1-p)^k p."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"geometric draw needs p in (0, 1], got {p}")
    return rng.geometric(p)


class LazyPropagation:
    """Round-by-round sampler that skips edges by geometric draws.

    Every node keeps a visit counter and a heap of ``(due visit, neighbor, edge)``
    entries that survive across rounds. When a node is processed on visit ``c``,
    all entries due at ``c`` fire and are rescheduled ``X + c + 1`` ahead. The
    ``legacy`` flag reschedules at ``X + c`` instead, which lets an edge that
    just fired fire again on the very next visit and so overestimates.
    """

    def __init__(self, graph, s, t, rng, legacy=False):
        self.graph = graph
        self.s = s
        self.t = t
        self.rng = rng
        self.legacy = legacy
        self.counter = [0] * graph.n
        self.heaps = [None] * graph.n
        self._stamp = [0] * graph.n
        self.rounds = 0
        self.fired = np.zeros(graph.m, dtype=np.int64)
        self.visits = np.zeros(graph.n, dtype=np.int64)

    def _init_node(self, v):
        heap = [(geometric_draw(self.graph.prob_list[e], self.rng), self.graph.target_list[e], e)
                for e in self.graph.out_edges[v]]
        heapq.heapify(heap)
        self.heaps[v] = heap

    def _process(self, v, frontier):
        if self.heaps[v] is None:
            self._init_node(v)
        heap, c = self.heaps[v], self.counter[v]
        due = []
        while heap and heap[0][0] <= c:
            due.append(heapq.heappop(heap))
        hit = False
        shift = 0 if self.legacy else 1
        for _, nbr, e in due:
            self.fired[e] += 1
            if self._stamp[nbr] != self.rounds:
                self._stamp[nbr] = self.rounds
                frontier.append(nbr)
            if nbr == self.t:
                hit = True
            p = self.graph.prob_list[e]
            heapq.heappush(heap, (geometric_draw(p, self.rng) + c + shift, nbr, e))
        self.counter[v] = c + 1
        self.visits[v] += 1
        return hit

    def run_round(self):
        """One sampled world, explored lazily; True if t was reached."""
        self.rounds += 1
        if self.s == self.t:
            return True
        self._stamp[self.s] = self.rounds
        frontier = deque([self.s])
        while frontier:
            if self._process(frontier.popleft(), frontier):
                return True
        return False

    def run(self, K):
        return sum(self.run_round() for _ in range(K))

    def heap_safe(self):
        """No pending entry is due before its node's current counter."""
        return all(heap is None or not heap or heap[0][0] >= c
                   for heap, c in zip(self.heaps, self.counter))


def _lazy_estimate(graph, s, t, K, rng, legacy):
    if K < 1:
        raise ValueError("K must be at least 1")
    graph.check_node(s)
    graph.check_node(t)
    hits = LazyPropagation(graph, s, t, rng, legacy=legacy).run(K)
    return Estimate(hits / K, samples_used=K, seed=rng.seed)


@timed_estimate
def lp_plus_estimate(graph, s, t, K, rng):
    return _lazy_estimate(graph, s, t, K, rng, legacy=False)


@timed_estimate
def lp_legacy_estimate(graph, s, t, K, rng):
    """Original rescheduling rule, kept to reproduce its overestimation."""
    return _lazy_estimate(graph, s, t, K, rng, legacy=True)
