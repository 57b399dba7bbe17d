import math
from collections import deque

from core.utils.config_utils import load_key
from core.utils.decorator import timed_estimate
from core.utils.models import Estimate


def mc_hits(graph, s, t, K, rng, probs=None, early_stop=True):
    """Number of rounds out of K in which t is reached from s.

    Uniforms are drawn lazily, one per out-edge the BFS looks at and in the order
    it looks at them; an edge is present iff its uniform is below its probability.
    Every round then skips the stream ahead to exactly ``m`` draws past its start,
    so a round costs only the edges it touches and switching ``early_stop`` off
    replays the same worlds. ``probs`` overrides the graph's probabilities (0
    removes an edge).
    """
    if s == t:
        return K
    probs = graph.prob_list if probs is None else probs
    out_edges, targets = graph.out_edges, graph.target_list
    draw = rng.generator.random
    visited = [0] * graph.n
    hits = 0
    for k in range(1, K + 1):
        used = 0
        visited[s] = k
        queue = deque([s])
        hit = False
        while queue:
            u = queue.popleft()
            for e in out_edges[u]:
                used += 1
                if draw() >= probs[e]:
                    continue
                v = targets[e]
                if visited[v] == k:
                    continue
                visited[v] = k
                if v == t:
                    hit = True
                    if early_stop:
                        break
                queue.append(v)
            if hit and early_stop:
                break
        rng.skip(graph.m - used)
        hits += hit
    return hits


@timed_estimate
def mc_estimate(graph, s, t, K, rng, early_stop=None):
    if K < 1:
        raise ValueError("K must be at least 1")
    graph.check_node(s)
    graph.check_node(t)
    early_stop = load_key('mc.early_stop') if early_stop is None else early_stop
    hits = mc_hits(graph, s, t, K, rng, early_stop=early_stop)
    return Estimate(hits / K, samples_used=K, seed=rng.seed)


def mc_variance(r_hat, K):
    if not 0.0 <= r_hat <= 1.0 or K < 1:
        raise ValueError("need r_hat in [0, 1] and K >= 1")
    return r_hat * (1.0 - r_hat) / K


def chernoff_sample_bound(epsilon, lam, r):
    """Samples that keep the relative error within epsilon with probability 1 - lam."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if not 0.0 < r <= 1.0:
        raise ValueError("the bound diverges unless 0 < r <= 1")
    return math.ceil(3.0 / (epsilon ** 2 * r) * math.log(2.0 / lam))
