import math
import time

import pytest

from core.estimator_backend import chernoff_sample_bound, mc_estimate, mc_hits, mc_variance
from core.graph_utils import UncertainGraph, random_graph
from core.oracle import exact_reliability
from core.utils import Estimate, RandomStream


def test_trivial_cases(diamond, rng):
    assert mc_estimate(diamond, 1, 1, 10, rng).value == 1.0
    assert mc_estimate(UncertainGraph(2, [(0, 1, 1.0)]), 0, 1, 50, rng).value == 1.0
    assert mc_estimate(diamond, 3, 0, 50, rng).value == 0.0


def test_estimate_is_stamped(diamond, rng):
    estimate = mc_estimate(diamond, 0, 3, 100, rng)
    assert estimate.samples_used == 100
    assert estimate.seed == rng.seed
    assert estimate.elapsed > 0.0


def test_rejects_zero_samples(diamond, rng):
    with pytest.raises(ValueError):
        mc_estimate(diamond, 0, 3, 0, rng)


def test_diamond_within_four_sigma(diamond):
    K = 20_000
    sigma = math.sqrt(0.4375 * 0.5625 / K)
    assert mc_estimate(diamond, 0, 3, K, RandomStream(1)).value == pytest.approx(0.4375, abs=4 * sigma)


def test_early_stop_replays_same_worlds():
    g = random_graph(8, 20, RandomStream(2))
    with_stop = mc_hits(g, 0, 5, 500, RandomStream(3), early_stop=True)
    without = mc_hits(g, 0, 5, 500, RandomStream(3), early_stop=False)
    assert with_stop == without


def test_random_graph_against_oracle():
    g = random_graph(6, 10, RandomStream(4))
    exact = exact_reliability(g, 0, 3)
    K = 20_000
    sigma = math.sqrt(max(exact * (1 - exact), 1e-12) / K)
    assert mc_estimate(g, 0, 3, K, RandomStream(5)).value == pytest.approx(exact, abs=4 * sigma + 1e-9)


def test_variance_formula():
    assert mc_variance(0.5, 1000) == pytest.approx(0.00025)
    assert mc_variance(1.0, 10) == 0.0
    with pytest.raises(ValueError):
        mc_variance(1.2, 10)


def test_chernoff_bound():
    assert chernoff_sample_bound(0.1, 0.05, 0.5) == math.ceil(600 * math.log(40))
    with pytest.raises(ValueError):
        chernoff_sample_bound(0.1, 0.05, 0.0)
    with pytest.raises(ValueError):
        chernoff_sample_bound(0.0, 0.05, 0.5)
    with pytest.raises(ValueError):
        chernoff_sample_bound(0.1, 1.0, 0.5)


def test_chernoff_sized_runs_meet_the_guarantee(diamond):
    eps, lam, exact = 0.1, 0.1, 0.4375
    K = chernoff_sample_bound(eps, lam, exact)
    inside = sum(abs(mc_estimate(diamond, 0, 3, K, RandomStream(100 + i)).value - exact) <= eps * exact
                 for i in range(100))
    assert inside >= 100 * (1 - lam)


def test_estimate_validates_range():
    with pytest.raises(ValueError):
        Estimate(1.5, 1)
    with pytest.raises(ValueError):
        Estimate(0.5, 0)


def test_chernoff_bound_holds_on_a_single_edge():
    K = chernoff_sample_bound(0.1, 0.01, 0.5)
    assert K == 3179
    g = UncertainGraph(2, [(0, 1, 0.5)])
    within = sum(abs(mc_estimate(g, 0, 1, K, RandomStream(i)).value - 0.5) / 0.5 <= 0.1 for i in range(100))
    assert within >= 99


def test_each_round_moves_the_stream_by_edge_count():
    g = random_graph(8, 20, RandomStream(2))
    used = RandomStream(3)
    mc_hits(g, 0, 5, 40, used)
    fresh = RandomStream(3)
    fresh.skip(40 * g.m)
    assert used.generator.random() == fresh.generator.random()


def test_round_cost_ignores_untouched_edges():
    lone = UncertainGraph(2, [(0, 1, 0.5)])
    # 40000 more edges the source can never reach
    far = [(u, v, 0.5) for u in range(2, 203) for v in range(2, 203) if u != v][:40_000]
    crowded = UncertainGraph(203, [(0, 1, 0.5)] + far)
    start = time.perf_counter()
    lone_hits = mc_hits(lone, 0, 1, 2000, RandomStream(1))
    small = time.perf_counter() - start
    start = time.perf_counter()
    crowded_hits = mc_hits(crowded, 0, 1, 2000, RandomStream(1))
    large = time.perf_counter() - start
    assert 800 < lone_hits < 1200 and 800 < crowded_hits < 1200
    assert large < 10 * small + 0.1
