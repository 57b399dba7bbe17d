import math

import numpy as np
import pytest

from core.estimator_backend import RssParams, get_estimator
from core.graph_utils import random_graph
from core.oracle import exact_reliability
from core.utils import RandomStream

# small graphs have too few uncertain edges for the configured r
ORACLE_OPTIONS = {
    'mc': {},
    'bfs-sharing': {'refresh': True},
    'rhh': {},
    'rss': {'params': RssParams(r=3)},
    'lp+': {},
    'probtree': {'inner': 'mc'},
}
VARIANCE_OPTIONS = {'bfs-sharing': {'refresh': True}, 'probtree': {'inner': 'mc'}}


def _small_graphs():
    rng = RandomStream(99)
    return [random_graph(8, int(rng.integers(6, 15)), rng) for _ in range(20)]


@pytest.mark.parametrize("name", list(ORACLE_OPTIONS))
def test_mean_matches_oracle(name):
    runs, K = 200, 1000
    for g_idx, g in enumerate(_small_graphs()):
        exact = exact_reliability(g, 0, 7)
        estimator = get_estimator(name, g, **ORACLE_OPTIONS[name])
        stream = RandomStream(g_idx)
        values = np.array([estimator(0, 7, K, stream.split(i)).value for i in range(runs)])
        bound = 4 * math.sqrt(exact * (1 - exact) / (runs * K))
        assert values.mean() == pytest.approx(exact, abs=bound + 1e-9), f"graph {g_idx}"


def test_variance_ordering():
    K, runs = 500, 100
    pairs = [(0, 1), (2, 3)]
    names = list(ORACLE_OPTIONS)
    variances = {name: [] for name in names}
    for g_idx in range(5):
        g = random_graph(25, 100, RandomStream(500 + g_idx))
        for name in names:
            estimator = get_estimator(name, g, **VARIANCE_OPTIONS.get(name, {}))
            for p_idx, (s, t) in enumerate(pairs):
                stream = RandomStream(g_idx).split(p_idx)
                values = [estimator(s, t, K, stream.split(i)).value for i in range(runs)]
                variances[name].append(np.var(values, ddof=1))
    V = {name: float(np.mean(v)) for name, v in variances.items()}
    assert V['rss'] <= 1.1 * V['rhh']
    assert V['rhh'] <= 1.1 * V['mc']
    for name in ('bfs-sharing', 'lp+', 'probtree'):
        assert V['mc'] / 1.5 <= V[name] <= 1.5 * V['mc'], name
