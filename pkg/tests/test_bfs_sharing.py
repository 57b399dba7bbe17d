import numpy as np
import pytest

from core.estimator_backend import (bfs_sharing_query, build_index, get_estimator, load_index, refresh_index,
                                    save_index)
from core.estimator_backend.bfs_sharing import materialize_world, popcount, shared_bfs
from core.graph_utils import UncertainGraph, random_graph, reachable
from core.utils import RandomStream
from core.utils.errors import IndexFormatError, IndexTooNarrow


def test_index_layout():
    g = random_graph(6, 12, RandomStream(1))
    index = build_index(g, 130, RandomStream(2))
    assert index.bits.shape == (12, 3)
    assert index.bits.dtype == np.uint64
    # bits past L stay clear
    assert not np.any(index.bits[:, 2] >> np.uint64(2))


def test_certain_edge_is_set_in_every_world():
    g = UncertainGraph(2, [(0, 1, 1.0)])
    index = build_index(g, 100, RandomStream(3))
    assert popcount(index.bits[0]) == 100
    assert bfs_sharing_query(index, g, 0, 1, 100).value == 1.0


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_matches_per_world_bfs(seed):
    g = random_graph(8, 20, RandomStream(seed))
    index = build_index(g, 130, RandomStream(seed + 100))
    for K in (64, 100, 130):
        state = shared_bfs(index, g, 0, K)
        for t in range(1, g.n):
            hits = sum(reachable(g, materialize_world(index, k), 0, t) for k in range(K))
            assert popcount(state.reach[t]) == hits


def test_cascade_reaches_nodes_visited_before_their_late_parent():
    # 0 -> 2 is seen first; 0 -> 1 -> 2 only adds worlds once 1 is processed
    g = UncertainGraph(4, [(0, 2, 0.3), (0, 1, 0.9), (1, 2, 0.9), (2, 3, 0.9), (3, 1, 0.5)])
    index = build_index(g, 200, RandomStream(8))
    state = shared_bfs(index, g, 0, 200)
    for t in range(1, 4):
        hits = sum(reachable(g, materialize_world(index, k), 0, t) for k in range(200))
        assert popcount(state.reach[t]) == hits


def test_query_value_and_trivial_cases(diamond):
    index = build_index(diamond, 256, RandomStream(4))
    value = bfs_sharing_query(index, diamond, 0, 3, 256).value
    assert value == popcount(shared_bfs(index, diamond, 0, 256).reach[3]) / 256
    assert bfs_sharing_query(index, diamond, 1, 1, 10).value == 1.0
    with pytest.raises(IndexTooNarrow):
        bfs_sharing_query(index, diamond, 0, 3, 257)


def test_refresh_keeps_width_and_redraws(diamond):
    index = build_index(diamond, 256, RandomStream(5))
    fresh = refresh_index(index, diamond, RandomStream(6))
    assert fresh.L == 256
    assert not np.array_equal(fresh.bits, index.bits)


def test_save_and_load(tmp_path, diamond):
    index = build_index(diamond, 100, RandomStream(6))
    path = tmp_path / 'bfs.idx'
    save_index(index, path)
    loaded = load_index(path)
    assert loaded.L == 100
    assert np.array_equal(loaded.bits, index.bits)
    assert path.stat().st_size == index.nbytes


def test_load_rejects_foreign_and_truncated_files(tmp_path, diamond):
    bad = tmp_path / 'bad.idx'
    bad.write_bytes(b'NOTANIDX' + b'\0' * 32)
    with pytest.raises(IndexFormatError):
        load_index(bad)
    path = tmp_path / 'bfs.idx'
    save_index(build_index(diamond, 100, RandomStream(6)), path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(IndexFormatError):
        load_index(path)


def test_query_time_grows_with_K():
    g = random_graph(2000, 10_000, RandomStream(12))
    index = build_index(g, 1500, RandomStream(13))
    sources = RandomStream(14).permutation(g.n)[:20].tolist()
    times = {250: [], 1000: []}
    propagations = {250: 0, 1000: 0}
    for s in sources:
        t = (s + 1) % g.n
        for K in times:
            times[K].append(bfs_sharing_query(index, g, s, t, K).elapsed)
            propagations[K] += shared_bfs(index, g, s, K).propagations
    assert propagations[1000] > propagations[250]
    assert np.median(times[1000]) > np.median(times[250])


def test_refresh_makes_query_errors_independent(diamond):
    # R(0, 1) = 0.5 and R(0, 3) = 0.4375; the two events are positively correlated
    K, runs = 64, 400
    refreshed = get_estimator('bfs-sharing', diamond, width=K, refresh=True)
    shared_errors, refreshed_errors = [], []
    for i in range(runs):
        index = build_index(diamond, K, RandomStream(i))
        shared_errors.append((bfs_sharing_query(index, diamond, 0, 1, K).value - 0.5,
                              bfs_sharing_query(index, diamond, 0, 3, K).value - 0.4375))
        stream = RandomStream(10_000 + i)
        refreshed_errors.append((refreshed(0, 1, K, stream.split(1)).value - 0.5,
                                 refreshed(0, 3, K, stream.split(2)).value - 0.4375))
    shared_corr = np.corrcoef(np.array(shared_errors).T)[0, 1]
    refreshed_corr = np.corrcoef(np.array(refreshed_errors).T)[0, 1]
    assert shared_corr > 0.2
    assert abs(refreshed_corr) < 0.2
