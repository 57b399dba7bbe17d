import shutil

import pytest

from core.graph_utils import UncertainGraph, chain_graph
from core.utils.config_utils import ROOT_DIR
from core.utils.rng import RandomStream


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Every test reads and writes a scratch copy of config.yaml."""
    path = tmp_path / 'config.yaml'
    shutil.copy(f"{ROOT_DIR}/config.yaml", path)
    monkeypatch.setenv('STREL_CONFIG', str(path))
    monkeypatch.delenv('STREL_SEED', raising=False)
    return path


@pytest.fixture
def rng():
    return RandomStream(7)


@pytest.fixture
def diamond():
    # R(0, 3) = 0.4375
    return UncertainGraph(4, [(0, 1, 0.5), (0, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5)])


@pytest.fixture
def chain():
    # R(0, 2) = 0.25
    return chain_graph([0.5, 0.5])


@pytest.fixture
def bag_example():
    """Seven nodes, fourteen edges; peels 0, 1, 2, 3, 4, 5 in that order and leaves 6 as the root."""
    edges = [
        (0, 1, 0.6), (1, 0, 0.6),
        (1, 5, 0.7), (5, 1, 0.7),
        (1, 6, 0.4), (6, 1, 0.4),
        (6, 2, 0.5), (2, 4, 0.5),
        (6, 4, 0.75), (4, 6, 0.3),
        (4, 3, 0.8), (3, 6, 0.9),
        (4, 5, 0.6), (5, 4, 0.2),
    ]
    return UncertainGraph(7, edges)


@pytest.fixture
def mesh():
    """Small cyclic graph with 0 < R(0, 4) < 1 that no estimator resolves analytically at small K."""
    edges = [
        (0, 1, 0.6), (0, 2, 0.3), (1, 2, 0.5), (2, 1, 0.4), (1, 3, 0.7),
        (2, 3, 0.2), (3, 4, 0.8), (2, 4, 0.35), (4, 0, 0.5),
    ]
    return UncertainGraph(5, edges)
