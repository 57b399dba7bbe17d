from core.estimator_backend.bfs_sharing import EdgeBitIndex, bfs_sharing_query, build_index
from core.estimator_backend.lazy_prop import lp_legacy_estimate, lp_plus_estimate
from core.estimator_backend.mc import mc_estimate
from core.estimator_backend.probtree import ProbTreeIndex, build_fwd_index, probtree_estimate
from core.estimator_backend.rhh import RhhParams, rhh_estimate
from core.estimator_backend.rss import RssParams, rss_estimate
from core.utils import load_key
from core.utils.errors import IndexFormatError
from core.utils.models import ESTIMATOR_NAMES


def _check_index(name, graph, index):
    if name == 'bfs-sharing':
        if not isinstance(index, EdgeBitIndex):
            raise IndexFormatError("bfs-sharing needs a BFS-sharing index")
        if index.bits.shape[0] != graph.m:
            raise IndexFormatError(f"index covers {index.bits.shape[0]} edges, graph has {graph.m}")
    elif name == 'probtree':
        if not isinstance(index, ProbTreeIndex):
            raise IndexFormatError("probtree needs a ProbTree index")
        if index.n != graph.n:
            raise IndexFormatError(f"index covers {index.n} nodes, graph has {graph.n}")
    else:
        raise IndexFormatError(f"estimator {name} takes no index")


def get_estimator(name, graph, index=None, inner=None, params=None, early_stop=None, width=None, refresh=False):
    """Estimator ``name`` bound to ``graph`` as a callable ``(s, t, K, rng) -> Estimate``.

    Index-based estimators build their index on first use unless one is given.
    With ``refresh`` the BFS-sharing index is redrawn before every query, at least
    K worlds wide.
    """
    if name not in ESTIMATOR_NAMES:
        raise ValueError(f"unknown estimator {name!r}, expected one of {ESTIMATOR_NAMES}")
    if index is not None:
        _check_index(name, graph, index)

    if name == 'mc':
        early_stop = bool(load_key('mc.early_stop')) if early_stop is None else early_stop
        return lambda s, t, K, rng: mc_estimate(graph, s, t, K, rng, early_stop=early_stop)
    elif name == 'rhh':
        params = params or RhhParams.from_config()
        return lambda s, t, K, rng: rhh_estimate(graph, s, t, K, params=params, rng=rng)
    elif name == 'rss':
        params = params or RssParams.from_config()
        return lambda s, t, K, rng: rss_estimate(graph, s, t, K, params=params, rng=rng)
    elif name == 'lp+':
        return lambda s, t, K, rng: lp_plus_estimate(graph, s, t, K, rng)
    elif name == 'lp-legacy':
        return lambda s, t, K, rng: lp_legacy_estimate(graph, s, t, K, rng)
    elif name == 'bfs-sharing':
        width = int(load_key('bfs_sharing.width')) if width is None else int(width)
        state = {'index': index}

        def query(s, t, K, rng):
            current = state['index']
            if current is None or refresh:
                L = max(width, K) if current is None else max(current.L, K)
                current = state['index'] = build_index(graph, L, rng.split(0))
            return bfs_sharing_query(current, graph, s, t, K, rng=rng)
        return query
    elif name == 'probtree':
        index = index or build_fwd_index(graph, w=width)
        inner = inner or load_key('probtree.inner')
        if params is None and inner in ('rhh', 'rss'):
            params = RhhParams.from_config() if inner == 'rhh' else RssParams.from_config()
        return lambda s, t, K, rng: probtree_estimate(index, s, t, K, inner=inner, rng=rng, params=params)
