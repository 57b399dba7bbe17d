from .mc import mc_estimate, mc_hits, mc_variance, chernoff_sample_bound
from .bfs_sharing import EdgeBitIndex, build_index, refresh_index, save_index, load_index, bfs_sharing_query
from .rhh import PrefixGroup, RhhParams, rhh_estimate
from .rss import StratumPlan, RssParams, build_strata, simplify_graph, rss_estimate
from .lazy_prop import geometric_draw, lp_plus_estimate, lp_legacy_estimate
from .probtree import ProbTreeIndex, build_fwd_index, extract_query_graph, probtree_estimate, save_probtree, load_probtree
from .estimator_main import get_estimator

__all__ = [
    "mc_estimate",
    "mc_hits",
    "mc_variance",
    "chernoff_sample_bound",
    "EdgeBitIndex",
    "build_index",
    "refresh_index",
    "save_index",
    "load_index",
    "bfs_sharing_query",
    "PrefixGroup",
    "RhhParams",
    "rhh_estimate",
    "StratumPlan",
    "RssParams",
    "build_strata",
    "simplify_graph",
    "rss_estimate",
    "geometric_draw",
    "lp_plus_estimate",
    "lp_legacy_estimate",
    "ProbTreeIndex",
    "build_fwd_index",
    "extract_query_graph",
    "probtree_estimate",
    "save_probtree",
    "load_probtree",
    "get_estimator",
]
