from . import graph_utils, estimator_backend, oracle
from .utils import *

__all__ = [
    'load_key',
    'update_key',
    'default_seed',
    'graph_utils',
    'estimator_backend',
    'oracle',
]
