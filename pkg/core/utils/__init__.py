from .config_utils import load_key, update_key, default_seed
from .decorator import exit_on_error, timed_estimate
from .rng import RandomStream
from .models import Estimate

__all__ = ["load_key", "update_key", "default_seed", "exit_on_error", "timed_estimate",
           "RandomStream", "Estimate"]
