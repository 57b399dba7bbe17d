from dataclasses import dataclass

# ------------------------------------------
# Estimator output
# ------------------------------------------

@dataclass(frozen=True)
class Estimate:
    value: float
    samples_used: int
    elapsed: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"estimate {self.value} outside [0, 1]")
        if self.samples_used < 1:
            raise ValueError("an estimate consumes at least one sample")

# ------------------------------------------
# Output files of the benchmark harness
# ------------------------------------------

_OUTPUT_DIR = "output"
_CONVERGENCE_CSV = "convergence.csv"
_ACCURACY_CSV = "accuracy.csv"
_INDEX_CSV = "index.csv"

CSV_SCHEMA_VERSION = 1
CONVERGENCE_COLUMNS = ["estimator", "K", "R_K", "V_K", "rho", "seconds", "ms_per_sample"]
ACCURACY_COLUMNS = ["estimator", "K", "RE"]
INDEX_COLUMNS = ["method", "build_s", "load_s", "size_bytes", "refresh_s_per_query"]

# ------------------------------------------
# Index files
# ------------------------------------------

BFS_INDEX_MAGIC = b"STRBFS01"
PROBTREE_MAGIC = b"STRPT001"
PROBTREE_VERSION = 1

# ------------------------------------------
# Estimator names accepted by the dispatcher
# ------------------------------------------

ESTIMATOR_NAMES = ["mc", "bfs-sharing", "rhh", "rss", "lp+", "lp-legacy", "probtree"]
PROBTREE_INNER_NAMES = ["mc", "lp+", "rhh", "rss"]

__all__ = [
    "Estimate",
    "_OUTPUT_DIR",
    "_CONVERGENCE_CSV",
    "_ACCURACY_CSV",
    "_INDEX_CSV",
    "CSV_SCHEMA_VERSION",
    "CONVERGENCE_COLUMNS",
    "ACCURACY_COLUMNS",
    "INDEX_COLUMNS",
    "BFS_INDEX_MAGIC",
    "PROBTREE_MAGIC",
    "PROBTREE_VERSION",
    "ESTIMATOR_NAMES",
    "PROBTREE_INNER_NAMES",
]
