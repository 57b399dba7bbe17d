class ReliabilityError(ValueError):
    """Base class for data errors raised while building or querying."""


class GraphFormatError(ReliabilityError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class UnknownNode(ReliabilityError):
    pass


class EdgeBudgetExceeded(ReliabilityError):
    def __init__(self, m, max_edges):
        self.m = m
        self.max_edges = max_edges
        super().__init__(f"exact enumeration needs m <= {max_edges}, graph has {m} edges")


class IndexTooNarrow(ReliabilityError):
    def __init__(self, K, L):
        super().__init__(f"query asks for K={K} worlds but the index holds only L={L}")


class IndexFormatError(ReliabilityError):
    pass


class InsufficientEdges(ReliabilityError):
    def __init__(self, found, r):
        self.found = found
        self.r = r
        super().__init__(f"only {found} uncertain edges reachable from the source, {r} requested")


class LossyWidthError(ReliabilityError):
    def __init__(self, w):
        super().__init__(f"width {w} > 2 is not lossless; pass lossy=True to build it anyway")


class WorkloadExhausted(ReliabilityError):
    def __init__(self, found, wanted, hops):
        super().__init__(f"found {found}/{wanted} sources with a target at exactly {hops} hops")


class ZeroBaseline(ReliabilityError):
    def __init__(self, pairs):
        self.pairs = list(pairs)
        super().__init__(f"baseline reliability is 0 for pairs {self.pairs}")


class NoExpandableEdge(RuntimeError):
    """An undecided prefix group had no undetermined edge next to the reached set."""


class NonConvergent(RuntimeError):
    def __init__(self, estimator, last_k, rho):
        self.estimator = estimator
        self.last_k = last_k
        self.rho = rho
        super().__init__(f"{estimator} did not reach the dispersion threshold by K={last_k} (rho={rho:.6g})")
