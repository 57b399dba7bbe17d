import math
from dataclasses import dataclass
import numpy as np

from core.utils.config_utils import load_key


@dataclass(frozen=True)
class InverseOutDegree:
    """p(u->v) = 1 / outdeg(u)."""


@dataclass(frozen=True)
class UniformChoice:
    values: tuple = (0.1, 0.01, 0.001)

    def __post_init__(self):
        if not self.values or not all(0.0 < v <= 1.0 for v in self.values):
            raise ValueError(f"uniform choice values must lie in (0, 1], got {self.values}")


@dataclass(frozen=True)
class ExponentialCdf:
    """p = 1 - exp(-c / mu) for an edge carrying count c."""
    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class Fixed:
    p: float

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"fixed probability {self.p} outside (0, 1]")


def model_from_name(name, value=None, mu=None, values=None):
    """Build a model from its CLI spelling."""
    if name == 'inverse-outdegree':
        return InverseOutDegree()
    if name == 'uniform':
        return UniformChoice(tuple(values) if values else tuple(load_key('probability_models.uniform_values')))
    if name == 'exponential':
        return ExponentialCdf(float(mu if mu is not None else load_key('probability_models.exponential_mu')))
    if name == 'fixed':
        if value is None:
            raise ValueError("the fixed model needs a probability value")
        return Fixed(float(value))
    raise ValueError(f"unknown probability model {name!r}")


def assign_probabilities(graph, model, rng):
    """Return a copy of ``graph`` with every edge probability set by ``model``."""
    m = graph.m
    if isinstance(model, InverseOutDegree):
        outdeg = np.bincount(graph.sources, minlength=graph.n)
        probs = 1.0 / outdeg[graph.sources]
    elif isinstance(model, UniformChoice):
        values = np.asarray(model.values, dtype=np.float64)
        choice = rng.generator.integers(0, len(values), size=m)
        probs = values[choice]
    elif isinstance(model, ExponentialCdf):
        counts = graph.weights if graph.weights is not None else np.ones(m)
        probs = -np.expm1(-counts / model.mu)
    elif isinstance(model, Fixed):
        probs = np.full(m, model.p)
    else:
        raise TypeError(f"not a probability model: {model!r}")
    # exp cdf of a tiny count can underflow to 0; keep the (0, 1] contract
    probs = np.clip(probs, math.ulp(0.0), 1.0)
    return graph.with_probabilities(probs)
