"""
Observation laws.

The three i.i.d. families describe the marginal of each observation. `Ar1` describes a
scalar linear chain Y_k = a Y_{k-1} + W_k whose innovations W_k follow one of the same
three families with location zero; `sigma_w` is that family's scale parameter.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy import stats

from utils.error import InvalidLawError

INNOVATIONS = ("gaussian", "laplace", "cauchy")

# Smallest uniform handed to an inverse CDF; keeps ppf finite at u = 0.
_U_FLOOR = 2.0**-54


class ObservationLaw(ABC):
    kind: str = ""

    def is_markov(self) -> bool:
        return False

    @property
    @abstractmethod
    def dist(self):
        """Frozen scipy distribution: the marginal for i.i.d. laws, the innovation for Ar1."""
        raise NotImplementedError

    @abstractmethod
    def params(self) -> dict[str, float | str]:
        raise NotImplementedError

    def logpdf(self, y: np.ndarray) -> np.ndarray:
        return self.dist.logpdf(y)

    def pdf(self, y: np.ndarray) -> np.ndarray:
        return self.dist.pdf(y)

    def from_uniform(self, u: np.ndarray) -> np.ndarray:
        return self.dist.ppf(np.maximum(u, _U_FLOOR))

    def __str__(self) -> str:
        args = ", ".join("%s=%s" % kv for kv in self.params().items())
        return "%s(%s)" % (self.kind, args)


def _positive(law: str, name: str, value: float) -> None:
    if not (value > 0.0 and math.isfinite(value)):
        raise InvalidLawError(law, "%s must be strictly positive, got %r" % (name, value))


@dataclass(frozen=True)
class IidGaussian(ObservationLaw):
    mu: float
    sigma: float
    kind = "gaussian"

    def __post_init__(self) -> None:
        _positive(self.kind, "sigma", self.sigma)

    @property
    def dist(self):
        return stats.norm(loc=self.mu, scale=self.sigma)

    def params(self) -> dict[str, float | str]:
        return {"mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class IidLaplace(ObservationLaw):
    mu: float
    b: float
    kind = "laplace"

    def __post_init__(self) -> None:
        _positive(self.kind, "b", self.b)

    @property
    def dist(self):
        return stats.laplace(loc=self.mu, scale=self.b)

    def params(self) -> dict[str, float | str]:
        return {"mu": self.mu, "b": self.b}


@dataclass(frozen=True)
class IidCauchy(ObservationLaw):
    """No mean exists: never average raw observations drawn from this law."""

    x0: float
    gamma: float
    kind = "cauchy"

    def __post_init__(self) -> None:
        _positive(self.kind, "gamma", self.gamma)

    @property
    def dist(self):
        return stats.cauchy(loc=self.x0, scale=self.gamma)

    def params(self) -> dict[str, float | str]:
        return {"x0": self.x0, "gamma": self.gamma}


@dataclass(frozen=True)
class Ar1(ObservationLaw):
    a: float
    sigma_w: float
    innovation: str = "gaussian"
    kind = "ar1"

    def __post_init__(self) -> None:
        _positive(self.kind, "sigma_w", self.sigma_w)
        if not abs(self.a) < 1.0:
            raise InvalidLawError(self.kind, "|a| < 1 required for stationarity, got a=%r" % self.a)
        if self.innovation not in INNOVATIONS:
            raise InvalidLawError(self.kind, "unknown innovation family %r" % self.innovation)

    def is_markov(self) -> bool:
        return True

    @property
    def dist(self):
        return innovation_dist(self.innovation, self.sigma_w)

    def params(self) -> dict[str, float | str]:
        return {"a": self.a, "sigma_w": self.sigma_w, "innovation": self.innovation}

    def stationary_dist(self):
        """Exact stationary marginal; only available for Gaussian innovations."""
        if self.innovation != "gaussian":
            return None
        return stats.norm(loc=0.0, scale=self.sigma_w / math.sqrt(1.0 - self.a * self.a))


def innovation_dist(family: str, scale: float):
    if family == "gaussian":
        return stats.norm(loc=0.0, scale=scale)
    if family == "laplace":
        return stats.laplace(loc=0.0, scale=scale)
    return stats.cauchy(loc=0.0, scale=scale)


# Cauchy(0, gamma) and N(0, 1) share their CDF at 1: gamma = 1 / tan(pi (Phi(1) - 1/2))
CAUCHY_MATCHED_GAMMA = 0.544265907858
LAPLACE_MATCHED_B = math.sqrt(0.5)
