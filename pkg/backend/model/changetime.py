"""
Change-time laws.

Both laws live on {0, 1, 2, ...}: a geometric law has P{tau_a = k} = p (1 - p)^k, so
p = 1 puts all mass at zero, and the tail decays at rate -log(1 - p).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from utils.error import InvalidLawError, ZeroProbabilityConditionError


class ChangeTimeLaw(ABC):
    kind: str = ""

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> int:
        raise NotImplementedError

    @abstractmethod
    def log_survival(self, k: np.ndarray) -> np.ndarray:
        """log P{tau_a > k}, elementwise."""
        raise NotImplementedError

    @abstractmethod
    def mean_residual_array(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    @abstractmethod
    def mean(self) -> float:
        raise NotImplementedError

    @property
    @abstractmethod
    def tail_rate(self) -> float:
        raise NotImplementedError

    @property
    @abstractmethod
    def rho(self) -> float:
        """The hazard parameter as quoted for the law (p of its slowest component)."""
        raise NotImplementedError

    def is_geometric(self) -> bool:
        return False

    def mean_residual(self, k: int) -> float:
        """E[tau_a - k | tau_a > k]."""
        return float(self.mean_residual_array(np.asarray([k]))[0])

    def params(self) -> dict[str, float]:
        return {}


def _check_p(name: str, p: float) -> None:
    if not (0.0 < p <= 1.0):
        raise InvalidLawError(name, "probability must lie in (0, 1], got %r" % p)


@dataclass(frozen=True)
class Geometric(ChangeTimeLaw):
    p: float
    kind = "geometric"

    def __post_init__(self) -> None:
        _check_p("geometric", self.p)

    def sample(self, rng: np.random.Generator) -> int:
        # numpy's geometric counts trials, support {1, 2, ...}
        return int(rng.geometric(self.p)) - 1

    def log_survival(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        if self.p == 1.0:
            return np.full(k.shape, -np.inf)
        return (k + 1.0) * math.log1p(-self.p)

    def mean_residual_array(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k)
        if self.p == 1.0 and k.size:
            raise ZeroProbabilityConditionError(int(np.min(k)))
        # memoryless
        return np.full(k.shape, 1.0 / self.p)

    @property
    def mean(self) -> float:
        return (1.0 - self.p) / self.p

    @property
    def tail_rate(self) -> float:
        return math.inf if self.p == 1.0 else -math.log1p(-self.p)

    @property
    def rho(self) -> float:
        return self.p

    def is_geometric(self) -> bool:
        return True

    def params(self) -> dict[str, float]:
        return {"p": self.p}


@dataclass(frozen=True)
class Mixture(ChangeTimeLaw):
    """With probability w the change time is geometric(p_slow), else geometric(p_fast)."""

    w: float
    p_slow: float
    p_fast: float
    kind = "mixture"

    def __post_init__(self) -> None:
        if not (0.0 <= self.w <= 1.0):
            raise InvalidLawError("mixture", "weight must lie in [0, 1], got %r" % self.w)
        _check_p("mixture.p_slow", self.p_slow)
        _check_p("mixture.p_fast", self.p_fast)

    @property
    def components(self) -> tuple[Geometric, Geometric]:
        return Geometric(self.p_slow), Geometric(self.p_fast)

    def sample(self, rng: np.random.Generator) -> int:
        slow, fast = self.components
        return (slow if rng.random() < self.w else fast).sample(rng)

    def _log_weighted(self, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        slow, fast = self.components
        with np.errstate(divide="ignore"):
            ls = np.log(self.w) + slow.log_survival(k)
            lf = np.log1p(-self.w) + fast.log_survival(k)
        return ls, lf

    def log_survival(self, k: np.ndarray) -> np.ndarray:
        ls, lf = self._log_weighted(np.asarray(k, dtype=float))
        return np.logaddexp(ls, lf)

    def mean_residual_array(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        ls, lf = self._log_weighted(k)
        total = np.logaddexp(ls, lf)
        if np.any(np.isneginf(total)):
            raise ZeroProbabilityConditionError(int(k[np.isneginf(total)][0]))
        # posterior component weights given tau_a > k
        ws = np.exp(ls - total)
        wf = np.exp(lf - total)
        return ws / self.p_slow + wf / self.p_fast

    @property
    def mean(self) -> float:
        slow, fast = self.components
        return self.w * slow.mean + (1.0 - self.w) * fast.mean

    @property
    def tail_rate(self) -> float:
        slow, fast = self.components
        rates = [c.tail_rate for c, wt in ((slow, self.w), (fast, 1.0 - self.w)) if wt > 0]
        return min(rates)

    @property
    def rho(self) -> float:
        if self.w == 0.0:
            return self.p_fast
        if self.w == 1.0:
            return self.p_slow
        return min(self.p_slow, self.p_fast)

    def params(self) -> dict[str, float]:
        return {"w": self.w, "p_slow": self.p_slow, "p_fast": self.p_fast}


def sample_change_time(law: ChangeTimeLaw, rng: np.random.Generator) -> int:
    return law.sample(rng)


def mean_residual(law: ChangeTimeLaw, k: int) -> float:
    return law.mean_residual(k)
