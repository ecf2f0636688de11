"""
Drift functions F = L + r driving the surrogate information state.

Log-likelihood ratios are evaluated in closed form whenever both laws of a pair share a
family; the generic log-density difference is only used for mixed families.

Closed forms, with d_i = x_i - m_i the residual under law i:
    Gaussian   log(s0/s1) + d0^2/(2 s0^2) - d1^2/(2 s1^2)
               equal scales: (d0 - d1)(d0 + d1) / (2 s^2), linear in y for i.i.d. pairs
    Laplace    log(b0/b1) + |d0|/b0 - |d1|/b1, piecewise linear
    Cauchy     log(g0/g1) + log1p((d0/g0)^2) - log1p((d1/g1)^2), log of a rational
For a Markov pair the residuals are innovations, d_i = z - A^i x, and the i.i.d.
formulas apply to the innovation densities. With unit Gaussian innovations this gives
L(x, z) = a x^2 - b x z, a = ((A^0)^2 - (A^1)^2)/2, b = A^0 - A^1.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from backend.model.observation import (
    Ar1,
    IidCauchy,
    IidGaussian,
    IidLaplace,
    ObservationLaw,
    innovation_dist,
)
from utils.error import DriftArgumentError, DriftUndefinedError, InvalidLawError


def _family_scale_loc(law: ObservationLaw) -> tuple[str, float, float]:
    if isinstance(law, IidGaussian):
        return "gaussian", law.sigma, law.mu
    if isinstance(law, IidLaplace):
        return "laplace", law.b, law.mu
    if isinstance(law, IidCauchy):
        return "cauchy", law.gamma, law.x0
    if isinstance(law, Ar1):
        return law.innovation, law.sigma_w, 0.0
    raise InvalidLawError(str(law), "not a density-valued law")


def _log_ratio(law1: ObservationLaw, x1: np.ndarray, law0: ObservationLaw, x0: np.ndarray) -> np.ndarray:
    """log f1(x1) - log f0(x0), elementwise."""
    fam1, s1, m1 = _family_scale_loc(law1)
    fam0, s0, m0 = _family_scale_loc(law0)
    d1 = x1 - m1
    d0 = x0 - m0
    if fam1 == fam0 == "gaussian":
        if s1 == s0:
            return (d0 - d1) * (d0 + d1) / (2.0 * s0 * s0)
        return np.log(s0 / s1) + d0 * d0 / (2.0 * s0 * s0) - d1 * d1 / (2.0 * s1 * s1)
    if fam1 == fam0 == "laplace":
        return np.log(s0 / s1) + np.abs(d0) / s0 - np.abs(d1) / s1
    if fam1 == fam0 == "cauchy":
        return np.log(s0 / s1) + np.log1p((d0 / s0) ** 2) - np.log1p((d1 / s1) ** 2)
    lp0 = innovation_dist(fam0, s0).logpdf(d0)
    if np.any(np.isneginf(lp0)):
        bad = np.atleast_1d(x0)[np.atleast_1d(np.isneginf(lp0))][0]
        raise DriftUndefinedError(float(bad))
    return innovation_dist(fam1, s1).logpdf(d1) - lp0


class DriftFn(ABC):
    shift: float

    def is_markov(self) -> bool:
        return False

    @abstractmethod
    def llr(self, y_prev: Optional[np.ndarray], y: np.ndarray) -> np.ndarray:
        """The unshifted log-likelihood ratio."""
        raise NotImplementedError

    @abstractmethod
    def describe(self) -> dict:
        raise NotImplementedError

    def evaluate(self, y_prev: Optional[np.ndarray], y: np.ndarray) -> np.ndarray:
        return self.llr(y_prev, y) + self.shift

    def with_shift(self, r: float) -> "DriftFn":
        return replace(self, shift=float(r))  # type: ignore[type-var]


@dataclass(frozen=True)
class IidLlr(DriftFn):
    breve0: ObservationLaw
    breve1: ObservationLaw
    shift: float = 0.0

    def __post_init__(self) -> None:
        for law in (self.breve0, self.breve1):
            if law.is_markov():
                raise InvalidLawError(str(law), "i.i.d. drift needs i.i.d. design laws")

    def llr(self, y_prev: Optional[np.ndarray], y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return _log_ratio(self.breve1, y, self.breve0, y)

    def describe(self) -> dict:
        return {
            "kind": "iid_llr",
            "breve0": {"kind": self.breve0.kind, "params": self.breve0.params()},
            "breve1": {"kind": self.breve1.kind, "params": self.breve1.params()},
            "shift": self.shift,
        }


@dataclass(frozen=True)
class MarkovLlr(DriftFn):
    g0: Ar1
    g1: Ar1
    shift: float = 0.0

    def __post_init__(self) -> None:
        if not (isinstance(self.g0, Ar1) and isinstance(self.g1, Ar1)):
            raise InvalidLawError("markov_llr", "both design laws must be Ar1")

    def is_markov(self) -> bool:
        return True

    def llr(self, y_prev: Optional[np.ndarray], y: np.ndarray) -> np.ndarray:
        if y_prev is None:
            raise DriftArgumentError("a Markov drift needs the previous observation")
        x = np.asarray(y_prev, dtype=float)
        z = np.asarray(y, dtype=float)
        return _log_ratio(self.g1, z - self.g1.a * x, self.g0, z - self.g0.a * x)

    def describe(self) -> dict:
        return {
            "kind": "markov_llr",
            "g0": {"kind": self.g0.kind, "params": self.g0.params()},
            "g1": {"kind": self.g1.kind, "params": self.g1.params()},
            "shift": self.shift,
        }


def drift_eval(d: DriftFn, y_prev: Optional[float], y: float) -> float:
    if d.is_markov() != (y_prev is not None):
        raise DriftArgumentError(
            "previous observation must be given exactly for Markov drifts"
        )
    prev = None if y_prev is None else np.asarray(y_prev, dtype=float)
    return float(d.evaluate(prev, np.asarray(y, dtype=float)))
