"""
Log moment generating functions of a drift under the pre- and post-change laws.

    Lambda_i(v) = log E_i[exp(v F)]

For i.i.d. drifts the expectation is a one-dimensional integral, computed by adaptive
quadrature of the tilted density on a window that starts at the 1e-14 quantiles of the
law and is widened until the tilted integrand is negligible at both ends. For Markov
drifts the expectation is over consecutive pairs of the stationary chain and is a
Monte-Carlo average; the sample is drawn once per profile so Lambda is a smooth,
deterministic function of v and can be handed to a root finder.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.signal import lfilter
from scipy.special import logsumexp

from backend.model.observation import Ar1, ObservationLaw
from backend.sis.drift import DriftFn
from utils.error import LambdaInfiniteError, QcdValidationError
from utils.rng import Stream, generator

_log = logging.getLogger(__name__)

TAIL_QUANTILE = 1e-14
# log of the integrand ratio, boundary vs peak, below which the tail is dropped
NEGLIGIBLE = math.log(1e-16)
MAX_EXPANSIONS = 40
MARKOV_BURN_IN = 1000
QUAD_EPS = 1e-14


@dataclass
class MgfProfile:
    drift: DriftFn
    pre_law: ObservationLaw
    post_law: ObservationLaw
    rho_a: float
    n_mc: int = 10**7
    seed: int = 0
    _pairs: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.rho_a > 0:
            raise QcdValidationError("tail rate rho_a must be positive, got %r" % self.rho_a)
        if self.drift.is_markov() and not (self.pre_law.is_markov() and self.post_law.is_markov()):
            raise QcdValidationError("a Markov drift needs Ar1 pre/post laws")

    def law(self, which: str) -> ObservationLaw:
        if which == "pre":
            return self.pre_law
        if which == "post":
            return self.post_law
        raise QcdValidationError("which must be 'pre' or 'post', got %r" % which)

    def with_drift(self, drift: DriftFn) -> "MgfProfile":
        prof = MgfProfile(drift, self.pre_law, self.post_law, self.rho_a, self.n_mc, self.seed)
        prof._pairs = self._pairs
        return prof

    def markov_pairs(self, which: str) -> tuple[np.ndarray, np.ndarray]:
        """Consecutive (Y_k, Y_{k+1}) from the stationary chain of the designated law."""
        if which not in self._pairs:
            law: Ar1 = self.law(which)  # type: ignore[assignment]
            rng = generator(self.seed, Stream.MOMENTS, 0 if which == "pre" else 1)
            w = law.from_uniform(rng.random(self.n_mc + MARKOV_BURN_IN + 1))
            y = lfilter([1.0], [1.0, -law.a], w)[MARKOV_BURN_IN:]
            self._pairs[which] = (y[:-1], y[1:])
        return self._pairs[which]


@dataclass(frozen=True)
class MomentEstimate:
    value: float
    se: float = 0.0


def _core(dist) -> tuple[float, float]:
    med = float(dist.median())
    return med, float(dist.ppf(0.75) - dist.ppf(0.25))


def _quad_pieces(fn: Callable[[float], float], lo: float, hi: float, center: float, width: float) -> float:
    """Integral of fn over [lo, hi], split so the bulk sits in its own piece."""
    cuts = [lo, max(lo, center - width), min(hi, center + width), hi]
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b > a:
                total += integrate.quad(fn, a, b, epsabs=QUAD_EPS, epsrel=QUAD_EPS, limit=400)[0]
    return total


def _tilted_log_integral(law: ObservationLaw, g: Callable[[np.ndarray], np.ndarray], v: float) -> float:
    """log of integral of exp(logpdf(x) + g(x)) dx."""
    dist = law.dist
    lo, hi = float(dist.ppf(TAIL_QUANTILE)), float(dist.ppf(1.0 - TAIL_QUANTILE))
    med, iqr = _core(dist)
    dense = med + iqr * np.linspace(-20.0, 20.0, 2001)

    def h(x):
        with np.errstate(over="ignore", invalid="ignore"):
            return dist.logpdf(x) + g(x)

    for _ in range(MAX_EXPANSIONS + 1):
        grid = np.union1d(np.linspace(lo, hi, 4001), dense[(dense > lo) & (dense < hi)])
        hv = h(grid)
        if np.any(np.isnan(hv)) or np.any(np.isposinf(hv)):
            raise LambdaInfiniteError(v)
        top = float(np.max(hv))
        left_open = hv[0] - top >= NEGLIGIBLE
        right_open = hv[-1] - top >= NEGLIGIBLE
        if not (left_open or right_open):
            break
        width = hi - lo
        if left_open:
            lo -= width
        if right_open:
            hi += width
        _log.debug("widening quadrature window to [%g, %g] at v=%g", lo, hi, v)
    else:
        raise LambdaInfiniteError(v)

    peak = float(grid[int(np.argmax(hv))])

    def integrand(x: float) -> float:
        return math.exp(float(h(np.asarray(x))) - top)

    total = _quad_pieces(integrand, lo, hi, peak, 20.0 * iqr)
    if not (total > 0 and math.isfinite(total)):
        raise LambdaInfiniteError(v)
    return top + math.log(total)


def log_mgf_estimate(profile: MgfProfile, which: str, v: float) -> MomentEstimate:
    if v == 0.0:
        return MomentEstimate(0.0)
    d = profile.drift
    if d.is_markov():
        x, z = profile.markov_pairs(which)
        g = v * d.evaluate(x, z)
        if not np.all(np.isfinite(g)):
            raise LambdaInfiniteError(v)
        lam = float(logsumexp(g) - math.log(len(g)))
        e = np.exp(g - g.max())
        se = float(np.std(e) / (np.mean(e) * math.sqrt(len(g))))
        return MomentEstimate(lam, se)
    law = profile.law(which)
    return MomentEstimate(_tilted_log_integral(law, lambda x: v * d.evaluate(None, x), v))


def log_mgf(profile: MgfProfile, which: str, v: float) -> float:
    return log_mgf_estimate(profile, which, v).value


def drift_mean_estimate(profile: MgfProfile, which: str, drift: Optional[DriftFn] = None) -> MomentEstimate:
    """E[F] under the designated law (the derivative of Lambda at zero)."""
    d = profile.drift if drift is None else drift
    if d.is_markov():
        x, z = profile.markov_pairs(which)
        f = d.evaluate(x, z)
        return MomentEstimate(float(np.mean(f)), float(np.std(f) / math.sqrt(len(f))))
    dist = profile.law(which).dist
    lo, hi = float(dist.ppf(TAIL_QUANTILE)), float(dist.ppf(1.0 - TAIL_QUANTILE))
    med, iqr = _core(dist)

    def integrand(x: float) -> float:
        return float(d.evaluate(None, np.asarray(x))) * float(dist.pdf(x))

    return MomentEstimate(_quad_pieces(integrand, lo, hi, med, 20.0 * iqr))


def drift_mean(profile: MgfProfile, which: str) -> float:
    return drift_mean_estimate(profile, which).value
