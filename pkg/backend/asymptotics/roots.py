"""
Roots of Lambda_0, the optimal shift r*, and the variance factor gamma^2.

Lambda_0 is convex with Lambda_0(0) = 0 and slope m0 < 0 at the origin, so on v > 0 it
dips below zero, crosses zero once more at v0 and crosses the hazard level rho_a at
v_plus > v0. Both crossings are bracketed by scanning a fixed grid and refined by
bisection. A point where the integral diverges counts as +inf, which still brackets.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

from scipy import optimize

from backend.model.changetime import ChangeTimeLaw
from utils.error import (
    Gamma2UnstableError,
    LambdaInfiniteError,
    QcdValidationError,
    RootNotFoundError,
    RstarUndefinedError,
)

from .mgf import MgfProfile, MomentEstimate, drift_mean_estimate, log_mgf, log_mgf_estimate

_log = logging.getLogger(__name__)

SCAN_GRID = (1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 50.0)
V_MAX = 50.0
ROOT_XTOL = 1e-9
RSTAR_BOUNDS = (1e-4, V_MAX)
RSTAR_XATOL = 1e-8
GAMMA2_STEP = 1e-4
GAMMA2_CHECK_STEP = 1e-3


def rho_a_of(change: ChangeTimeLaw, convention: str = "p") -> float:
    """
    The hazard rate entering the asymptotics. "p" quotes the geometric parameter
    (slowest component for mixtures); "tail" uses the exact decay rate -log(1 - p).
    """
    if convention == "p":
        return change.rho
    if convention == "tail":
        return change.tail_rate
    raise QcdValidationError("unknown hazard convention %r" % convention)


def _lambda0_or_inf(profile: MgfProfile) -> Callable[[float], float]:
    def lam(v: float) -> float:
        try:
            return log_mgf(profile, "pre", v)
        except LambdaInfiniteError:
            return math.inf

    return lam


def root_xtol(se: float, slope: float) -> float:
    """Bisection tolerance for a root of a noisy Lambda: 3 standard errors seen through its slope."""
    if not se > 0 or not math.isfinite(slope) or slope == 0.0:
        return ROOT_XTOL
    return max(ROOT_XTOL, 3.0 * se / abs(slope))


def _lambda0_se(profile: MgfProfile) -> Callable[[float], float]:
    def se(v: float) -> float:
        try:
            return log_mgf_estimate(profile, "pre", v).se
        except LambdaInfiniteError:
            return 0.0

    return se


def _crossing(
    g: Callable[[float], float],
    start: float,
    what: str,
    noise: Optional[Callable[[float], float]] = None,
) -> float:
    """First sign change of g from negative to non-negative on the scan grid past `start`."""
    lo = start
    g_lo = g(lo)
    if not g_lo < 0:
        raise RootNotFoundError("%s: no negative value at v=%g to bracket from" % (what, lo))
    for v in SCAN_GRID:
        if v <= start:
            continue
        g_v = g(v)
        if g_v >= 0:
            xtol = ROOT_XTOL
            if noise is not None:
                xtol = root_xtol(noise(0.5 * (lo + v)), (g_v - g_lo) / (v - lo))
                _log.debug("%s: bracket [%g, %g], xtol %g", what, lo, v, xtol)
            return optimize.bisect(g, lo, v, xtol=xtol)
        lo, g_lo = v, g_v
    raise RootNotFoundError("%s: no bracket within v <= %g" % (what, V_MAX))


def find_roots(profile: MgfProfile) -> tuple[float, float]:
    m0 = drift_mean_estimate(profile, "pre").value
    if not m0 < 0:
        raise RootNotFoundError("pre-change drift mean m0 = %g is not negative" % m0)
    lam = _lambda0_or_inf(profile)
    noise = _lambda0_se(profile) if profile.drift.is_markov() else None
    v0 = _crossing(lam, SCAN_GRID[0], "v0", noise)
    # just past v0 Lambda_0 is small and positive, below rho_a
    v_plus = _crossing(lambda v: lam(v) - profile.rho_a, v0 * (1.0 + 1e-6) + 1e-9, "v_plus", noise)
    if not v_plus > v0:
        raise RootNotFoundError("v_plus = %g does not exceed v0 = %g" % (v_plus, v0))
    _log.debug("roots v0=%.10g v_plus=%.10g", v0, v_plus)
    return v0, v_plus


def rstar(profile: MgfProfile) -> float:
    """
    The shift minimizing the first-order cost approximation:
        v* = argmin_v Lambda_0(v) - v pi_1(F),  r* = (rho_a - Lambda_0(v*)) / v*
    with F the unshifted drift.
    """
    bare = profile.with_drift(profile.drift.with_shift(0.0))
    pi1 = drift_mean_estimate(bare, "post").value
    lam = _lambda0_or_inf(bare)

    def objective(v: float) -> float:
        val = lam(v) - v * pi1
        return val if math.isfinite(val) else 1e300

    res = optimize.minimize_scalar(
        objective, bounds=RSTAR_BOUNDS, method="bounded", options={"xatol": RSTAR_XATOL}
    )
    v_star = float(res.x)
    lam_star = lam(v_star)
    if not math.isfinite(lam_star) or v_star > RSTAR_BOUNDS[1] - 1e-3:
        raise RstarUndefinedError()
    r = (profile.rho_a - lam_star) / v_star
    _log.debug("r* = %.10g at v* = %.10g", r, v_star)
    return r


def second_derivative(profile: MgfProfile, v: float, step: float = GAMMA2_STEP) -> float:
    lam = lambda x: log_mgf(profile, "pre", x)  # noqa: E731
    return (lam(v + step) - 2.0 * lam(v) + lam(v - step)) / (step * step)


def gamma2(profile: MgfProfile, v_plus: float) -> MomentEstimate:
    """
    Lambda_0''(v_plus) / v_plus^3 by central differences. The `se` field carries the
    spread between two step sizes, so a step-sensitive value is visible to callers.
    """
    d2 = second_derivative(profile, v_plus, GAMMA2_STEP)
    check = second_derivative(profile, v_plus, GAMMA2_CHECK_STEP)
    if not (math.isfinite(d2) and math.isfinite(check)) or not d2 > 0:
        raise Gamma2UnstableError(v_plus, d2, check)
    if not math.isclose(d2, check, rel_tol=5e-4):
        _log.warning(
            "Lambda_0'' at %g is step sensitive: %g (h=%g) vs %g (h=%g)",
            v_plus, d2, GAMMA2_STEP, check, GAMMA2_CHECK_STEP,
        )
    return MomentEstimate(d2 / v_plus**3, abs(d2 - check) / v_plus**3)


@dataclass(frozen=True)
class AsymptoticSummary:
    m0: float
    m1: float
    v0: float
    v_plus: float
    gamma2: float
    rstar: float
    # Monte-Carlo standard errors; zero for quadrature-based profiles
    m0_se: float = 0.0
    m1_se: float = 0.0
    lambda_se: float = 0.0
    # spread of the gamma2 central difference over two step sizes
    gamma2_spread: float = 0.0

    def __post_init__(self) -> None:
        if not (self.m0 < 0 < self.m1):
            raise QcdValidationError("drift means must satisfy m0 < 0 < m1, got %g, %g" % (self.m0, self.m1))
        if not (0 < self.v0 < self.v_plus):
            raise QcdValidationError("roots must satisfy 0 < v0 < v_plus")

    def as_dict(self) -> dict:
        return asdict(self)


def summarize(profile: MgfProfile, r_star: Optional[float] = None) -> AsymptoticSummary:
    m0 = drift_mean_estimate(profile, "pre")
    m1 = drift_mean_estimate(profile, "post")
    v0, v_plus = find_roots(profile)
    g2 = gamma2(profile, v_plus)
    r = rstar(profile) if r_star is None else r_star
    lam_se = log_mgf_estimate(profile, "pre", v_plus).se
    summary = AsymptoticSummary(
        m0.value, m1.value, v0, v_plus, g2.value, r, m0.se, m1.se, lam_se, gamma2_spread=g2.se
    )
    _log.info(
        "asymptotics: m0=%.6g m1=%.6g v0=%.6g v_plus=%.6g gamma2=%.6g r*=%.6g",
        summary.m0, summary.m1, v0, v_plus, g2.value, r,
    )
    return summary
