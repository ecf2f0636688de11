"""
Shiryaev's test for a geometric change time.

The posterior p_k = P{tau_a <= k | Y_0..Y_k} obeys, from p = 0 before any data,

    N  = (p + (1 - p) rho) f1(y)
    p' = N / (N + (1 - p)(1 - rho) f0(y))

and its odds w = p / (1 - p) obey w' = e^L (w + rho) / (1 - rho), L = log f1/f0.
So w / rho is a Shiryaev-Roberts statistic driven by F = L - log(1 - rho), and the
threshold p >= h is the level w / rho >= h / ((1 - h) rho) on it. The sweep runs the
statistic in that form and reports the table on the p scale.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from backend.model.changetime import ChangeTimeLaw, Geometric
from backend.model.observation import ObservationLaw
from backend.model.qcdmodel import QcdModel
from backend.sis.drift import IidLlr, MarkovLlr
from backend.sis.statistic import SisKind, SisSpec
from utils.error import QcdValidationError, ShiryaevPriorError

from .paths import STEP_CAP
from .sweep import ThresholdTable, cusum_star, sweep_levels, table_from_tally

_log = logging.getLogger(__name__)


def shiryaev_grid(points: int = 1000) -> np.ndarray:
    t = np.arange(1, points + 1)
    return t / (points + 1.0)


def geometric_prior(change: ChangeTimeLaw) -> Geometric:
    if not isinstance(change, Geometric):
        raise ShiryaevPriorError("change law is %s" % change.kind)
    if change.p >= 1.0:
        raise ShiryaevPriorError("p = 1 leaves nothing to detect")
    return change


def matched_geometric(change: ChangeTimeLaw) -> Geometric:
    """The geometric law with the same mean change time."""
    return Geometric(1.0 / (1.0 + change.mean))


def shiryaev_step(p: float, y: float, rho: float, pre: ObservationLaw, post: ObservationLaw) -> float:
    f0 = float(pre.pdf(y))
    f1 = float(post.pdf(y))
    num = (p + (1.0 - p) * rho) * f1
    return num / (num + (1.0 - p) * (1.0 - rho) * f0)


def shiryaev_path(y: np.ndarray, rho: float, pre: ObservationLaw, post: ObservationLaw) -> np.ndarray:
    """Posterior after each observation, by the probability recursion."""
    if pre.is_markov():
        raise QcdValidationError("the scalar posterior recursion is for i.i.d. observations")
    out = np.empty(len(y))
    p = 0.0
    for k, v in enumerate(np.asarray(y, dtype=float)):
        p = shiryaev_step(p, v, rho, pre, post)
        out[k] = p
    return out


def shiryaev_statistic(model: QcdModel, prior: Geometric) -> SisSpec:
    llr = MarkovLlr(model.pre, model.post) if model.is_markov() else IidLlr(model.pre, model.post)
    return SisSpec.of((SisKind.SHIRYAEV_ROBERTS, llr.with_shift(-math.log1p(-prior.p))))


def posterior_from_statistic(s: np.ndarray, rho: float) -> np.ndarray:
    w = rho * np.asarray(s, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.where(np.isinf(w), 1.0, w / (1.0 + w))


def levels_for(grid: np.ndarray, rho: float) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if np.any(grid < 0) or np.any(grid >= 1):
        raise QcdValidationError("Shiryaev thresholds must lie in [0, 1)")
    return grid / ((1.0 - grid) * rho)


@dataclass
class ShiryaevResult:
    table: ThresholdTable
    prior_p: float
    kappa: Optional[float] = None
    h_opt: Optional[float] = None
    j_opt: Optional[float] = None


def shiryaev_eval(
    model: QcdModel,
    grid: Optional[np.ndarray],
    n_paths: int,
    seed: int,
    kappa: Optional[float] = None,
    prior: Optional[Geometric] = None,
    cap: int = STEP_CAP,
    threads: int = 1,
) -> ShiryaevResult:
    """
    Sweep Shiryaev's test over thresholds on the posterior. Without an explicit prior the
    model's own change law is used and must be geometric; an explicit geometric prior
    evaluates the test designed for it on whatever change law the model has.
    """
    prior = geometric_prior(model.change if prior is None else prior)
    grid = shiryaev_grid() if grid is None else np.asarray(grid, dtype=float)
    tally = sweep_levels(model, shiryaev_statistic(model, prior), levels_for(grid, prior.p), n_paths, seed, cap, threads)
    table = table_from_tally(grid, tally, seed)
    result = ShiryaevResult(table, prior.p)
    if kappa is not None:
        result.kappa = kappa
        result.h_opt, result.j_opt = cusum_star(table, kappa)
        _log.info("Shiryaev optimum at kappa=%g: h=%.4g J=%.6g", kappa, result.h_opt, result.j_opt)
    return result
