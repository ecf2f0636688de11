"""
Batch means over independent training runs.

Run i trains from its own seed to theta^i after S^i samples. With theta-bar the average
of the final iterates, Z^i = sqrt(S^i)(theta^i - theta-bar) and the covariance estimate
is Z^T Z / (M - 1), taken over the runs that finished.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from backend.basis.featuremap import FeatureMap
from backend.model.qcdmodel import QcdModel
from backend.qlearn.config import TrainConfig
from backend.qlearn.qfunction import QFunction, threshold_grid, threshold_of
from backend.qlearn.train import TrainResult, train
from backend.sis.statistic import SisSpec
from utils.error import BatchMeansError, QcdNumericalError, QcdValidationError
from utils.parallel import map_blocks
from utils.rng import Stream, child_seed

from .histogram import histogram
from .sweep import ThresholdTable

_log = logging.getLogger(__name__)


def _train_one(model: QcdModel, spec: SisSpec, basis: FeatureMap, config: TrainConfig):
    try:
        return train(model, spec, basis, config), None
    except QcdNumericalError as e:
        return None, str(e)


@dataclass
class BatchMeansReport:
    M: int
    seeds: list[int]
    failures: list[tuple[int, str]]
    sample_counts: list[int]
    thetas: np.ndarray
    theta_bar: np.ndarray
    Z: np.ndarray
    sigma: np.ndarray
    thresholds: list[Optional[float]] = field(default_factory=list)
    threshold_hist: tuple[np.ndarray, np.ndarray] = (np.empty(0), np.empty(0))
    costs: list[float] = field(default_factory=list)
    cost_hist: tuple[np.ndarray, np.ndarray] = (np.empty(0), np.empty(0))

    def describe(self) -> dict:
        return {
            "M": self.M,
            "seeds": self.seeds,
            "failures": [{"run": i, "error": msg} for i, msg in self.failures],
            "S": self.sample_counts,
            "theta_bar": self.theta_bar,
            "sigma": self.sigma,
            "thresholds": self.thresholds,
            "costs": self.costs,
        }


def batch_means(
    model: QcdModel,
    spec: SisSpec,
    basis: FeatureMap,
    config: TrainConfig,
    M: int,
    seed: int,
    threads: int = 1,
    table: Optional[ThresholdTable] = None,
    same_seed: bool = False,
) -> BatchMeansReport:
    if M < 2:
        raise QcdValidationError("batch means needs M >= 2, got %d" % M)
    seeds = [config.seed if same_seed else child_seed(seed, Stream.BATCH, i) for i in range(M)]
    items = [(model, spec, basis, replace(config, seed=s)) for s in seeds]
    outcomes = map_blocks(_train_one, items, threads)

    results: list[TrainResult] = []
    failures = []
    for i, (res, err) in enumerate(outcomes):
        if res is None:
            failures.append((i, err))
            _log.warning("batch run %d failed: %s", i, err)
        else:
            results.append(res)
    needed = max(2, math.ceil(M / 2))
    if len(results) < needed:
        raise BatchMeansError(len(results), needed)

    thetas = np.array([r.theta_final for r in results])
    counts = [r.sample_count for r in results]
    theta_bar = thetas.mean(axis=0)
    Z = np.sqrt(np.asarray(counts, dtype=float))[:, None] * (thetas - theta_bar)
    sigma = Z.T @ Z / (len(results) - 1)

    report = BatchMeansReport(M, seeds, failures, counts, thetas, theta_bar, Z, sigma)
    if basis.sis_dimension == 1:
        grid = threshold_grid(config.eta)
        hs = [threshold_of(QFunction(basis, t), grid) for t in thetas]
        report.thresholds = [h if isinstance(h, float) else None for h in hs]
        finite = [h for h in report.thresholds if h is not None]
        report.threshold_hist = histogram(finite)
        if table is not None:
            report.costs = [float(table.cost(config.kappa)[table.nearest(h)]) for h in finite]
            report.cost_hist = histogram(report.costs)
    _log.info("batch means: %d of %d runs, trace(Sigma)=%.6g", len(results), M, float(np.trace(sigma)))
    return report
