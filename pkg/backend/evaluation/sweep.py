"""
Threshold tables: MDE and MDD of the rule 1{S_k >= h} for a whole grid of h at once.
The crossing time of every threshold is read off the running maximum of one path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from backend.model.qcdmodel import QcdModel
from backend.sis.statistic import SisSpec
from utils.error import QcdValidationError
from utils.parallel import blocks, map_blocks

from .paths import STEP_CAP, Tally, crossing_block, reduce_tallies

_log = logging.getLogger(__name__)

DEFAULT_GRID = (0.02, 20.0, 1000)


def default_grid() -> np.ndarray:
    lo, hi, n = DEFAULT_GRID
    return np.linspace(lo, hi, n)


@dataclass
class ThresholdTable:
    grid: np.ndarray
    mde: np.ndarray
    mdd: np.ndarray
    se_mde: np.ndarray
    se_mdd: np.ndarray
    p_fa: np.ndarray
    n_paths: int
    seed: int
    capped: int = 0

    def cost(self, kappa: float) -> np.ndarray:
        return self.mdd + kappa * self.mde

    def cost_se(self, kappa: float) -> np.ndarray:
        """
        Standard error bound for cost(kappa). A path adds to at most one of MDE and MDD,
        so the two are negatively correlated and the independent sum bounds the variance.
        """
        return np.sqrt(self.se_mdd**2 + (kappa * self.se_mde) ** 2)

    def nearest(self, h: float) -> int:
        return int(np.argmin(np.abs(self.grid - h)))

    def rows(self):
        for i in range(len(self.grid)):
            yield self.grid[i], self.mde[i], self.mdd[i], self.se_mde[i], self.se_mdd[i]

    header = ("h", "mde", "mdd", "se_mde", "se_mdd")


def table_from_tally(grid: np.ndarray, tally: Tally, seed: int) -> ThresholdTable:
    mde, se_mde = tally.mde()
    mdd, se_mdd = tally.mdd()
    p_fa, _ = tally.p_fa()
    return ThresholdTable(grid, mde, mdd, se_mde, se_mdd, p_fa, tally.n, seed, tally.capped)


def sweep_levels(
    model: QcdModel,
    spec: SisSpec,
    levels: np.ndarray,
    n_paths: int,
    seed: int,
    cap: int = STEP_CAP,
    threads: int = 1,
) -> Tally:
    if spec.dimension != 1:
        raise QcdValidationError("a threshold sweep needs a one-dimensional SIS")
    levels = np.asarray(levels, dtype=float)
    if levels.ndim != 1 or len(levels) == 0 or np.any(np.diff(levels) <= 0):
        raise QcdValidationError("threshold grid must be non-empty and strictly increasing")
    if n_paths < 1:
        raise QcdValidationError("n_paths must be positive")
    items = [(model, spec, levels, seed, lo, hi, cap) for lo, hi in blocks(n_paths)]
    tally = reduce_tallies(map_blocks(crossing_block, items, threads))
    if tally.capped:
        _log.warning("%d of %d paths reached the %d-step cap", tally.capped, n_paths, cap)
    return tally


def threshold_sweep(
    model: QcdModel,
    spec: SisSpec,
    grid: Optional[np.ndarray],
    n_paths: int,
    seed: int,
    cap: int = STEP_CAP,
    threads: int = 1,
) -> ThresholdTable:
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    tally = sweep_levels(model, spec, grid, n_paths, seed, cap, threads)
    table = table_from_tally(grid, tally, seed)
    _log.info("sweep finished: %d paths, %d thresholds, %d capped", n_paths, len(grid), tally.capped)
    return table


def cusum_star(table: ThresholdTable, kappa: float) -> tuple[float, float]:
    """Grid minimizer of MDD + kappa MDE; np.argmin keeps the smallest h on ties."""
    j = table.cost(kappa)
    i = int(np.argmin(j))
    return float(table.grid[i]), float(j[i])
