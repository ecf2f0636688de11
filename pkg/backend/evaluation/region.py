from dataclasses import dataclass
from typing import Sequence

import numpy as np

from backend.qlearn.qfunction import QFunction
from utils.error import QcdValidationError

from .policy import BoxRule


@dataclass(frozen=True)
class RegionCell:
    s1: float
    s2: float
    phi: int
    box: int


def decision_region(qf: QFunction, xs: Sequence[float], ys: Sequence[float], box: Sequence[float]) -> list[RegionCell]:
    """Greedy stop decision and box-rule decision over the grid xs x ys."""
    if qf.basis.sis_dimension != 2:
        raise QcdValidationError("decision regions need a two-dimensional SIS")
    gx, gy = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    phi = qf.stops(pts)
    boxed = BoxRule(tuple(box)).stops(pts)
    return [RegionCell(float(p[0]), float(p[1]), int(a), int(b)) for p, a, b in zip(pts, phi, boxed)]
