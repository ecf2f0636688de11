"""
Linear Q-functions over a separable feature map.

Q(s, u) = theta^T psi(s, u). With the block layout theta = [theta^0; theta^1],
Q(s, 0) = theta^0 . psi(s) and Q(s, 1) = theta^1 . psi(s). Q is a cost: the greedy
rule stops (u = 1) when stopping is no more expensive than continuing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from backend.basis.featuremap import FeatureMap, as_points, features
from utils.error import DimensionMismatchError, QcdValidationError


@dataclass(eq=False)
class QFunction:
    basis: FeatureMap
    theta: np.ndarray

    def __post_init__(self) -> None:
        self.theta = np.asarray(self.theta, dtype=float).ravel()
        if self.theta.size != 2 * self.basis.size:
            raise DimensionMismatchError("theta", 2 * self.basis.size, self.theta.size)

    @property
    def theta0(self) -> np.ndarray:
        return self.theta[: self.basis.size]

    @property
    def theta1(self) -> np.ndarray:
        return self.theta[self.basis.size:]

    def values(self, points) -> np.ndarray:
        """Q(s, 0) and Q(s, 1) for every point, shape (n, 2)."""
        phi = self.basis.rbf(as_points(self.basis, points))
        return np.column_stack([phi @ self.theta0, phi @ self.theta1])

    def stops(self, points) -> np.ndarray:
        q = self.values(points)
        return q[:, 0] >= q[:, 1]


def q_value(qf: QFunction, s, u: int) -> float:
    return float(features(qf.basis, s, u) @ qf.theta)


def greedy(qf: QFunction, s) -> int:
    return int(qf.stops(s)[0])


@dataclass(frozen=True)
class NotThreshold:
    """The greedy policy is not of the form 1{s >= H} on the scan grid."""

    violations: np.ndarray = field(default_factory=lambda: np.empty(0))
    empty_stop_set: bool = False

    def describe(self) -> dict:
        return {
            "threshold": None,
            "empty_stop_set": self.empty_stop_set,
            "violations": np.asarray(self.violations).tolist(),
        }


ThresholdOrNot = Union[float, NotThreshold]


def threshold_grid(eta: float, points: int = 1001) -> np.ndarray:
    if points < 1001:
        raise QcdValidationError("a threshold scan over [0, eta] needs at least 1001 points")
    return np.linspace(0.0, eta, points)


def threshold_of(qf: QFunction, grid: np.ndarray) -> ThresholdOrNot:
    """
    H(theta) = the first grid point where the greedy rule stops, provided the rule
    stops at every grid point from there on and nowhere before it.
    """
    if qf.basis.sis_dimension != 1:
        raise QcdValidationError("threshold_of needs a one-dimensional SIS")
    grid = np.asarray(grid, dtype=float)
    stop = qf.stops(grid[:, None])
    if not stop.any():
        return NotThreshold(empty_stop_set=True)
    first = int(np.argmax(stop))
    bad = ~stop[first:]
    if bad.any():
        return NotThreshold(violations=grid[first:][bad])
    return float(grid[first])
