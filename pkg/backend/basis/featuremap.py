"""
Separable feature maps.

A feature map evaluates K scalar functions of the SIS value and lays them out in two
blocks selected by the action:

    psi(s, u) = [(1 - u) psi(s); u psi(s)]

so Q(s, 0) only sees the first block of theta and Q(s, 1) only the second.
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np

from utils.error import DimensionMismatchError


@runtime_checkable
class FeatureMap(Protocol):
    @property
    def size(self) -> int:
        """K, the number of features per block."""
        ...

    @property
    def sis_dimension(self) -> int:
        ...

    def rbf(self, points: np.ndarray) -> np.ndarray:
        """Per-block feature values, shape (n, K) for points of shape (n, sis_dimension)."""
        ...


def as_points(fm: FeatureMap, s) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(s, dtype=float))
    if pts.shape[1] != fm.sis_dimension:
        if pts.shape[0] == fm.sis_dimension and pts.shape[1] == 1:
            pts = pts.T
        else:
            raise DimensionMismatchError("SIS point", fm.sis_dimension, pts.shape[1])
    return pts


def dimension(fm: FeatureMap) -> int:
    return 2 * fm.size


def features(fm: FeatureMap, s, u: int) -> np.ndarray:
    """The 2K feature vector of a single point."""
    phi = fm.rbf(as_points(fm, s))[0]
    out = np.zeros(2 * fm.size)
    if u:
        out[fm.size:] = phi
    else:
        out[: fm.size] = phi
    return out


def features_batch(fm: FeatureMap, points: np.ndarray, u: np.ndarray) -> np.ndarray:
    phi = fm.rbf(as_points(fm, points))
    u = np.asarray(u, dtype=bool)[:, None]
    return np.hstack([np.where(u, 0.0, phi), np.where(u, phi, 0.0)])
