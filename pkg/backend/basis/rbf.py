"""
Gaussian radial basis functions.

    psi_i(s) = exp(-1/2 sigma_i^2 ||s - mu_i||^2),   sigma_i = b min_{l != i} ||mu_i - mu_l||

sigma_i multiplies the squared distance, so it acts as a precision: tight clusters of
centers get wide bumps.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from utils.error import QcdValidationError

_log = logging.getLogger(__name__)


def min_pairwise_widths(centers: np.ndarray, b: float) -> np.ndarray:
    d = cdist(centers, centers)
    np.fill_diagonal(d, np.inf)
    return b * d.min(axis=1)


@dataclass(frozen=True, eq=False)
class RbfBasis:
    centers: np.ndarray
    widths: np.ndarray
    b: float

    def __post_init__(self) -> None:
        c = np.atleast_2d(np.asarray(self.centers, dtype=float))
        w = np.asarray(self.widths, dtype=float).ravel()
        if c.shape[0] < 2:
            raise QcdValidationError("an RBF basis needs K >= 2 centers, got %d" % c.shape[0])
        if w.shape != (c.shape[0],):
            raise QcdValidationError("expected %d widths, got %d" % (c.shape[0], w.size))
        if not np.all(w > 0):
            raise QcdValidationError("RBF widths must be strictly positive")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "widths", w)

    @classmethod
    def from_centers(cls, centers: np.ndarray, b: float) -> "RbfBasis":
        c = np.atleast_2d(np.asarray(centers, dtype=float))
        return cls(c, min_pairwise_widths(c, b), b)

    @property
    def size(self) -> int:
        return self.centers.shape[0]

    @property
    def sis_dimension(self) -> int:
        return self.centers.shape[1]

    def rbf(self, points: np.ndarray) -> np.ndarray:
        sq = cdist(points, self.centers, "sqeuclidean")
        return np.exp(-0.5 * self.widths**2 * sq)

    def to_dict(self) -> dict:
        return {
            "K": self.size,
            "b": self.b,
            "centers": self.centers.tolist(),
            "widths": self.widths.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RbfBasis":
        try:
            basis = cls(np.asarray(d["centers"], dtype=float), np.asarray(d["widths"], dtype=float), float(d["b"]))
        except KeyError as e:
            raise QcdValidationError("basis record is missing %s" % e) from None
        if "K" in d and int(d["K"]) != basis.size:
            raise QcdValidationError("basis record says K=%s but holds %d centers" % (d["K"], basis.size))
        return basis


def save_basis(basis: RbfBasis, path: str) -> None:
    with open(path, "w") as f:
        json.dump(basis.to_dict(), f, indent=2)
    _log.info("wrote basis to %s", path)


def load_basis(path: str) -> RbfBasis:
    with open(path) as f:
        d = json.load(f)
    # artifacts written by the CLI wrap the record with config and seed
    return RbfBasis.from_dict(d.get("basis", d))
