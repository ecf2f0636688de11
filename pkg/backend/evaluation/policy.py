from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from backend.qlearn.qfunction import QFunction


class Policy(Protocol):
    def stops(self, points: np.ndarray) -> np.ndarray:
        """Stop decision for each SIS value, points of shape (n, dim)."""
        ...

    def describe(self) -> dict:
        ...


@dataclass(frozen=True)
class ThresholdRule:
    h: float
    component: int = 0

    def stops(self, points: np.ndarray) -> np.ndarray:
        return points[:, self.component] >= self.h

    def describe(self) -> dict:
        return {"kind": "threshold", "h": self.h, "component": self.component}


@dataclass(frozen=True)
class BoxRule:
    """Stop as soon as any component reaches its own threshold."""

    h: Sequence[float]

    def stops(self, points: np.ndarray) -> np.ndarray:
        return np.any(points >= np.asarray(self.h, dtype=float)[None, :], axis=1)

    def describe(self) -> dict:
        return {"kind": "box", "h": list(self.h)}


@dataclass(frozen=True, eq=False)
class GreedyPolicy:
    qf: QFunction

    def stops(self, points: np.ndarray) -> np.ndarray:
        return self.qf.stops(points)

    def describe(self) -> dict:
        return {"kind": "greedy", "theta": self.qf.theta.tolist()}


@dataclass(frozen=True)
class AlwaysStop:
    def stops(self, points: np.ndarray) -> np.ndarray:
        return np.ones(len(points), dtype=bool)

    def describe(self) -> dict:
        return {"kind": "always_stop"}
