from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConstantBasis:
    """One feature per block, identically 1: Q(s, u) is a constant per action."""

    sis_dimension: int = 1

    @property
    def size(self) -> int:
        return 1

    def rbf(self, points: np.ndarray) -> np.ndarray:
        return np.ones((len(points), 1))
