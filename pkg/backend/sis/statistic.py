"""
CUSUM and Shiryaev-Roberts recursions over a list of drift functions.

    CUSUM               s' = max(0, s + F)
    Shiryaev-Roberts    s' = exp(F) (s + 1)

`sis_step` advances one observation. `run_chunk` advances a whole block of observations
at once through the closed-form solutions of the two recursions; the evaluation code
uses it, the trainer uses `sis_step`.

A Markov drift has no lag right after a reset: it contributes F = 0 for that one step
while the previous observation is primed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, unique
from typing import Optional

import numpy as np

from utils.error import DimensionMismatchError, QcdValidationError

from .drift import DriftFn


@unique
class SisKind(Enum):
    CUSUM = "cusum"
    SHIRYAEV_ROBERTS = "shiryaev_roberts"


@dataclass(frozen=True)
class SisComponent:
    kind: SisKind
    drift: DriftFn


@dataclass(frozen=True)
class SisSpec:
    components: tuple[SisComponent, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise QcdValidationError("an SIS needs at least one component")

    @classmethod
    def of(cls, *pairs: tuple[SisKind, DriftFn]) -> "SisSpec":
        return cls(tuple(SisComponent(k, d) for k, d in pairs))

    @property
    def dimension(self) -> int:
        return len(self.components)

    def is_markov(self) -> bool:
        return any(c.drift.is_markov() for c in self.components)

    def component(self, i: int) -> "SisSpec":
        return SisSpec((self.components[i],))

    def describe(self) -> list[dict]:
        return [{"kind": c.kind.value, "drift": c.drift.describe()} for c in self.components]


@dataclass
class SisState:
    s: np.ndarray
    y_prev: Optional[float] = field(default=None)

    def copy(self) -> "SisState":
        return SisState(self.s.copy(), self.y_prev)


def sis_reset(spec: SisSpec) -> SisState:
    return SisState(np.zeros(spec.dimension), None)


def _drifts(spec: SisSpec, y_prev: Optional[float], y: np.ndarray) -> np.ndarray:
    """F for every component and every observation in `y`, shape (len(y), dim)."""
    n = len(y)
    out = np.empty((n, spec.dimension))
    lag = np.empty(n)
    if n:
        lag[1:] = y[:-1]
        lag[0] = np.nan if y_prev is None else y_prev
    for j, c in enumerate(spec.components):
        if c.drift.is_markov():
            f = c.drift.evaluate(lag, y)
            if y_prev is None and n:
                f[0] = 0.0
        else:
            f = c.drift.evaluate(None, y)
        out[:, j] = f
    return out


def sis_step(spec: SisSpec, state: SisState, y: float) -> SisState:
    if state.s.shape != (spec.dimension,):
        raise DimensionMismatchError("SIS state", spec.dimension, state.s.size)
    f = _drifts(spec, state.y_prev, np.asarray([y], dtype=float))[0]
    s = np.empty(spec.dimension)
    for j, c in enumerate(spec.components):
        if c.kind is SisKind.CUSUM:
            s[j] = max(0.0, state.s[j] + f[j])
        else:
            s[j] = np.exp(f[j]) * (state.s[j] + 1.0)
    return SisState(s, float(y))


def cusum_path(s0: float, f: np.ndarray) -> np.ndarray:
    # Lindley: S_n = W_n - min(-s0, min_{j<=n} W_j), W the partial sums of F
    w = np.cumsum(f)
    return w - np.minimum(np.minimum.accumulate(w), -s0)


def log_sr_path(log_s0: float, f: np.ndarray) -> np.ndarray:
    """log S_n for s' = exp(F)(s + 1), started from exp(log_s0)."""
    w = np.cumsum(f)
    lagged = np.empty(len(f) + 1)
    lagged[0] = log_s0
    lagged[1] = 0.0
    lagged[2:] = -w[:-1]
    acc = np.logaddexp.accumulate(lagged)[1:]
    return w + acc


def run_chunk(spec: SisSpec, state: SisState, y: np.ndarray) -> tuple[np.ndarray, SisState]:
    """SIS values after each observation of `y`, shape (len(y), dim), and the final state."""
    y = np.asarray(y, dtype=float)
    f = _drifts(spec, state.y_prev, y)
    out = np.empty_like(f)
    for j, c in enumerate(spec.components):
        if c.kind is SisKind.CUSUM:
            out[:, j] = cusum_path(state.s[j], f[:, j])
        else:
            with np.errstate(divide="ignore", over="ignore"):
                out[:, j] = np.exp(log_sr_path(np.log(state.s[j]), f[:, j]))
    if len(y) == 0:
        return out, state.copy()
    return out, SisState(out[-1].copy(), float(y[-1]))


def sup_norm(points: np.ndarray) -> np.ndarray:
    return np.max(np.abs(np.atleast_2d(points)), axis=1)


