"""
The QCD generative environment.

A path draws its change time once, then observations Y_0, Y_1, ...: Y_k comes from the
pre-change law for k < tau_a and from the post-change law for k >= tau_a. For Ar1 laws
only the coefficient switches at the change; the lagged value carries across.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from utils.error import InvalidLawError

from .changetime import ChangeTimeLaw
from .observation import Ar1, ObservationLaw


@dataclass(frozen=True)
class QcdModel:
    pre: ObservationLaw
    post: ObservationLaw
    change: ChangeTimeLaw
    kappa: float

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise InvalidLawError("model", "kappa must be positive, got %r" % self.kappa)
        if self.pre.is_markov() != self.post.is_markov():
            raise InvalidLawError("model", "Ar1 dynamics must be used for both pre and post laws")

    def is_markov(self) -> bool:
        return self.pre.is_markov()


@dataclass(frozen=True)
class HiddenStep:
    k: int
    y: float
    changed: bool
    # expected remaining time to the change given it has not happened; 0 once changed
    mean_residual: float


@dataclass
class Chunk:
    k0: int
    y: np.ndarray
    changed: np.ndarray

    def __len__(self) -> int:
        return len(self.y)


class ObservationStream:
    """
    One path of the model, produced lazily in chunks.

    Draw order on the path's generator: the change time, then (Ar1 only) one uniform
    for the lag Y_{-1}, then one uniform per observation. Uniforms are consumed one
    64-bit output each, so the values do not depend on the chunk sizes requested.
    """

    def __init__(self, model: QcdModel, rng: np.random.Generator, tau_a: Optional[int] = None) -> None:
        self.model = model
        self.rng = rng
        drawn = model.change.sample(rng)
        self.tau_a = drawn if tau_a is None else int(tau_a)
        self.k = 0
        self.y_lag = 0.0
        if model.is_markov():
            pre: Ar1 = model.pre  # type: ignore[assignment]
            u = rng.random()
            stat = pre.stationary_dist()
            if stat is not None:
                self.y_lag = float(stat.ppf(max(u, 2.0**-54)))
            else:
                self.y_lag = float(pre.from_uniform(np.asarray([u]))[0])

    def next_chunk(self, n: int) -> Chunk:
        u = self.rng.random(n)
        ks = self.k + np.arange(n)
        changed = ks >= self.tau_a
        n_pre = int(np.count_nonzero(~changed))
        if self.model.is_markov():
            y = self._markov(u, n_pre)
        else:
            y = np.empty(n)
            y[:n_pre] = self.model.pre.from_uniform(u[:n_pre])
            y[n_pre:] = self.model.post.from_uniform(u[n_pre:])
        chunk = Chunk(self.k, y, changed)
        self.k += n
        return chunk

    def _markov(self, u: np.ndarray, n_pre: int) -> np.ndarray:
        y = np.empty(len(u))
        for law, lo, hi in ((self.model.pre, 0, n_pre), (self.model.post, n_pre, len(u))):
            if hi <= lo:
                continue
            w = law.from_uniform(u[lo:hi])
            # Y_k = a Y_{k-1} + W_k, continuing from the carried lag
            seg, _ = lfilter([1.0], [1.0, -law.a], w, zi=[law.a * self.y_lag])
            y[lo:hi] = seg
            self.y_lag = float(seg[-1])
        return y


def hidden_steps(model: QcdModel, tau_a: int, chunk: Chunk) -> list[HiddenStep]:
    ks = chunk.k0 + np.arange(len(chunk))
    res = np.zeros(len(chunk))
    pre = ~chunk.changed
    if np.any(pre):
        res[pre] = model.change.mean_residual_array(ks[pre])
    return [
        HiddenStep(int(k), float(y), bool(c), float(r))
        for k, y, c, r in zip(ks, chunk.y, chunk.changed, res)
    ]


def simulate_path(
    model: QcdModel, max_len: int, rng: np.random.Generator, tau_a: Optional[int] = None
) -> list[HiddenStep]:
    if max_len < 1:
        raise InvalidLawError("path", "max_len must be at least 1, got %r" % max_len)
    stream = ObservationStream(model, rng, tau_a=tau_a)
    return hidden_steps(model, stream.tau_a, stream.next_chunk(max_len))
