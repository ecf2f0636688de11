"""
A non-separable instance whose mean flow is unstable.

The state is a symmetric two-state chain on {-1, +1} that switches sides with
probability delta = xi^-2. The single feature is psi(s, 0) = s and psi(s, 1) = xi s,
so both actions share one parameter. Stopping is rare (p_1 = xi^-3), every cost is
zero, there is no regeneration, and gamma = 0.99. theta = 0 is the only root, yet for
large xi theta^T f(theta) > 0 away from it.
"""

from __future__ import annotations

import numpy as np

from utils.error import QcdValidationError
from utils.rng import Stream, generator

from .flow import FlowEstimator


def counterexample_parameters(xi: float) -> tuple[float, float]:
    """(delta, p_1) for scale xi."""
    return xi**-2, xi**-3


def counterexample_instance(
    xi: float = 100.0, n_samples: int = 10**6, seed: int = 0, gamma: float = 0.99
) -> FlowEstimator:
    if not xi > 1:
        raise QcdValidationError("counterexample scale xi must exceed 1, got %r" % xi)
    delta, p1 = counterexample_parameters(xi)
    rng = generator(seed, Stream.FLOW, 0, 1)
    # stationary law is uniform on the two states
    s = np.where(rng.random(n_samples) < 0.5, -1.0, 1.0)
    flip = rng.random(n_samples) < delta
    s_next = np.where(flip, -s, s)
    u = (rng.random(n_samples) < p1).astype(np.int64)

    def psi(points: np.ndarray, acts: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(len(acts), -1)[:, :1]
        return pts * np.where(np.asarray(acts) == 1, xi, 1.0)[:, None]

    return FlowEstimator(
        psi=psi,
        s=s[:, None],
        u=u,
        cost=np.zeros(n_samples),
        cont=gamma * (1.0 - u),
        s_next=s_next[:, None],
        params={"xi": xi, "delta": delta, "p1": p1, "gamma": gamma},
    )
