"""
Exact contraction checks on a finite chain.

With features Psi (n x d) and stationary law pi, a function g = Psi theta has
||g||^2 = theta^T R theta, R = Psi^T diag(pi) Psi. Killing the chain on Delta, the
one-step map g -> 1_{Delta^c} P g satisfies

    ||1_{Delta^c} P g||^2 = theta^T (R - Sigma - M) theta
    Sigma = R - (P Psi)^T diag(pi) (P Psi)            conditional covariance
    M     = (P Psi)^T diag(pi 1_Delta) (P Psi)

and the tightest rho with ||1_{Delta^c} P g||^2 <= rho ||g||^2 on the span is the largest
generalized eigenvalue of that pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from utils.error import QcdValidationError, RankDeficientError
from utils.rng import Stream, generator

ROW_TOL = 1e-12
STATIONARY_TOL = 1e-10
RANK_TOL = 1e-10
MAX_STATES = 50


def stationary(P: np.ndarray) -> np.ndarray:
    ns = linalg.null_space((P - np.eye(len(P))).T)
    if ns.shape[1] != 1:
        raise QcdValidationError("chain is not irreducible: %d stationary laws" % ns.shape[1])
    pi = ns[:, 0] / ns[:, 0].sum()
    return np.clip(pi, 0.0, None) / np.clip(pi, 0.0, None).sum()


@dataclass(frozen=True, eq=False)
class FiniteInstance:
    P: np.ndarray
    psi: np.ndarray
    delta: np.ndarray
    pi: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        P = np.asarray(self.P, dtype=float)
        n = P.shape[0]
        if P.shape != (n, n) or n > MAX_STATES:
            raise QcdValidationError("P must be square with at most %d states" % MAX_STATES)
        if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > ROW_TOL):
            raise QcdValidationError("P must be row-stochastic")
        pi = stationary(P) if self.pi is None else np.asarray(self.pi, dtype=float)
        if np.max(np.abs(pi @ P - pi)) > STATIONARY_TOL:
            raise QcdValidationError("pi is not stationary for P")
        psi = np.asarray(self.psi, dtype=float)
        if psi.ndim == 1:
            psi = psi[:, None]
        if psi.shape[0] != n:
            raise QcdValidationError("feature matrix needs one row per state")
        delta = np.zeros(n, dtype=bool) if self.delta is None else np.asarray(self.delta, dtype=bool)
        if delta.shape != (n,):
            raise QcdValidationError("Delta membership needs one entry per state")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "delta", delta)

    def gram(self, weights: np.ndarray, m: np.ndarray) -> np.ndarray:
        return m.T @ (weights[:, None] * m)

    def matrices(self) -> dict[str, np.ndarray]:
        ppsi = self.P @ self.psi
        R = self.gram(self.pi, self.psi)
        sigma = R - self.gram(self.pi, ppsi)
        m_delta = self.gram(self.pi * self.delta, ppsi)
        return {"R": R, "Sigma": sigma, "M": m_delta, "A": R - sigma - m_delta}

    def ratio(self, theta: np.ndarray) -> float:
        g = self.psi @ theta
        pg = (self.P @ g) * (~self.delta)
        return float(self.pi @ pg**2 / (self.pi @ g**2))


@dataclass(frozen=True)
class ContractionReport:
    rho_hat: float
    rank_R: int
    rank_sigma_plus_m: int
    dimension: int

    def describe(self) -> dict:
        return {
            "rho_hat": self.rho_hat,
            "rank_R": self.rank_R,
            "rank_sigma_plus_M": self.rank_sigma_plus_m,
            "d": self.dimension,
        }


def _rank(m: np.ndarray) -> int:
    return int(np.linalg.matrix_rank(m, tol=RANK_TOL * max(1.0, np.abs(m).max())))


def contraction_check(inst: FiniteInstance) -> ContractionReport:
    mats = inst.matrices()
    R = mats["R"]
    ns = linalg.null_space(R, rcond=RANK_TOL)
    if ns.shape[1]:
        raise RankDeficientError("R on the finite instance", ns)
    A = 0.5 * (mats["A"] + mats["A"].T)
    rho = float(linalg.eigh(A, R, eigvals_only=True)[-1])
    return ContractionReport(
        rho_hat=max(rho, 0.0),
        rank_R=_rank(R),
        rank_sigma_plus_m=_rank(mats["Sigma"] + mats["M"]),
        dimension=R.shape[0],
    )


def random_instance(n: int, d: int, seed: int, delta_states: int = 0) -> FiniteInstance:
    """A strictly positive chain with Gaussian features; the first delta_states states form Delta."""
    rng = generator(seed, Stream.INSTANCE, n, d)
    P = rng.dirichlet(np.ones(n), size=n)
    P /= P.sum(axis=1, keepdims=True)
    psi = rng.standard_normal((n, d))
    delta = np.arange(n) < delta_states
    return FiniteInstance(P, psi, delta)


def ratio_search(inst: FiniteInstance, n: int, seed: int) -> float:
    """max of ||P_Delta g||^2 / ||g||^2 over n random feature directions."""
    rng = generator(seed, Stream.INSTANCE, n, 1)
    thetas = rng.standard_normal((n, inst.psi.shape[1]))
    return max(inst.ratio(t) for t in thetas)
