"""
The mean-flow vector field of regenerative Q-learning,

    f(theta) = E[ zeta_k D_{k+1} ]
             = E[ psi_k (-psi_k^T theta + c_k + g_k min_u psi(S_{k+1}, u)^T theta) ]

with g_k = gamma (1 - U_k) 1{Phi_k not in Delta}, estimated on one frozen sample of
transitions so that f is a deterministic function of theta. Standard errors come from
the spread of the estimate over contiguous blocks of the sample.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from backend.basis.featuremap import FeatureMap, features_batch
from backend.model.qcdmodel import QcdModel
from backend.qlearn.episodes import EpisodeSource
from backend.sis.statistic import SisSpec
from utils.error import QcdValidationError
from utils.rng import Stream, generator

_log = logging.getLogger(__name__)

MIN_SAMPLES = 1000
SE_BLOCKS = 100
BURN_IN_REGENS = 1000

# psi(points, u) -> (n, d)
FeatureFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class FlowEstimator:
    psi: FeatureFn
    s: np.ndarray
    u: np.ndarray
    cost: np.ndarray
    cont: np.ndarray
    s_next: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.u)
        if n < MIN_SAMPLES:
            raise QcdValidationError("a flow estimate needs at least %d samples, got %d" % (MIN_SAMPLES, n))
        self.z = self.psi(self.s, self.u)
        self.z_next0 = self.psi(self.s_next, np.zeros(n, dtype=np.int64))
        self.z_next1 = self.psi(self.s_next, np.ones(n, dtype=np.int64))

    @property
    def n_samples(self) -> int:
        return len(self.u)

    @property
    def dimension(self) -> int:
        return self.z.shape[1]

    def increments(self, theta: np.ndarray) -> np.ndarray:
        """zeta_k D_{k+1} for every transition, shape (n, d)."""
        theta = np.asarray(theta, dtype=float)
        q_next = np.minimum(self.z_next0 @ theta, self.z_next1 @ theta)
        td = -(self.z @ theta) + self.cost + self.cont * q_next
        return self.z * td[:, None]

    def r_hat(self) -> tuple[np.ndarray, np.ndarray]:
        """E[psi psi^T] and its block standard errors."""
        parts = [p for p in np.array_split(self.z, SE_BLOCKS) if len(p)]
        grams = np.array([p.T @ p / len(p) for p in parts])
        mean = self.z.T @ self.z / self.n_samples
        se = grams.std(axis=0, ddof=1) / np.sqrt(len(grams))
        return mean, se

    def b_hat(self) -> tuple[np.ndarray, np.ndarray]:
        return block_mean(self.z * self.cost[:, None])

    def negative_second_moment(self, theta: np.ndarray) -> float:
        """E[({theta^T psi(S, 0)}_-)^2]."""
        v = self.psi(self.s, np.zeros(self.n_samples, dtype=np.int64)) @ np.asarray(theta, dtype=float)
        return float(np.mean(np.maximum(-v, 0.0) ** 2))


def block_mean(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = values.mean(axis=0)
    means = np.array([p.mean(axis=0) for p in np.array_split(values, SE_BLOCKS) if len(p)])
    se = means.std(axis=0, ddof=1) / np.sqrt(len(means))
    return mean, se


def estimate_barf(est: FlowEstimator, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return block_mean(est.increments(theta))


def qcd_flow(
    model: QcdModel,
    spec: SisSpec,
    basis: FeatureMap,
    kappa: float,
    eta: float,
    explore_p: float,
    gamma: float,
    n_samples: int,
    seed: int,
    burn_in: int = BURN_IN_REGENS,
) -> FlowEstimator:
    ep = EpisodeSource(model, spec, eta, explore_p, seed, Stream.FLOW).transitions(n_samples, burn_in)
    return FlowEstimator(
        psi=lambda pts, u: features_batch(basis, pts, u),
        s=ep.s,
        u=ep.u,
        cost=ep.costs(kappa),
        cont=ep.continues(gamma).astype(float),
        s_next=ep.s_next,
        params={"kappa": kappa, "eta": eta, "explore_p": explore_p, "gamma": gamma},
    )


@dataclass
class FlowTrajectory:
    times: np.ndarray
    thetas: np.ndarray
    distances: Optional[np.ndarray]
    diverged: bool
    t_diverged: Optional[float] = None

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.thetas, axis=1)

    def describe(self) -> dict:
        return {
            "times": self.times,
            "theta_norm": self.norms(),
            "distance_to_reference": self.distances,
            "diverged": self.diverged,
            "t_diverged": self.t_diverged,
        }


DIVERGENCE_GUARD = 1e8


def integrate_flow(
    est: FlowEstimator,
    theta0: np.ndarray,
    dt: float,
    t_end: float,
    theta_ref: Optional[np.ndarray] = None,
) -> FlowTrajectory:
    """Euler steps of d/dt theta = f(theta); a divergence is recorded, not raised."""
    if not 0 < dt <= 0.1:
        raise QcdValidationError("flow step dt must lie in (0, 0.1], got %r" % dt)
    steps = int(np.ceil(t_end / dt))
    theta = np.asarray(theta0, dtype=float).copy()
    times, path = [0.0], [theta.copy()]
    diverged, t_div = False, None
    for i in range(1, steps + 1):
        f, _ = estimate_barf(est, theta)
        theta = theta + dt * f
        times.append(i * dt)
        path.append(theta.copy())
        if not np.all(np.isfinite(theta)) or np.linalg.norm(theta) >= DIVERGENCE_GUARD:
            diverged, t_div = True, i * dt
            _log.info("flow diverged at t=%g", t_div)
            break
    thetas = np.array(path)
    dist = None if theta_ref is None else np.linalg.norm(thetas - np.asarray(theta_ref, dtype=float), axis=1)
    return FlowTrajectory(np.array(times), thetas, dist, diverged, t_div)


def radial_growth(est: FlowEstimator, theta: np.ndarray) -> tuple[float, float]:
    """theta^T f(theta) and its block standard error; positive values push theta outward."""
    theta = np.asarray(theta, dtype=float)
    mean, se = block_mean(est.increments(theta) @ theta)
    return float(mean), float(se)


def unit_directions(d: int, n: int, seed: int) -> np.ndarray:
    rng = generator(seed, Stream.FLOW, d, 2)
    v = rng.standard_normal((n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
