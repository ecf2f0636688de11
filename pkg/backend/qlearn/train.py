"""
Q-learning with regeneration.

    theta_{n+1} = theta_n + alpha_{n+1} G_n zeta_n D_{n+1},   zeta_n = psi(S_n, U_n)

G_n = I for plain Q-learning. With Zap, G_n = -(A_n - ridge I)^{-1} where A_n is a
faster-step average of the per-sample Jacobians

    A_{n+1} = zeta_n (gamma (1 - U_n) 1{Phi_n not in Delta} psi(S_{n+1}, phi(S_{n+1})) - zeta_n)^T

phi being the greedy rule of the current theta. Iterates leaving the sup-norm ball of
radius reset_bound are redrawn uniformly from the initial box.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from backend.basis.featuremap import FeatureMap
from backend.model.qcdmodel import QcdModel
from backend.sis.statistic import SisSpec
from utils.error import DimensionMismatchError, NumericalBlowupError
from utils.rng import Stream, generator

from .config import TrainConfig
from .episodes import EpisodeSource
from .qfunction import QFunction

_log = logging.getLogger(__name__)

LOG_CHUNK = 4096


@dataclass
class TrainResult:
    theta0: np.ndarray
    theta_final: np.ndarray
    theta_pr: Optional[np.ndarray]
    sample_count: int
    regen_count: int
    reset_count: int
    reset_steps: list[int] = field(default_factory=list)
    iterate_k: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    iterate_theta: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    episode_cap: int = 10**6

    def qfunction(self, basis: FeatureMap, averaged: bool = False) -> QFunction:
        theta = self.theta_pr if averaged and self.theta_pr is not None else self.theta_final
        return QFunction(basis, theta)

    def describe(self) -> dict:
        return {
            "theta0": self.theta0,
            "theta_final": self.theta_final,
            "theta_pr": self.theta_pr,
            "S": self.sample_count,
            "regen_count": self.regen_count,
            "reset_count": self.reset_count,
            "reset_steps": self.reset_steps,
            "episode_cap": self.episode_cap,
        }


class _IterateLog:
    def __init__(self, d: int) -> None:
        self.d = d
        self.chunks: list[np.ndarray] = []
        self.buf = np.empty((LOG_CHUNK, d))
        self.fill = 0

    def push(self, theta: np.ndarray) -> None:
        self.buf[self.fill] = theta
        self.fill += 1
        if self.fill == LOG_CHUNK:
            self.chunks.append(self.buf)
            self.buf = np.empty((LOG_CHUNK, self.d))
            self.fill = 0

    def thinned(self, points: int) -> tuple[np.ndarray, np.ndarray]:
        allv = np.vstack(self.chunks + [self.buf[: self.fill]])
        n = len(allv) - 1
        stride = max(1, math.ceil(n / points))
        ks = np.arange(0, n + 1, stride)
        if ks[-1] != n:
            ks = np.append(ks, n)
        return ks, allv[ks]


def train(model: QcdModel, spec: SisSpec, basis: FeatureMap, config: TrainConfig) -> TrainResult:
    if basis.sis_dimension != spec.dimension:
        raise DimensionMismatchError("basis", spec.dimension, basis.sis_dimension)
    K = basis.size
    d = 2 * K
    reset_rng = generator(config.seed, Stream.RESET)
    box = config.theta0_range
    theta = reset_rng.uniform(-box, box, d)
    theta0 = theta.copy()
    source = EpisodeSource(model, spec, config.eta, config.explore_p, config.seed, Stream.TRAIN, config.episode_cap)

    zap = config.zap.enabled
    a_hat = -np.eye(d)
    ridge = config.zap.ridge * np.eye(d)
    pr = np.zeros(d) if config.averaging else None
    log = _IterateLog(d)
    log.push(theta)

    n = 0
    resets: list[int] = []
    zeta = np.zeros(d)
    psi_next = np.zeros(d)
    for regen in range(config.n_regens):
        ep = source.episode(regen)
        phi = basis.rbf(ep.s)
        phi_next = basis.rbf(ep.s_next)
        cost = ep.costs(config.kappa)
        cont = ep.continues(config.gamma)
        for j in range(len(ep)):
            n += 1
            u = int(ep.u[j])
            blk = slice(u * K, (u + 1) * K)
            zeta[:] = 0.0
            zeta[blk] = phi[j]
            diff = cost[j] - zeta @ theta
            u_next = 0
            if cont[j]:
                q0 = phi_next[j] @ theta[:K]
                q1 = phi_next[j] @ theta[K:]
                u_next = 1 if q0 >= q1 else 0
                diff += cont[j] * min(q0, q1)
            incr = zeta * diff
            alpha = config.alpha(n)
            if zap:
                psi_next[:] = 0.0
                if cont[j]:
                    psi_next[u_next * K:(u_next + 1) * K] = cont[j] * phi_next[j]
                a_hat += config.beta(n) * (np.outer(zeta, psi_next - zeta) - a_hat)
                try:
                    theta = theta - alpha * np.linalg.solve(a_hat - ridge, incr)
                except np.linalg.LinAlgError:
                    raise NumericalBlowupError(n) from None
            else:
                theta = theta + alpha * incr
            if not np.all(np.isfinite(theta)):
                raise NumericalBlowupError(n)
            if np.max(np.abs(theta)) > config.reset_bound:
                theta = reset_rng.uniform(-box, box, d)
                resets.append(n)
                _log.debug("theta reset at step %d", n)
            if pr is not None:
                pr += (theta - pr) / n
            log.push(theta)
        if (regen + 1) % 10000 == 0:
            _log.debug("regeneration %d: S=%d resets=%d", regen + 1, n, len(resets))

    ks, thetas = log.thinned(config.log_points)
    _log.info(
        "training finished: S=%d regenerations=%d resets=%d", n, config.n_regens, len(resets)
    )
    return TrainResult(
        theta0=theta0,
        theta_final=theta,
        theta_pr=None if pr is None else (pr if n else theta0.copy()),
        sample_count=n,
        regen_count=config.n_regens,
        reset_count=len(resets),
        reset_steps=resets,
        iterate_k=ks,
        iterate_theta=thetas,
        episode_cap=config.episode_cap,
    )
