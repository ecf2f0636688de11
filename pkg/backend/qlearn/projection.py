"""
Checks on a trained stopping block.

At a limit of the recursion theta^1 is the L2 projection of the stopping cost onto the
block-1 features:

    theta^1 = R_(1)^{-1} E[psi^(1) c_stop],   R_(1) = E[psi^(1) psi^(1)^T]

where psi^(1) = U psi(S) is nonzero only on steps that stop. Both expectations are
estimated here from an independent regenerative sample.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from backend.basis.featuremap import FeatureMap
from backend.model.qcdmodel import QcdModel
from backend.sis.statistic import SisSpec
from utils.error import QcdValidationError, RankDeficientError
from utils.rng import Stream

from .episodes import EpisodeSource
from .qfunction import QFunction

_log = logging.getLogger(__name__)

RANK_RCOND = 1e-12


def projection_ls(
    basis: FeatureMap,
    model: QcdModel,
    spec: SisSpec,
    kappa: float,
    eta: float,
    explore_p: float,
    n_samples: int,
    seed: int,
) -> np.ndarray:
    ep = EpisodeSource(model, spec, eta, explore_p, seed, Stream.PROJECTION).transitions(n_samples)
    stop = ep.u == 1
    phi = basis.rbf(ep.s[stop])
    c = ep.stop_cost(kappa)[stop]
    n = len(ep)
    r1 = phi.T @ phi / n
    b1 = phi.T @ c / n
    ns = null_space(r1, rcond=RANK_RCOND)
    if ns.shape[1]:
        raise RankDeficientError("R_(1), %d stationary samples" % n, ns)
    return np.linalg.solve(r1, b1)


def projection_check(
    qf: QFunction,
    model: QcdModel,
    spec: SisSpec,
    kappa: float,
    eta: float,
    explore_p: float,
    n_samples: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """(theta1_hat, theta1_ls): the trained stopping block and its least-squares target."""
    ls = projection_ls(qf.basis, model, spec, kappa, eta, explore_p, n_samples, seed)
    hat = qf.theta1.copy()
    rel = np.linalg.norm(hat - ls) / max(np.linalg.norm(ls), 1e-300)
    _log.info("projection check: relative error %.4g", rel)
    return hat, ls


@dataclass(frozen=True)
class EagernessBin:
    lo: float
    hi: float
    count: int
    mean_stop_cost: float
    q_stop: float


def conditional_cost_curve(
    qf: QFunction,
    model: QcdModel,
    spec: SisSpec,
    kappa: float,
    eta: float,
    explore_p: float,
    bins: int,
    n_samples: int,
    seed: int,
) -> list[EagernessBin]:
    """
    kappa E[tau_a - k; tau_a > k | S_k in bin], the cost of stopping now, binned over
    [0, eta] under regenerative sampling, next to Q(s, 1) at each bin midpoint.
    """
    if spec.dimension != 1:
        raise QcdValidationError("the eagerness curve needs a one-dimensional SIS")
    ep = EpisodeSource(model, spec, eta, explore_p, seed, Stream.PROJECTION).transitions(n_samples)
    edges = np.linspace(0.0, eta, bins + 1)
    idx = np.clip(np.searchsorted(edges, ep.s[:, 0], side="right") - 1, 0, bins - 1)
    counts = np.bincount(idx, minlength=bins)
    sums = np.bincount(idx, weights=ep.stop_cost(kappa), minlength=bins)
    mids = 0.5 * (edges[:-1] + edges[1:])
    q1 = qf.values(mids[:, None])[:, 1]
    return [
        EagernessBin(
            float(edges[i]),
            float(edges[i + 1]),
            int(counts[i]),
            float(sums[i] / counts[i]) if counts[i] else float("nan"),
            float(q1[i]),
        )
        for i in range(bins)
    ]
