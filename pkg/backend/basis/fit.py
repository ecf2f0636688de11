"""
Center selection by k-means over SIS sample paths.

Every path starts from S = 0 and is followed until its sup-norm reaches eta. All SIS
components of a path see the same observations, so a multi-dimensional sample is one
path read through several statistics.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
from sklearn.cluster import KMeans

from backend.model.qcdmodel import ObservationStream, QcdModel
from backend.sis.statistic import SisSpec, run_chunk, sis_reset, sup_norm
from utils.error import DistinctCentersError, QcdValidationError
from utils.rng import Stream, generator

from .rbf import RbfBasis

_log = logging.getLogger(__name__)

KMEANS_MAX_ITER = 100
KMEANS_TOL = 1e-6
FIT_CHUNK = 256


def fit_centers(samples: np.ndarray, k: int, b: float, seed: int) -> RbfBasis:
    pts = np.asarray(samples, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if k < 2:
        raise QcdValidationError("K must be at least 2, got %d" % k)
    distinct = len(np.unique(pts, axis=0))
    if distinct < k:
        raise DistinctCentersError(k, distinct)
    km = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=1,
        max_iter=KMEANS_MAX_ITER,
        tol=KMEANS_TOL,
        algorithm="lloyd",
        random_state=seed % (2**32),
    ).fit(pts)
    centers = np.unique(km.cluster_centers_, axis=0)
    if len(centers) < k:
        raise DistinctCentersError(k, len(centers))
    # np.unique already returns rows in lexicographic order
    basis = RbfBasis.from_centers(centers, b)
    _log.info("basis fitted: K=%d from %d samples, inertia %.6g", k, len(pts), km.inertia_)
    return basis


def collect_path_samples(
    model: QcdModel, spec: SisSpec, eta: float, seed: int, index: int, max_len: int
) -> np.ndarray:
    stream = ObservationStream(model, generator(seed, Stream.BASIS, index))
    state = sis_reset(spec)
    pieces = [np.zeros((1, spec.dimension))]
    taken = 0
    while taken < max_len:
        chunk = stream.next_chunk(min(FIT_CHUNK, max_len - taken))
        vals, state = run_chunk(spec, state, chunk.y)
        hit = np.flatnonzero(sup_norm(vals) >= eta)
        if hit.size:
            pieces.append(vals[: hit[0] + 1])
            break
        pieces.append(vals)
        taken += len(chunk)
    return np.vstack(pieces)


def collect_fit_samples(
    model: QcdModel,
    spec: SisSpec,
    eta: float,
    n_paths: int,
    seed: int,
    max_len: int = 100_000,
    max_samples: Optional[int] = 200_000,
) -> np.ndarray:
    """
    SIS values along n_paths paths, each starting from the reset value 0 and cut at the
    first point with sup-norm >= eta. A uniform subsample of at most `max_samples`
    points is returned.
    """
    pts = np.vstack([collect_path_samples(model, spec, eta, seed, i, max_len) for i in range(n_paths)])
    if max_samples is not None and len(pts) > max_samples:
        rng = generator(seed, Stream.KMEANS, 0)
        pts = pts[np.sort(rng.choice(len(pts), size=max_samples, replace=False))]
    _log.debug("collected %d SIS samples from %d paths", len(pts), n_paths)
    return pts


def fit_basis(model: QcdModel, spec: SisSpec, k: int, b: float, eta: float, n_paths: int, seed: int) -> RbfBasis:
    samples = collect_fit_samples(model, spec, eta, n_paths, seed)
    return fit_centers(samples, k, b, seed)
