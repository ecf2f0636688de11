import json
import math

import numpy as np
import pytest
from sklearn.cluster import KMeans

from backend.basis import (
    ConstantBasis,
    RbfBasis,
    collect_fit_samples,
    dimension,
    features,
    features_batch,
    fit_centers,
    load_basis,
    save_basis,
)
from utils.error import DimensionMismatchError, DistinctCentersError


def test_identical_samples_cannot_give_k_centers():
    with pytest.raises(DistinctCentersError, match="K distinct centers unavailable"):
        fit_centers(np.zeros(100), 3, 0.4, 0)


def test_two_point_clustering():
    basis = fit_centers(np.array([0.0, 10.0, 0.0, 10.0]), 2, 0.4, 0)
    np.testing.assert_allclose(basis.centers[:, 0], [0.0, 10.0])
    np.testing.assert_allclose(basis.widths, [4.0, 4.0])


def test_fit_on_cusum_samples(model1a, sis1a):
    samples = collect_fit_samples(model1a, sis1a, 30.0, 200, seed=1, max_samples=10_000)
    assert len(samples) <= 10_000
    assert samples.min() >= 0.0
    basis = fit_centers(samples, 20, 0.4, seed=1)
    assert basis.size == 20
    assert basis.sis_dimension == 1
    assert np.all(np.diff(basis.centers[:, 0]) > 0)
    assert basis.centers.min() >= 0.0 and basis.centers.max() <= samples.max()

    def inertia(centers):
        return float(np.sum(np.min((samples - centers[:, 0][None, :]) ** 2, axis=1)))

    restarts = [
        KMeans(n_clusters=20, init="random", n_init=1, random_state=s).fit(samples).cluster_centers_
        for s in range(10)
    ]
    assert inertia(basis.centers) <= min(inertia(c) for c in restarts) * 1.05


def test_fit_samples_stop_at_eta(model1a, sis1a):
    samples = collect_fit_samples(model1a, sis1a, 5.0, 50, seed=2)
    # every path is cut at its first crossing, so only path ends can exceed eta
    assert np.sum(samples[:, 0] >= 5.0) <= 50


def test_feature_at_center():
    basis = RbfBasis.from_centers(np.array([[0.0], [1.0]]), 0.8)
    assert basis.widths == pytest.approx([0.8, 0.8])
    f = features(basis, [0.0], 0)
    assert f[0] == 1.0
    assert f[1] == pytest.approx(math.exp(-0.32))
    assert np.all(f[2:] == 0.0)
    assert np.all(features(basis, [0.3], 1)[:2] == 0.0)


def test_separability():
    basis = RbfBasis.from_centers(np.array([[0.0, 0.0], [1.0, 3.0], [4.0, 1.0]]), 0.4)
    assert dimension(basis) == 6
    pts = np.random.default_rng(0).uniform(0, 5, (50, 2))
    z0 = features_batch(basis, pts, np.zeros(50))
    z1 = features_batch(basis, pts, np.ones(50))
    assert np.all(z0 * z1 == 0.0)
    np.testing.assert_allclose(z0[:, :3], z1[:, 3:])


def test_point_dimension_checked():
    basis = RbfBasis.from_centers(np.array([[0.0], [1.0]]), 0.4)
    with pytest.raises(DimensionMismatchError):
        features(basis, [[0.0, 1.0, 2.0]], 0)


def test_constant_basis():
    cb = ConstantBasis()
    assert cb.size == 1
    np.testing.assert_array_equal(features(cb, [3.0], 1), [0.0, 1.0])


def test_basis_file_round_trip(tmp_path):
    basis = RbfBasis.from_centers(np.array([[0.0], [2.0], [5.0]]), 0.4)
    path = tmp_path / "basis.json"
    save_basis(basis, str(path))
    again = load_basis(str(path))
    np.testing.assert_array_equal(again.centers, basis.centers)
    np.testing.assert_array_equal(again.widths, basis.widths)

    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"seed": 1, "basis": basis.to_dict()}))
    assert load_basis(str(wrapped)).size == 3
