import numpy as np
import pytest

from backend.basis import ConstantBasis, collect_fit_samples, fit_centers
from backend.meanflow import (
    FiniteInstance,
    FlowEstimator,
    contraction_check,
    counterexample_instance,
    counterexample_parameters,
    estimate_barf,
    integrate_flow,
    qcd_flow,
    radial_growth,
    random_instance,
    ratio_search,
    unit_directions,
)
from backend.model import Geometric, IidGaussian, QcdModel
from backend.qlearn import TrainConfig, train
from backend.sis import IidLlr, SisKind, SisSpec
from utils.error import QcdValidationError, RankDeficientError


@pytest.fixture(scope="module")
def counterexample():
    return counterexample_instance(100.0, 100_000, seed=1)


def test_counterexample_parameters(counterexample):
    assert counterexample_parameters(100.0) == pytest.approx((1e-4, 1e-6))
    assert counterexample.params["gamma"] == 0.99
    assert counterexample.dimension == 1
    with pytest.raises(QcdValidationError):
        counterexample_instance(1.0)


def test_counterexample_root_at_zero(counterexample):
    f, se = estimate_barf(counterexample, np.zeros(1))
    assert f[0] == 0.0 and se[0] == 0.0


def test_negative_part_is_half_the_second_moment(counterexample):
    r_minus = counterexample.negative_second_moment(np.ones(1))
    assert r_minus == pytest.approx(0.5, abs=0.01)
    assert counterexample.negative_second_moment(-np.ones(1)) == pytest.approx(1 - r_minus)


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_counterexample_pushes_outward(counterexample, sign):
    value, se = radial_growth(counterexample, np.array([sign]))
    # roughly gamma (1 + xi) / 2 - 1
    assert value > 0
    assert value == pytest.approx(48.97, rel=0.05)
    assert se < 1.0


def test_counterexample_flow_diverges(counterexample):
    traj = integrate_flow(counterexample, np.array([1.0]), 0.01, 5.0)
    assert traj.diverged
    assert traj.t_diverged < 1.0
    assert np.all(np.diff(traj.norms()) > 0)


def test_flow_step_is_bounded(counterexample):
    with pytest.raises(QcdValidationError):
        integrate_flow(counterexample, np.array([1.0]), 0.2, 1.0)


def test_flow_needs_enough_samples():
    with pytest.raises(QcdValidationError):
        counterexample_instance(100.0, 500, seed=0)


def test_unit_directions():
    v = unit_directions(3, 20, seed=4)
    assert v.shape == (20, 3)
    np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0)


def test_flow_without_discounting_is_affine(model1a, sis1a):
    est = qcd_flow(model1a, sis1a, ConstantBasis(), 2.0, 30.0, 0.5, 0.0, 5_000, seed=2, burn_in=10)
    r, r_se = est.r_hat()
    b, _ = est.b_hat()
    np.testing.assert_allclose(r, r.T)
    assert np.all(r_se >= 0)
    # f(theta) = b - R theta when gamma = 0
    theta = np.linalg.solve(r, b)
    f, _ = estimate_barf(est, theta)
    np.testing.assert_allclose(f, 0.0, atol=1e-9)
    np.testing.assert_allclose(estimate_barf(est, np.zeros(2))[0], b)


def test_estimator_stores_params(model1a, sis1a):
    est = qcd_flow(model1a, sis1a, ConstantBasis(), 2.0, 30.0, 0.5, 1.0, 2_000, seed=3, burn_in=0)
    assert est.params == {"kappa": 2.0, "eta": 30.0, "explore_p": 0.5, "gamma": 1.0}
    assert est.n_samples >= 2_000
    assert isinstance(est, FlowEstimator)


def test_constant_features_do_not_contract():
    inst = random_instance(5, 2, seed=1)
    report = contraction_check(FiniteInstance(inst.P, np.ones((5, 1)), inst.delta))
    assert report.rho_hat == pytest.approx(1.0)
    assert report.rank_R == 1
    assert report.rank_sigma_plus_m == 0


def test_killing_everywhere_contracts_fully():
    inst = random_instance(5, 3, seed=2)
    report = contraction_check(FiniteInstance(inst.P, inst.psi, np.ones(5, dtype=bool)))
    assert report.rho_hat == pytest.approx(0.0, abs=1e-10)
    assert report.dimension == 3


def test_positive_chain_with_regeneration_contracts():
    inst = random_instance(6, 2, seed=3, delta_states=1)
    report = contraction_check(inst)
    assert report.rho_hat < 1.0
    assert report.rank_R == 2
    searched = ratio_search(inst, 10_000, seed=3)
    assert searched <= report.rho_hat + 1e-9
    assert searched == pytest.approx(report.rho_hat, abs=1e-3)


def test_contraction_needs_full_rank():
    inst = random_instance(4, 1, seed=5)
    twin = np.hstack([inst.psi, 2 * inst.psi])
    with pytest.raises(RankDeficientError):
        contraction_check(FiniteInstance(inst.P, twin, inst.delta))


def test_finite_instance_validation():
    with pytest.raises(QcdValidationError):
        FiniteInstance(np.array([[0.5, 0.6], [0.5, 0.5]]), np.ones(2), None)
    with pytest.raises(QcdValidationError):
        FiniteInstance(np.eye(2), np.ones(2), None)


@pytest.mark.slow
def test_counterexample_is_unstable_in_every_direction(counterexample):
    for theta in unit_directions(counterexample.dimension, 10, seed=5):
        value, se = radial_growth(counterexample, theta)
        assert value > 3 * se
    traj = integrate_flow(counterexample, np.array([1.0]), 0.1, 1e3)
    far = traj.norms() >= 1e3
    assert np.any(far)
    assert traj.times[np.argmax(far)] < 1e3


@pytest.mark.slow
def test_qcd_flow_is_stable(model1a, sis1a):
    cb = ConstantBasis()
    theta_star = train(model1a, sis1a, cb, TrainConfig(n_regens=100_000, kappa=2.0, seed=5)).theta_final
    est = qcd_flow(model1a, sis1a, cb, 2.0, 30.0, 0.5, 1.0, 200_000, seed=6)
    traj = integrate_flow(est, theta_star + 10.0, 0.1, 30.0, theta_ref=theta_star)
    dist = traj.distances
    assert not traj.diverged
    assert np.all(np.diff(dist)[dist[:-1] > 1.0] < 0)
    assert dist[-1] < 0.05 * dist[0]


@pytest.fixture(scope="module")
def rbf5():
    model = QcdModel(IidGaussian(0.0, 1.0), IidGaussian(0.5, 1.0), Geometric(0.02), 27.0)
    spec = SisSpec.of((SisKind.CUSUM, IidLlr(model.pre, model.post, 0.02)))
    basis = fit_centers(collect_fit_samples(model, spec, 30.0, 2_000, seed=1), 5, 0.4, seed=1)
    return model, spec, basis


@pytest.mark.slow
def test_flow_standard_errors_shrink_with_samples(rbf5):
    model, spec, basis = rbf5
    theta = np.random.default_rng(7).uniform(-5, 5, 2 * basis.size)
    _, se_small = estimate_barf(qcd_flow(model, spec, basis, 27.0, 30.0, 0.5, 1.0, 10_000, seed=7), theta)
    _, se_big = estimate_barf(qcd_flow(model, spec, basis, 27.0, 30.0, 0.5, 1.0, 1_000_000, seed=7), theta)
    # sqrt(1e4 / 1e6)
    assert 0.08 <= se_big.mean() / se_small.mean() <= 0.12


@pytest.mark.slow
def test_rbf_gram_is_block_diagonal(rbf5):
    model, spec, basis = rbf5
    est = qcd_flow(model, spec, basis, 27.0, 30.0, 0.5, 1.0, 200_000, seed=8)
    r, se = est.r_hat()
    k = basis.size
    assert np.all(np.abs(r[:k, k:]) <= 3 * se[:k, k:])
    assert np.all(np.abs(r[k:, :k]) <= 3 * se[k:, :k])
    assert np.all(np.diag(r) > 0)
