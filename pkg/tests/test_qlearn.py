import numpy as np
import pytest

from backend.basis import ConstantBasis, RbfBasis, collect_fit_samples, features, fit_centers
from backend.evaluation import GreedyPolicy, cusum_star, eval_policy, threshold_sweep
from backend.qlearn import (
    EpisodeSource,
    NotThreshold,
    QFunction,
    TdStep,
    TrainConfig,
    ZapConfig,
    conditional_cost_curve,
    greedy,
    projection_check,
    projection_ls,
    q_value,
    stage_cost,
    td_regen,
    threshold_grid,
    threshold_of,
    train,
)
from utils.error import ConfigValueError, DimensionMismatchError, QcdValidationError, RankDeficientError
from utils.rng import Stream

LINE = RbfBasis.from_centers(np.array([[0.0], [10.0], [20.0], [30.0]]), 0.4)


class _Linear:
    """Two features per block, (1, s): lets a test write Q in closed form."""

    size = 2
    sis_dimension = 1

    def rbf(self, points):
        pts = np.asarray(points, dtype=float)
        return np.column_stack([np.ones(len(pts)), pts[:, 0]])


def test_q_value_examples():
    assert q_value(QFunction(LINE, np.zeros(8)), [3.0], 0) == 0.0
    theta = np.zeros(8)
    theta[4:] = 1.0
    assert q_value(QFunction(LINE, theta), [3.0], 0) == 0.0
    unit = np.zeros(8)
    unit[1] = 1.0
    assert q_value(QFunction(LINE, unit), [10.0], 0) == pytest.approx(1.0)


def test_theta_size_checked():
    with pytest.raises(DimensionMismatchError):
        QFunction(LINE, np.zeros(5))


def test_greedy_tie_stops():
    lin = _Linear()
    assert greedy(QFunction(LINE, np.zeros(8)), [4.0]) == 1
    assert greedy(QFunction(lin, [1.0, 0.0, 2.0, 0.0]), [0.0]) == 0
    assert greedy(QFunction(lin, [2.0, 0.0, 1.0, 0.0]), [0.0]) == 1


def test_threshold_of_examples():
    grid = threshold_grid(30.0)
    assert threshold_of(QFunction(LINE, np.zeros(8)), grid) == 0.0

    never = threshold_of(QFunction(_Linear(), [0.0, 0.0, 1.0, 0.0]), grid)
    assert isinstance(never, NotThreshold) and never.empty_stop_set

    # Q(s, 0) - Q(s, 1) = s - 5
    h = threshold_of(QFunction(_Linear(), [0.0, 1.0, 5.0, 0.0]), grid)
    assert h == pytest.approx(5.0, abs=grid[1] - grid[0])


def test_threshold_of_reports_violations():
    # stops on [0, 5] only
    res = threshold_of(QFunction(_Linear(), [5.0, 0.0, 0.0, 1.0]), threshold_grid(30.0))
    assert isinstance(res, NotThreshold)
    assert not res.empty_stop_set
    assert res.violations.min() > 5.0
    assert res.describe()["threshold"] is None


def test_threshold_grid_resolution():
    with pytest.raises(QcdValidationError):
        threshold_grid(30.0, points=100)


def test_stage_costs():
    assert stage_cost(changed=False, mean_residual=50.0, u=1, kappa=2.0) == 100.0
    assert stage_cost(changed=True, mean_residual=0.0, u=1, kappa=2.0) == 0.0
    assert stage_cost(changed=True, mean_residual=0.0, u=0, kappa=2.0) == 1.0
    assert stage_cost(changed=False, mean_residual=50.0, u=0, kappa=2.0) == 0.0


def test_td_examples():
    cb = ConstantBasis()
    qf = QFunction(cb, [0.0, 100.0])
    stop = TdStep(np.array([1.0]), 1, False, 50.0, False)
    assert td_regen(qf, stop, 1.0, 2.0) == pytest.approx(0.0)

    qf = QFunction(cb, [7.0, -3.0])
    regen = TdStep(np.array([31.0]), 0, True, 0.0, True)
    assert td_regen(qf, regen, 1.0, 2.0) == pytest.approx(-7.0 + 1.0)

    zero = QFunction(cb, [0.0, 0.0])
    step = TdStep(np.array([1.0]), 0, False, 50.0, False, np.array([2.0]))
    assert td_regen(zero, step, 1.0, 2.0) == 0.0

    cont = TdStep(np.array([1.0]), 0, True, 0.0, False, np.array([2.0]))
    assert td_regen(qf, cont, 0.5, 2.0) == pytest.approx(-7.0 + 1.0 + 0.5 * -3.0)


def test_episodes_end_on_stop_or_radius(model1a, sis1a):
    src = EpisodeSource(model1a, sis1a, eta=5.0, explore_p=0.3, seed=1)
    for i in range(200):
        ep = src.episode(i)
        last = len(ep) - 1
        assert np.all(ep.u[:last] == 0)
        assert ep.u[last] == 1 or ep.s[last, 0] >= 5.0
        assert not np.any(ep.in_delta[:last])
        np.testing.assert_array_equal(ep.s_next[:last], ep.s[1:])
        np.testing.assert_allclose(ep.mean_residual[~ep.changed], 50.0)


def test_episodes_are_reproducible(model1a, sis1a):
    a = EpisodeSource(model1a, sis1a, 30.0, 0.5, seed=3).episode(7)
    b = EpisodeSource(model1a, sis1a, 30.0, 0.5, seed=3).episode(7)
    np.testing.assert_array_equal(a.s, b.s)
    np.testing.assert_array_equal(a.u, b.u)


def test_config_validation():
    with pytest.raises(ConfigValueError):
        TrainConfig(n_regens=-1, kappa=2.0, seed=0)
    with pytest.raises(ConfigValueError):
        TrainConfig(n_regens=1, kappa=2.0, seed=0, explore_p=1.0)
    with pytest.raises(ConfigValueError):
        ZapConfig(beta_rho=0.4)
    assert TrainConfig(1, 2.0, 0).alpha(4) == pytest.approx(0.25)
    assert TrainConfig(1, 2.0, 0, zap=ZapConfig(enabled=False)).step_exponent == 0.85


def test_empty_run_keeps_theta(model1a, sis1a):
    res = train(model1a, sis1a, LINE, TrainConfig(n_regens=0, kappa=2.0, seed=5))
    assert res.sample_count == 0
    np.testing.assert_array_equal(res.theta_final, res.theta0)
    assert np.all(np.abs(res.theta0) <= 50.0)


def test_train_dimension_checked(model1a, sis1a):
    flat = RbfBasis.from_centers(np.array([[0.0, 0.0], [1.0, 1.0]]), 0.4)
    with pytest.raises(DimensionMismatchError):
        train(model1a, sis1a, flat, TrainConfig(n_regens=1, kappa=2.0, seed=0))


def test_raw_increment_stays_in_the_action_block():
    rng = np.random.default_rng(12)
    qf = QFunction(LINE, rng.uniform(-50, 50, 8))
    for _ in range(200):
        u = int(rng.integers(2))
        s = rng.uniform(0, 30, 1)
        step = TdStep(s, u, bool(rng.integers(2)), 50.0, False, s + rng.uniform(0, 1, 1))
        incr = features(LINE, s, u) * td_regen(qf, step, 1.0, 27.0)
        other = slice(4, 8) if u == 0 else slice(0, 4)
        assert np.all(incr[other] == 0.0)
        assert np.any(incr != 0.0)


@pytest.mark.parametrize("zap", [True, False])
def test_training_run(model1a, sis1a, zap):
    config = TrainConfig(n_regens=300, kappa=2.0, seed=6, zap=ZapConfig(enabled=zap))
    res = train(model1a, sis1a, LINE, config)
    assert res.sample_count > 300
    assert np.all(np.isfinite(res.theta_final))
    assert res.theta_pr is not None
    assert res.iterate_k[0] == 0 and res.iterate_k[-1] == res.sample_count


def test_train_is_reproducible(model1a, sis1a):
    config = TrainConfig(n_regens=100, kappa=27.0, seed=9)
    a = train(model1a, sis1a, LINE, config)
    b = train(model1a, sis1a, LINE, config)
    np.testing.assert_array_equal(a.theta_final, b.theta_final)


def test_projection_onto_constants(model1a, sis1a):
    cb = ConstantBasis()
    ep = EpisodeSource(model1a, sis1a, 30.0, 0.5, 4, Stream.PROJECTION).transitions(50_000)
    stop = ep.u == 1
    expected = np.sum(ep.stop_cost(2.0)[stop]) / np.sum(stop)
    ls = projection_ls(cb, model1a, sis1a, 2.0, 30.0, 0.5, 50_000, 4)
    assert ls[0] == pytest.approx(expected)
    # stopping cost is 2 * 50 on every pre-change step
    pre = ~ep.changed[stop]
    assert ls[0] == pytest.approx(100.0 * pre.mean())


def test_projection_needs_full_rank(model1a, sis1a):
    far = RbfBasis.from_centers(np.array([[1e4], [2e4]]), 0.4)
    with pytest.raises(RankDeficientError, match="rank-deficient"):
        projection_ls(far, model1a, sis1a, 2.0, 30.0, 0.5, 2_000, 1)


def test_gamma_zero_learns_the_projections(model1a, sis1a):
    cb = ConstantBasis()
    config = TrainConfig(n_regens=20_000, kappa=2.0, seed=11, gamma=0.0, zap=ZapConfig(enabled=False), rho=0.85)
    res = train(model1a, sis1a, cb, config)
    theta = res.qfunction(cb, averaged=True).theta
    ep = EpisodeSource(model1a, sis1a, 30.0, 0.5, 12, Stream.PROJECTION).transitions(200_000)
    cont = ep.u == 0
    assert theta[0] == pytest.approx(np.mean(ep.changed[cont]), abs=0.02)
    assert theta[1] == pytest.approx(np.mean(ep.stop_cost(2.0)[~cont]), rel=0.05)


def test_conditional_cost_curve(model1a, sis1a):
    qf = QFunction(LINE, np.zeros(8))
    curve = conditional_cost_curve(qf, model1a, sis1a, 2.0, 30.0, 0.5, 6, 20_000, 2)
    assert len(curve) == 6
    assert curve[0].lo == 0.0 and curve[-1].hi == 30.0
    assert sum(b.count for b in curve) >= 20_000
    assert all(b.mean_stop_cost <= 100.0 for b in curve if b.count)
    assert all(b.q_stop == 0.0 for b in curve)


@pytest.mark.slow
@pytest.mark.parametrize("kappa", [2.0, 27.0, 100.0])
def test_trained_policy_is_near_cusum_star(model1a, sis1a, kappa):
    samples = collect_fit_samples(model1a, sis1a, 30.0, 20_000, seed=1)
    basis = fit_centers(samples, 20, 0.4, seed=1)
    config = TrainConfig(n_regens=20_000, kappa=kappa, seed=1)
    res = train(model1a, sis1a, basis, config)
    qf = res.qfunction(basis)
    assert isinstance(threshold_of(qf, threshold_grid(30.0)), float)
    table = threshold_sweep(model1a, sis1a, None, 100_000, seed=2)
    _, j_star = cusum_star(table, kappa)
    report = eval_policy(model1a, sis1a, GreedyPolicy(qf), kappa, 100_000, seed=2)
    assert report.cost <= 1.10 * j_star

    hat, ls = projection_check(qf, model1a, sis1a, kappa, 30.0, 0.5, 1_000_000, 3)
    assert np.linalg.norm(hat - ls) / np.linalg.norm(ls) < 0.1
