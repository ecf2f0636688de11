import math

import numpy as np
import pytest
from scipy import stats

from backend.model import (
    CAUCHY_MATCHED_GAMMA,
    LAPLACE_MATCHED_B,
    Ar1,
    Geometric,
    IidCauchy,
    IidGaussian,
    Mixture,
    ObservationStream,
    QcdModel,
    mean_residual,
    sample_change_time,
    simulate_path,
)
from utils.error import InvalidLawError, ZeroProbabilityConditionError

MIXTURE = Mixture(0.25, 0.02, 0.2)


def _draws(law, n, seed):
    rng = np.random.default_rng(seed)
    return np.array([sample_change_time(law, rng) for _ in range(n)])


def test_geometric_one_is_immediate():
    assert set(_draws(Geometric(1.0), 200, 0)) == {0}


def test_geometric_sample_mean():
    assert Geometric(0.02).mean == pytest.approx(49.0)
    assert _draws(Geometric(0.02), 100_000, 1).mean() == pytest.approx(49.0, abs=1.0)


def test_mixture_sample_mean():
    assert MIXTURE.mean == pytest.approx(15.25)
    assert _draws(MIXTURE, 100_000, 2).mean() == pytest.approx(15.25, abs=0.5)


def test_geometric_tail_rate():
    draws = _draws(Geometric(0.02), 200_000, 3)
    n = 200
    p_hat = np.mean(draws >= n)
    assert abs(math.log(p_hat) / n + Geometric(0.02).tail_rate) < 0.004
    assert Geometric(0.02).tail_rate == pytest.approx(-math.log(0.98))


def test_mean_residual_geometric_is_memoryless():
    for k in (0, 1, 17, 500):
        assert mean_residual(Geometric(0.02), k) == pytest.approx(50.0)


def _residual_series(law: Mixture, k: int, jmax: int = 20_000) -> float:
    j = np.arange(k + 1, jmax)
    pmf = law.w * law.p_slow * (1 - law.p_slow) ** j + (1 - law.w) * law.p_fast * (1 - law.p_fast) ** j
    return float(np.sum((j - k) * pmf) / np.sum(pmf))


def test_mean_residual_mixture_matches_series():
    assert mean_residual(MIXTURE, 0) == pytest.approx(_residual_series(MIXTURE, 0), rel=1e-8)
    assert mean_residual(MIXTURE, 30) == pytest.approx(_residual_series(MIXTURE, 30), rel=1e-8)


def test_mean_residual_mixture_rises_to_slow_component():
    ks = np.arange(0, 2000)
    r = MIXTURE.mean_residual_array(ks)
    # the posterior weight drifts to the slow component, so the residual only grows
    assert np.all(np.diff(r) >= -1e-12)
    assert r[0] < 20.0
    assert r[-1] == pytest.approx(50.0, rel=1e-6)


def test_mean_residual_degenerate_law():
    with pytest.raises(ZeroProbabilityConditionError, match="zero-probability"):
        mean_residual(Geometric(1.0), 1)


def test_invalid_laws():
    with pytest.raises(InvalidLawError):
        Geometric(0.0)
    with pytest.raises(InvalidLawError):
        Mixture(1.5, 0.02, 0.2)
    with pytest.raises(InvalidLawError):
        IidGaussian(0.0, 0.0)
    with pytest.raises(InvalidLawError):
        Ar1(1.0, 1.0)
    with pytest.raises(InvalidLawError):
        Ar1(0.5, 1.0, innovation="student")
    with pytest.raises(InvalidLawError):
        QcdModel(Ar1(0.8, 1.0), IidGaussian(0.0, 1.0), Geometric(0.02), 1.0)
    with pytest.raises(InvalidLawError):
        QcdModel(IidGaussian(0.0, 1.0), IidGaussian(0.5, 1.0), Geometric(0.02), 0.0)


def test_forced_change_draws_post_law(model1a):
    steps = simulate_path(model1a, 100_000, np.random.default_rng(4), tau_a=0)
    assert all(s.changed for s in steps)
    assert all(s.mean_residual == 0.0 for s in steps)
    assert np.mean([s.y for s in steps]) == pytest.approx(0.5, abs=0.02)


def test_hidden_steps_before_change(model1a):
    steps = simulate_path(model1a, 50, np.random.default_rng(5), tau_a=20)
    assert [s.k for s in steps] == list(range(50))
    assert [s.changed for s in steps] == [k >= 20 for k in range(50)]
    assert all(s.mean_residual == pytest.approx(50.0) for s in steps[:20])


def test_zero_coefficient_ar1_is_iid():
    model = QcdModel(Ar1(0.0, 2.0), Ar1(0.0, 2.0), Geometric(0.02), 1.0)
    y = np.array([s.y for s in simulate_path(model, 50_000, np.random.default_rng(6))])
    assert y.std() == pytest.approx(2.0, rel=0.03)
    assert abs(np.corrcoef(y[:-1], y[1:])[0, 1]) < 0.02


def test_paths_are_deterministic(model1a):
    a = simulate_path(model1a, 300, np.random.default_rng(7))
    b = simulate_path(model1a, 300, np.random.default_rng(7))
    assert a == b


@pytest.mark.parametrize("fixture", ["model1a", "model2a"])
def test_chunking_does_not_change_the_path(fixture, request):
    model = request.getfixturevalue(fixture)
    whole = ObservationStream(model, np.random.default_rng(8), tau_a=15).next_chunk(40)
    split = ObservationStream(model, np.random.default_rng(8), tau_a=15)
    parts = [split.next_chunk(n) for n in (7, 13, 20)]
    np.testing.assert_allclose(np.concatenate([p.y for p in parts]), whole.y, rtol=0, atol=1e-12)
    assert np.array_equal(np.concatenate([p.changed for p in parts]), whole.changed)


def test_cauchy_quantiles():
    law = IidCauchy(0.0, 1.0)
    y = law.from_uniform(np.array([0.25, 0.5, 0.75]))
    np.testing.assert_allclose(y, [-1.0, 0.0, 1.0], atol=1e-12)


def test_matched_scales():
    assert stats.cauchy.cdf(1.0, scale=CAUCHY_MATCHED_GAMMA) == pytest.approx(stats.norm.cdf(1.0), abs=1e-10)
    # Laplace(0, b) with b = sqrt(1/2) has unit variance
    assert stats.laplace.var(scale=LAPLACE_MATCHED_B) == pytest.approx(1.0)
