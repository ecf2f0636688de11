import numpy as np
import pytest

from backend.model import Ar1, IidGaussian, IidLaplace
from backend.sis import (
    IidLlr,
    MarkovLlr,
    SisKind,
    SisSpec,
    SisState,
    drift_eval,
    run_chunk,
    sis_reset,
    sis_step,
)
from utils.error import DimensionMismatchError, DriftArgumentError

N01 = IidGaussian(0.0, 1.0)


def _constant(f: float) -> IidLlr:
    # equal design laws give a zero LLR, so the drift is the shift alone
    return IidLlr(N01, N01, f)


def test_iid_llr_examples(llr1a):
    assert drift_eval(llr1a, None, 0.25) == pytest.approx(0.0, abs=1e-15)
    assert drift_eval(llr1a.with_shift(0.02), None, 0.0) == pytest.approx(-0.105)
    y = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(llr1a.evaluate(None, y), 0.5 * y - 0.125)


def test_markov_llr_example():
    d = MarkovLlr(Ar1(0.8, 1.0), Ar1(0.5, 1.0))
    assert drift_eval(d, 1.0, 1.0) == pytest.approx(0.195 - 0.3)
    x, z = 0.7, -1.3
    assert drift_eval(d, x, z) == pytest.approx(0.195 * x * x - 0.3 * x * z)


def test_laplace_llr_closed_form():
    b = 0.7
    d = IidLlr(IidLaplace(0.0, b), IidLaplace(0.5, b))
    y = np.array([-2.0, 0.1, 0.3, 4.0])
    expected = (np.abs(y) - np.abs(y - 0.5)) / b
    np.testing.assert_allclose(d.evaluate(None, y), expected)


def test_drift_argument_mismatch(llr1a):
    with pytest.raises(DriftArgumentError):
        drift_eval(llr1a, 0.0, 1.0)
    with pytest.raises(DriftArgumentError):
        drift_eval(MarkovLlr(Ar1(0.8, 1.0), Ar1(0.5, 1.0)), None, 1.0)


@pytest.mark.parametrize(
    "kind, s, f, expected",
    [
        (SisKind.CUSUM, 0.0, -1.0, 0.0),
        (SisKind.CUSUM, 1.2, -0.3, 0.9),
        (SisKind.SHIRYAEV_ROBERTS, 0.0, 0.0, 1.0),
    ],
)
def test_sis_step_examples(kind, s, f, expected):
    spec = SisSpec.of((kind, _constant(f)))
    out = sis_step(spec, SisState(np.array([s])), 0.0)
    assert out.s[0] == pytest.approx(expected)
    assert out.y_prev == 0.0


def test_sis_reset():
    one = SisSpec.of((SisKind.CUSUM, _constant(0.0)))
    two = SisSpec.of((SisKind.CUSUM, _constant(0.0)), (SisKind.CUSUM, _constant(1.0)))
    assert np.array_equal(sis_reset(one).s, [0.0])
    assert np.array_equal(sis_reset(two).s, [0.0, 0.0])
    assert sis_reset(two).y_prev is None
    assert sis_step(one, sis_reset(one), 3.0).s[0] == 0.0
    assert sis_step(SisSpec.of((SisKind.CUSUM, _constant(-0.5))), sis_reset(one), 3.0).s[0] == 0.0


def test_state_dimension_checked():
    spec = SisSpec.of((SisKind.CUSUM, _constant(0.0)))
    with pytest.raises(DimensionMismatchError):
        sis_step(spec, SisState(np.zeros(2)), 0.0)


def test_equal_laws_keep_cusum_at_zero():
    spec = SisSpec.of((SisKind.CUSUM, _constant(0.0)))
    y = np.random.default_rng(0).standard_normal(1000)
    vals, state = run_chunk(spec, sis_reset(spec), y)
    assert np.all(vals == 0.0)
    assert state.y_prev == y[-1]


def test_cusum_reflection_dominance(sis1a):
    rng = np.random.default_rng(1)
    state = sis_reset(sis1a)
    for y in rng.normal(0.0, 2.0, 500):
        f = drift_eval(sis1a.components[0].drift, None, y)
        nxt = sis_step(sis1a, state, y)
        assert nxt.s[0] >= 0.0
        assert nxt.s[0] >= state.s[0] + f - 1e-12
        state = nxt


@pytest.mark.parametrize("kind", [SisKind.CUSUM, SisKind.SHIRYAEV_ROBERTS])
def test_run_chunk_agrees_with_steps(kind, llr1a):
    spec = SisSpec.of((kind, llr1a.with_shift(0.02)), (SisKind.CUSUM, llr1a))
    y = np.random.default_rng(2).normal(0.3, 1.0, 200)
    vals, last = run_chunk(spec, sis_reset(spec), y)
    state = sis_reset(spec)
    for i, v in enumerate(y):
        state = sis_step(spec, state, v)
        np.testing.assert_allclose(vals[i], state.s, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(last.s, state.s, rtol=1e-9)


def test_run_chunk_markov_skips_first_drift(sis2a):
    y = np.random.default_rng(3).standard_normal(100)
    vals, _ = run_chunk(sis2a, sis_reset(sis2a), y)
    assert vals[0, 0] == 0.0
    state = sis_step(sis2a, sis_reset(sis2a), y[0])
    for v in y[1:]:
        state = sis_step(sis2a, state, v)
    assert vals[-1, 0] == pytest.approx(state.s[0])


def test_split_chunks_match_one_chunk(sis2a):
    y = np.random.default_rng(4).standard_normal(60)
    whole, _ = run_chunk(sis2a, sis_reset(sis2a), y)
    a, mid = run_chunk(sis2a, sis_reset(sis2a), y[:25])
    b, _ = run_chunk(sis2a, mid, y[25:])
    np.testing.assert_allclose(np.vstack([a, b]), whole, atol=1e-12)


def test_drift_means_have_the_right_signs(llr1a):
    rng = np.random.default_rng(5)
    d = llr1a.with_shift(0.02)
    m0 = d.evaluate(None, rng.normal(0.0, 1.0, 1_000_000)).mean()
    m1 = d.evaluate(None, rng.normal(0.5, 1.0, 1_000_000)).mean()
    assert m0 == pytest.approx(-0.105, abs=0.002)
    assert m1 == pytest.approx(0.145, abs=0.002)
