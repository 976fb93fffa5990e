import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dastid.atoms import AtomicModel, atom_impulse_response, random_model
from dastid.baseline import (DefectiveRealizationError, DiagonalRealization, PoleClippingWarning,
                             default_markov_horizon, estimate_markov, ho_kalman,
                             ho_kalman_realization, realization_impulse, simulate_io,
                             subspace_identify)
from dastid.metrics import h2_error


def _real_pair(seed, rho=0.9):
    return random_model(np.random.default_rng(seed), 1, rho, real_system=True)


def test_simulate_impulse_and_zero():
    m = _real_pair(0)
    u = np.zeros(30)
    u[0] = 1
    y = simulate_io(m, u)
    assert y[0] == 0
    np.testing.assert_allclose(y[1:], m.impulse_response(29).real, atol=1e-14)
    assert np.all(simulate_io(m, np.zeros(10)) == 0)


def test_simulate_matches_direct_convolution():
    m = AtomicModel([0.5], [1], 0.9, real_system=True)
    u = np.random.default_rng(1).standard_normal(50)
    g = atom_impulse_response(0.5, 50).real
    expected = [sum(g[j - 1] * u[t - j] for j in range(1, t + 1)) for t in range(50)]
    np.testing.assert_allclose(simulate_io(m, u), expected, atol=1e-10)


def test_simulate_requires_real_system():
    with pytest.raises(ValueError):
        simulate_io(AtomicModel([0.5j], [1], 0.9), np.ones(4))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.floats(-3, 3), st.floats(-3, 3))
def test_simulate_linearity(seed, a, b):
    rng = np.random.default_rng(seed)
    m = random_model(rng, 2, 0.9, real_system=True)
    u1, u2 = rng.standard_normal((2, 40))
    lhs = simulate_io(m, a * u1 + b * u2)
    rhs = a * simulate_io(m, u1) + b * simulate_io(m, u2)
    assert np.abs(lhs - rhs).max() <= 1e-10


def test_state_space_simulation_agrees():
    m = random_model(np.random.default_rng(4), 2, 0.85, real_system=True)
    u = np.random.default_rng(5).standard_normal(60)
    ss = DiagonalRealization.from_model(m)
    np.testing.assert_allclose(ss.simulate(u).real, simulate_io(m, u), atol=1e-12)
    assert ss.spectral_radius == pytest.approx(np.abs(m.poles).max())


def test_estimate_markov_examples():
    m = _real_pair(2)
    u = np.zeros(40)
    u[0] = 1
    y = simulate_io(m, u)
    np.testing.assert_array_equal(estimate_markov(u, y, 10), y[1:11])
    assert np.all(estimate_markov(np.random.default_rng(0).standard_normal(20), np.zeros(20), 5) == 0)


@pytest.mark.parametrize("seed", range(4))
def test_estimate_markov_noiseless(seed):
    m = _real_pair(seed, rho=0.8)
    u = np.random.default_rng(seed + 10).standard_normal(300)
    y = simulate_io(m, u)
    K = 15
    g = estimate_markov(u, y, K)
    # y[t] for t <= K depends only on g_1..g_t, but later samples carry the
    # tail beyond K; rho^K is the achievable accuracy
    np.testing.assert_allclose(g, m.impulse_response(K).real, atol=50 * 0.8 ** K)
    g_long = estimate_markov(u, y, 120)
    np.testing.assert_allclose(g_long[:K], m.impulse_response(K).real, atol=1e-6)


def test_estimate_markov_short_record():
    with pytest.raises(ValueError):
        estimate_markov(np.ones(3), np.ones(3), 5)


def test_ho_kalman_single_atom():
    g = atom_impulse_response(0.5, 40).real
    m = ho_kalman(g, 1, 20)
    assert m.poles[0] == pytest.approx(0.5, abs=1e-8)
    assert m.coeffs[0] == pytest.approx(1.0, abs=1e-8)


def test_ho_kalman_order_zero_rejected():
    with pytest.raises(ValueError):
        ho_kalman(np.ones(40), 0, 20)


@pytest.mark.parametrize("seed", range(6))
def test_ho_kalman_exact_markov(seed):
    m = _real_pair(seed)
    est = ho_kalman(m.impulse_response(39).real, 2, 20)
    assert h2_error(est, m) < 1e-6


def test_realization_reproduces_markov():
    m = random_model(np.random.default_rng(7), 2, 0.8, real_system=True)
    g = m.impulse_response(59).real
    A, B, C = ho_kalman_realization(g, len(m), 30)
    np.testing.assert_allclose(realization_impulse(A, B, C, 59).real, g, atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_pipeline_exactness(seed):
    m = _real_pair(seed, rho=0.9)
    u = np.random.default_rng(seed + 1).standard_normal(400)
    est = subspace_identify(u, simulate_io(m, u), 2, 0.9)
    assert h2_error(est, m) < 1e-5


def test_pole_clipping_warns():
    g = 1.01 ** np.arange(30)
    with pytest.warns(PoleClippingWarning):
        m = ho_kalman(g, 1, 15)
    assert np.abs(m.poles).max() <= 1 - 1e-8 + 1e-15


def test_defective_realization_flagged():
    a = 0.6
    g = np.arange(1, 40) * a ** np.arange(39)   # double pole at a
    with pytest.raises(DefectiveRealizationError) as info:
        ho_kalman(g, 2, 20, cond_max=1e4)
    A, B, C = info.value.A, info.value.B, info.value.C
    np.testing.assert_allclose(realization_impulse(A, B, C, 39).real, g, atol=1e-6)


def test_default_markov_horizon():
    assert default_markov_horizon(400, 0.9) == 175
    assert default_markov_horizon(11, 0.9) == 6
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert default_markov_horizon(1, 0.5) == 1
