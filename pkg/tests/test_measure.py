import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dastid.atoms import AtomicModel, coefficient_vector, decomposition_weight, random_model
from dastid.measure import (MatrixSizeError, MeasurementPlan, add_noise, apply_plan, build_matrix,
                            observations_from_csv, observations_to_csv)
from dastid.net import build_net, net_for_cardinality

PLANS = [
    MeasurementPlan.frequency_uniform(12),
    MeasurementPlan.frequency_list([0.1, 1.0, 2.5, -3.0]),
    MeasurementPlan.impulse([1, 2, 5, 9]),
    MeasurementPlan.convolution(np.random.default_rng(0).standard_normal(15)),
]


def test_zero_model():
    for plan in PLANS:
        assert np.all(apply_plan(plan, AtomicModel.empty(0.9)) == 0)


def test_frequency_uniform_example():
    y = apply_plan(MeasurementPlan.frequency_uniform(4), AtomicModel([0], [1], 0.5))
    np.testing.assert_allclose(y, [-1j, -1, 1j, 1], atol=1e-15)


def test_impulse_example():
    y = apply_plan(MeasurementPlan.impulse([1, 2, 3]), AtomicModel([0.5], [1], 0.9))
    np.testing.assert_allclose(y, [0.75, 0.375, 0.1875], atol=1e-15)


def test_uniform_grid_indexing():
    th = MeasurementPlan.frequency_uniform(5).frequencies()
    np.testing.assert_allclose(th, 2 * np.pi * np.arange(1, 6) / 5)


@pytest.mark.parametrize("seed", range(4))
def test_convolution_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(25)
    m = random_model(rng, 3, 0.8)
    g = m.impulse_response(25)
    expected = np.concatenate([[0], np.convolve(g, u)[:24]])
    np.testing.assert_allclose(apply_plan(MeasurementPlan.convolution(u), m), expected, atol=1e-12)


def test_convolution_truncation_against_longer_horizon():
    rng = np.random.default_rng(4)
    u = rng.standard_normal(30)
    m = random_model(rng, 4, 0.9)
    K = 29
    short = apply_plan(MeasurementPlan.convolution(u, K=K), m)
    long = apply_plan(MeasurementPlan.convolution(u, K=2 * K), m)
    bound = decomposition_weight(m) * 2 * 0.9 ** K / (1 - 0.9) * np.abs(u).max()
    assert np.abs(short - long).max() <= bound


def test_single_point_net_column():
    M = build_matrix(MeasurementPlan.frequency_uniform(2), build_net(0.5, 2.0))
    np.testing.assert_allclose(M.entries[:, 0], [-1, 1], atol=1e-15)


@pytest.mark.parametrize("plan", PLANS, ids=lambda p: p.kind)
def test_matrix_consistent_with_apply(plan):
    net = build_net(0.8, 0.2)
    rng = np.random.default_rng(1)
    idx = rng.choice(len(net), 5, replace=False)
    m = AtomicModel(net.points[idx], rng.standard_normal(5) + 1j * rng.standard_normal(5), 0.8)
    c = coefficient_vector(m, net.points)
    M = build_matrix(plan, net)
    np.testing.assert_allclose(M @ c, apply_plan(plan, m), atol=1e-12)
    for j in idx[:2]:
        np.testing.assert_allclose(M.entries[:, j], apply_plan(plan, AtomicModel([net.points[j]], [1], 0.8)),
                                   atol=1e-14)


@pytest.mark.parametrize("n", [7, 40, 200])
def test_frequency_columns_bounded(n):
    M = build_matrix(MeasurementPlan.frequency_uniform(n), net_for_cardinality(0.95, 500))
    assert np.abs(M.entries).max() <= 2


@pytest.mark.parametrize("rho", [0.5, 0.9])
def test_adjacent_frequency_lipschitz(rho):
    n = 64
    M = build_matrix(MeasurementPlan.frequency_uniform(n), build_net(rho, 0.1)).entries
    step = np.abs(np.diff(M, axis=0))
    assert step.max() <= (1 + rho) / (1 - rho) * 2 * np.pi / n + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(seed, alpha, beta):
    rng = np.random.default_rng(seed)
    m1, m2 = random_model(rng, 3, 0.9), random_model(rng, 2, 0.9)
    combo = m1 * alpha + m2 * beta
    for plan in PLANS:
        lhs = apply_plan(plan, combo)
        rhs = alpha * apply_plan(plan, m1) + beta * apply_plan(plan, m2)
        assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


def test_noise_identity_and_determinism():
    y = np.arange(5) * (1 + 1j)
    assert np.array_equal(add_noise(y, 0.0, 3), y)
    assert np.array_equal(add_noise(y, 0.3, 42), add_noise(y, 0.3, 42))
    assert not np.array_equal(add_noise(y, 0.3, 42), add_noise(y, 0.3, 43))


@pytest.mark.parametrize("y0", [np.zeros(100_000, complex), np.zeros(100_000)], ids=["complex", "real"])
def test_noise_variance(y0):
    sigma = 0.7
    w = add_noise(y0, sigma, 0)
    assert np.iscomplexobj(w) == np.iscomplexobj(y0)
    assert np.mean(np.abs(w) ** 2) == pytest.approx(sigma ** 2, rel=0.02)
    if np.iscomplexobj(w):
        assert np.var(w.real) == pytest.approx(sigma ** 2 / 2, rel=0.03)


def test_size_cap():
    with pytest.raises(MatrixSizeError):
        build_matrix(MeasurementPlan.frequency_uniform(100), build_net(0.9, 0.1), max_entries=1000)


@pytest.mark.parametrize("plan", PLANS, ids=lambda p: p.kind)
def test_plan_json_round_trip(plan):
    back = MeasurementPlan.from_json(plan.to_json())
    m = random_model(np.random.default_rng(2), 3, 0.9)
    assert back.kind == plan.kind and back.n == plan.n
    assert np.array_equal(apply_plan(back, m), apply_plan(plan, m))


def test_observation_csv_round_trip():
    y = add_noise(np.linspace(0, 1, 7) + 0j, 0.1, 5)
    text = observations_to_csv(y)
    assert text.splitlines()[0] == "index,re,im"
    assert np.array_equal(observations_from_csv(text), y)


@pytest.mark.parametrize("bad", [
    lambda: MeasurementPlan.impulse([0, 1]),
    lambda: MeasurementPlan.impulse([1.5]),
    lambda: MeasurementPlan.convolution([1.0, 2.0, 3.0], K=1),
    lambda: MeasurementPlan.frequency_uniform(0),
    lambda: MeasurementPlan("nope"),
])
def test_invalid_plans(bad):
    with pytest.raises((ValueError, TypeError)):
        bad()
