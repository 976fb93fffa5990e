import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dastid.atoms import AtomicModel, coefficient_vector
from dastid.measure import MeasurementPlan, apply_plan, build_matrix
from dastid.metrics import h2_error
from dastid.net import build_net, net_for_cardinality
from dastid.solver import (DastProblem, InvalidParameterError, SolverConfig, choose_mu,
                           dual_atomic_norm, dual_gap, reconstruct_model, solve_dast)

from oracles import cd_lasso


def _instance(seed, n=10, size=50, rho=0.8, k=3, noise=0.05):
    rng = np.random.default_rng(seed)
    net = net_for_cardinality(rho, size)
    M = build_matrix(MeasurementPlan.frequency_list(rng.uniform(-np.pi, np.pi, n)), net)
    cs = np.zeros(len(net), complex)
    idx = rng.choice(len(net), k, replace=False)
    cs[idx] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    w = noise * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return net, M, cs, w


def test_choose_mu_examples():
    assert choose_mu(0.0, 80, 0.95, 0.5) == 0.0
    expected = 2 * 0.01 * math.sqrt(80 * math.log(11 * 0.95 ** 2 / (0.5 * 0.05)))
    assert choose_mu(0.01, 80, 0.95, 0.5) == pytest.approx(expected, rel=1e-15)
    assert choose_mu(0.01, 80, 0.95, 0.5) == pytest.approx(0.4376, abs=1e-4)


@given(st.floats(1e-4, 10), st.integers(1, 10_000), st.floats(0.3, 0.99), st.floats(0.01, 0.99))
def test_choose_mu_sqrt_n_scaling(sigma, n, rho, delta):
    if 11 * rho ** 2 / (delta * (1 - rho)) <= 1:
        return
    assert choose_mu(sigma, 4 * n, rho, delta) / choose_mu(sigma, n, rho, delta) == pytest.approx(2.0, rel=1e-14)


def test_choose_mu_invalid_log_argument():
    with pytest.raises(InvalidParameterError):
        choose_mu(0.1, 10, 0.05, 0.9)


def test_large_mu_gives_zero():
    net, M, cs, w = _instance(0)
    y = M @ cs + w
    mu = dual_atomic_norm(M, y) * 1.0001
    sol = solve_dast(DastProblem(M, y, mu))
    assert np.all(sol.coeffs == 0)
    assert sol.converged
    assert dual_gap(DastProblem(M, y, 1e6), np.zeros(len(net))) == pytest.approx(0.0, abs=1e-12)


def test_noiseless_on_grid_atom():
    net = net_for_cardinality(0.9, 400)
    k = 123
    truth = AtomicModel([net.points[k]], [1.0], 0.9)
    plan = MeasurementPlan.frequency_uniform(40)
    y = apply_plan(plan, truth)
    sol = solve_dast(DastProblem(build_matrix(plan, net), y, 1e-6 * np.linalg.norm(y)))
    assert k in sol.support
    assert h2_error(reconstruct_model(sol.coeffs, net), truth) <= 1e-3


@pytest.mark.parametrize("seed", range(8))
def test_matches_coordinate_descent_oracle(seed):
    net, M, cs, w = _instance(seed)
    y = M @ cs + w
    mu = 0.1 * dual_atomic_norm(M, y)
    sol = solve_dast(DastProblem(M, y, mu))
    _, F_ref, _ = cd_lasso(M.entries, y, mu)
    assert sol.converged
    assert sol.objective == pytest.approx(F_ref, rel=1e-6)
    assert 0 <= sol.dual_gap <= 1e-6 * (1 + np.vdot(y, y).real)


@pytest.mark.parametrize("seed", range(5))
def test_solution_invariants(seed):
    net, M, cs, w = _instance(seed + 100)
    p = DastProblem(M, M @ cs + w, 0.05)
    sol = solve_dast(p)
    assert sol.objective == pytest.approx(p.objective(sol.coeffs), rel=1e-10)
    assert dual_gap(p, sol.coeffs) >= -1e-12
    assert np.all(np.diff(sol.objective_history) <= 0)


@pytest.mark.parametrize("seed", range(6))
def test_theorem3_inequalities(seed):
    net, M, cs, w = _instance(seed + 200)
    y = M @ cs + w
    mu = 1.5 * dual_atomic_norm(M, w)
    sol = solve_dast(DastProblem(M, y, mu))
    D = M @ (sol.coeffs - cs)
    slack = 10 * sol.gap_tol
    assert np.vdot(D, D).real <= 2 * mu * np.abs(cs).sum() + slack
    assert mu * np.abs(sol.coeffs).sum() <= mu * np.abs(cs).sum() + np.vdot(w, D).real + slack


def test_dual_atomic_norm_examples():
    net, M, _, _ = _instance(3)
    assert dual_atomic_norm(M, np.zeros(10)) == 0.0
    col = M.entries[:, 7]
    assert dual_atomic_norm(M, col) >= np.vdot(col, col).real
    z = np.random.default_rng(0).standard_normal(10) + 0j
    assert dual_atomic_norm(M, 2 * z) == pytest.approx(2 * dual_atomic_norm(M, z), rel=1e-14)


@settings(max_examples=15, deadline=None)
@given(st.floats(-math.pi, math.pi))
def test_gap_phase_invariance(phi):
    net, M, cs, w = _instance(5)
    y = M @ cs + w
    p = DastProblem(M, y, 0.05)
    sol = solve_dast(p)
    rot = np.exp(1j * phi)
    g1 = dual_gap(p, sol.coeffs)
    g2 = dual_gap(DastProblem(M, rot * y, 0.05), rot * sol.coeffs)
    assert g2 == pytest.approx(g1, abs=1e-12)


def test_column_order_independence():
    net, M, cs, w = _instance(9)
    y = M @ cs + w
    sol = solve_dast(DastProblem(M, y, 0.05))
    perm = np.random.default_rng(1).permutation(len(net))
    sol_p = solve_dast(DastProblem(M.entries[:, perm], y, 0.05))
    assert abs(sol_p.objective - sol.objective) < sol.gap_tol


def test_nonconvergence_status():
    net, M, cs, w = _instance(4)
    sol = solve_dast(DastProblem(M, M @ cs + w, 1e-4), SolverConfig(max_iter=3, gap_tol=1e-14))
    assert not sol.converged
    assert sol.status == "max_iter"
    assert sol.iterations <= 3


def test_real_system_tying():
    net = net_for_cardinality(0.9, 300)
    truth = AtomicModel.conjugate_pair(0.6 + 0.3j, 1 - 2j, 0.9)
    plan = MeasurementPlan.frequency_uniform(30)
    y = apply_plan(plan, truth)
    M = build_matrix(plan, net)
    sol = solve_dast(DastProblem(M, y, 1e-3), SolverConfig(real_system=True))
    conj = net.conjugate_index()
    np.testing.assert_allclose(sol.coeffs[conj], np.conj(sol.coeffs), atol=1e-14)
    real_pts = np.abs(net.points.imag) == 0
    assert np.all(sol.coeffs[real_pts].imag == 0)
    m = reconstruct_model(sol.coeffs, net, real_system=True)
    assert m.real_system


def test_threads_recorded():
    net, M, cs, w = _instance(2)
    sol = solve_dast(DastProblem(M, M @ cs + w, 0.05), SolverConfig(threads=1))
    assert sol.threads == 1


def test_reconstruct_examples():
    net = build_net(0.9, 0.3)
    assert len(reconstruct_model(np.zeros(len(net)), net)) == 0
    k = int(np.argmin(np.abs(net.points - 0.5)))
    c = np.zeros(len(net), complex)
    c[k] = 2
    m = reconstruct_model(c, net)
    assert m.terms == [(net.points[k], 2)]
    assert m.rho == net.rho


def test_reconstruct_round_trip():
    net, M, cs, w = _instance(6)
    c = np.random.default_rng(0).standard_normal(len(net)) + 0j
    m = reconstruct_model(c, net, support_tol=0.0)
    np.testing.assert_allclose(apply_plan(M.plan, m), M @ c, atol=1e-9)
    np.testing.assert_allclose(coefficient_vector(m, net.points), c)


@pytest.mark.parametrize("kw", [dict(mu=0.0), dict(mu=-1.0), dict(y=np.ones(3))])
def test_problem_validation(kw):
    net, M, cs, w = _instance(0)
    args = dict(M=M, y=M @ cs, mu=0.1)
    args.update(kw)
    with pytest.raises(ValueError):
        DastProblem(**args)


def test_solver_config_from_mapping():
    cfg = SolverConfig.from_mapping({"gap_tol": "1e-8", "max_iter": "10", "restart": "off", "threads": "none"})
    assert (cfg.gap_tol, cfg.max_iter, cfg.restart, cfg.threads) == (1e-8, 10, False, None)
    with pytest.raises(KeyError):
        SolverConfig.from_mapping({"bogus": 1})
