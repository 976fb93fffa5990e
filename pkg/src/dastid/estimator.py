"""scikit-learn style front ends for DAST and the Ho-Kalman baseline.

Both estimators follow the usual ``fit`` / ``predict`` / ``get_params``
contract so they can be cloned, grid-searched and composed, although their
inputs are signals rather than feature matrices.

Examples
--------
>>> import numpy as np
>>> from dastid import AtomicModel, DASTRegressor
>>> truth = AtomicModel.conjugate_pair(0.5 + 0.3j, 1 - 1j, rho=0.9)
>>> theta = 2 * np.pi * np.arange(1, 41) / 40
>>> est = DASTRegressor(rho=0.9, mu=1e-3, net_size=300).fit(theta, truth(np.exp(1j * theta)))
>>> bool(abs(est.predict([0.3])[0] - truth(np.exp(0.3j))) < 0.05)
True
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_complex_vector, check_positive, check_real_vector, check_rho
from .atoms import AtomicModel
from .baseline import DiagonalRealization, subspace_identify
from .measure import MeasurementPlan, apply_plan, build_matrix
from .net import build_net, net_for_cardinality
from .solver import DastProblem, SolverConfig, choose_mu, reconstruct_model, solve_dast


def _as_plan(X) -> MeasurementPlan:
    if isinstance(X, MeasurementPlan):
        return X
    return MeasurementPlan.frequency_list(check_real_vector(X, "X"))


class DASTRegressor(BaseEstimator):
    """Transfer-function estimate by discretized atomic soft thresholding.

    Parameters
    ----------
    rho : float, default=0.9
        Stability radius; candidate poles are drawn from ``|w| <= rho``.
    delta : float, default=0.5
        Accuracy parameter entering the regularization rule.
    sigma : float or None
        Noise level. Used to set ``mu`` when ``mu`` is None.
    mu : float or None
        Regularization weight; overrides the ``sigma`` rule.
    net_size : int, default=2000
        Target number of candidate poles. Ignored when ``eps`` is set.
    eps : float or None
        Net resolution; builds a certified ``eps``-net instead.
    gap_tol, max_iter, support_tol, real_system, threads
        Passed to :class:`~dastid.solver.SolverConfig`.

    Attributes
    ----------
    model_ : AtomicModel
        Identified system.
    solution_ : DastSolution
        Raw solver output with its duality-gap certificate.
    mu_ : float
        Regularization weight actually used.
    """

    def __init__(self, rho=0.9, delta=0.5, sigma=None, mu=None, net_size=2000, eps=None,
                 gap_tol=None, max_iter=50_000, support_tol=1e-6, real_system=False,
                 threads=None):
        self.rho = rho
        self.delta = delta
        self.sigma = sigma
        self.mu = mu
        self.net_size = net_size
        self.eps = eps
        self.gap_tol = gap_tol
        self.max_iter = max_iter
        self.support_tol = support_tol
        self.real_system = real_system
        self.threads = threads

    def _solver_config(self) -> SolverConfig:
        return SolverConfig(gap_tol=self.gap_tol, max_iter=self.max_iter,
                            support_tol=self.support_tol, real_system=self.real_system,
                            threads=self.threads)

    def fit(self, X, y):
        """Fit from measurements.

        ``X`` is either a 1-D array of frequencies (radians) at which ``y``
        samples the frequency response, or a :class:`MeasurementPlan`.
        """
        rho = check_rho(self.rho)
        plan = _as_plan(X)
        y = check_complex_vector(y, "y", length=plan.n)
        if self.mu is not None:
            mu = check_positive(self.mu, "mu")
        elif self.sigma is not None:
            mu = choose_mu(self.sigma, plan.n, rho, self.delta)
        else:
            raise ValueError("set either mu or sigma")
        if mu == 0.0:
            raise ValueError("sigma=0 gives mu=0; pass a small positive mu instead")
        net = build_net(rho, self.eps) if self.eps is not None else net_for_cardinality(rho, self.net_size)
        M = build_matrix(plan, net)
        sol = solve_dast(DastProblem(M, y, mu), self._solver_config())
        self.net_ = net
        self.plan_ = plan
        self.mu_ = mu
        self.solution_ = sol
        self.model_ = reconstruct_model(sol.coeffs, net, self.support_tol, self.real_system)
        self.converged_ = sol.converged
        return self

    def predict(self, X):
        """Frequency response at frequencies ``X``, or measurements under a plan."""
        check_is_fitted(self, "model_")
        return apply_plan(_as_plan(X), self.model_)

    def transfer_function(self, z):
        check_is_fitted(self, "model_")
        return self.model_(z)

    def score(self, X, y):
        """Coefficient of determination with complex residuals."""
        y = check_complex_vector(y, "y")
        resid = y - self.predict(X)
        total = y - y.mean()
        denom = float(np.vdot(total, total).real)
        return 1.0 - float(np.vdot(resid, resid).real) / denom if denom > 0 else 0.0


class HoKalmanRegressor(BaseEstimator):
    """Least-squares Markov parameters followed by a Ho-Kalman realization.

    Parameters
    ----------
    order : int
        State dimension of the realization (the true order, in the
        experiments).
    rho : float
        Used only for the default Markov horizon.
    markov_horizon, hankel_size : int or None
        Override the default horizon and Hankel dimension.
    """

    def __init__(self, order=2, rho=0.9, markov_horizon=None, hankel_size=None):
        self.order = order
        self.rho = rho
        self.markov_horizon = markov_horizon
        self.hankel_size = hankel_size

    def fit(self, u, y):
        u = check_real_vector(u, "u", min_length=2)
        y = check_real_vector(y, "y", min_length=2)
        self.model_ = subspace_identify(u, y, self.order, check_rho(self.rho),
                                        K=self.markov_horizon, T=self.hankel_size)
        return self

    def predict(self, u):
        """Output of the identified system driven by ``u`` from rest."""
        check_is_fitted(self, "model_")
        u = check_real_vector(u, "u")
        return DiagonalRealization.from_model(self.model_).simulate(u).real
