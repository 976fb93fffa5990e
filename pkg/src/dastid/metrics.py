"""Error norms between atomic models and the estimation-error bounds."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from ._validation import check_positive, check_positive_int, check_rho
from .atoms import AtomicModel, decomposition_weight, eval_model, model_h2_norm
from .measure import MeasurementPlan, apply_plan
from .net import eps_from_delta
from .solver import InvalidParameterError

_GRID_CHUNK = 1024


class HinfError(NamedTuple):
    raw: float
    certified: float


def h2_error(m1: AtomicModel, m2: AtomicModel) -> float:
    """``||m1 - m2||_H2`` in closed form (not squared)."""
    return model_h2_norm(m1 - m2)


def hinf_error(m1: AtomicModel, m2: AtomicModel, grid_size: int = 8192) -> HinfError:
    """Grid maximum of ``|m1 - m2|`` on the unit circle and a certified upper bound.

    Between grid points the difference can grow by at most
    ``(1 + r) / (1 - r) * W * pi / grid_size`` where ``r`` is the largest
    pole modulus and ``W`` the decomposition weight of the difference.
    """
    grid_size = check_positive_int(grid_size, "grid_size")
    diff = m1 - m2
    if len(diff) == 0:
        return HinfError(0.0, 0.0)
    z = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    raw = 0.0
    for start in range(0, grid_size, _GRID_CHUNK):
        raw = max(raw, float(np.abs(eval_model(diff, z[start:start + _GRID_CHUNK])).max()))
    r = float(np.abs(diff.poles).max())
    slack = (1 + r) / (1 - r) * decomposition_weight(diff) * math.pi / grid_size
    return HinfError(raw, raw + slack)


def empirical_mse(plan: MeasurementPlan, m1: AtomicModel, m2: AtomicModel) -> float:
    """Mean squared difference of the two models' measurements."""
    d = apply_plan(plan, m1) - apply_plan(plan, m2)
    return float(np.vdot(d, d).real) / plan.n


def _log_arg(rho: float, delta: float, variant: str) -> float:
    if variant == "eps":
        arg = 11 * rho ** 2 / ((1 - rho) * eps_from_delta(delta, rho))
    elif variant == "delta":
        arg = 11 * rho ** 2 / ((1 - rho) * delta)
    else:
        raise ValueError(f"log variant must be 'eps' or 'delta', got {variant!r}")
    if arg <= 1.0:
        raise InvalidParameterError(f"log argument {arg:.4g} must exceed 1")
    return math.log(arg)


def _check_bound_args(rho, sigma, delta, n):
    rho = check_rho(rho)
    sigma = check_positive(sigma, "sigma", strict=False)
    if not 0.0 < delta < 1.0:
        raise InvalidParameterError(f"delta must lie in (0, 1), got {delta}")
    n = check_positive_int(n, "n")
    return rho, sigma, float(delta), n


def theorem_bound(rho: float, sigma: float, delta: float, n: int, hankel_nuclear: float,
                  log_variant: str = "eps") -> float:
    """Bound on the squared H2 error with the stated constant 186.

    ``186 (1+rho)/(1-rho) * (sqrt(sigma^2 log(.)) * G / (sqrt(n) (1-delta))
    + 4 G^2 / (pi n (1-delta)^2))`` with ``G`` the Hankel nuclear norm of the
    true system. The log argument is ``11 rho^2 / ((1-rho) eps)`` with
    ``eps`` derived from ``delta``, or ``11 rho^2 / ((1-rho) delta)`` for
    ``log_variant="delta"``.
    """
    rho, sigma, delta, n = _check_bound_args(rho, sigma, delta, n)
    g = check_positive(hankel_nuclear, "hankel_nuclear", strict=False)
    log_term = _log_arg(rho, delta, log_variant)
    q = g * g / (n * (1 - delta) ** 2)
    return 186 * (1 + rho) / (1 - rho) * (
        math.sqrt(sigma ** 2 * log_term) * math.sqrt(q) + 4 * q / math.pi
    )


def theorem_bound_59(rho: float, sigma: float, delta: float, n: int, atomic_norm: float) -> float:
    """Constant-59 variant from the end of the proof, in terms of the atomic norm.

    ``59 (1+rho)/(1-rho) * (sqrt(4 sigma^2 log(11 rho^2/((1-rho) delta))) * A
    / (sqrt(n) (1-delta)) + A^2 / (n (1-delta)^2))``. Pass
    ``8/pi * hankel_nuclear`` for ``A`` to get a bound in Hankel terms.
    """
    rho, sigma, delta, n = _check_bound_args(rho, sigma, delta, n)
    a = check_positive(atomic_norm, "atomic_norm", strict=False)
    log_term = _log_arg(rho, delta, "delta")
    q = a * a / (n * (1 - delta) ** 2)
    return 59 * (1 + rho) / (1 - rho) * (math.sqrt(4 * sigma ** 2 * log_term) * math.sqrt(q) + q)


def effective_degree(m: AtomicModel, rel_tol: float = 1e-3) -> int:
    """Number of terms with ``|c| > rel_tol * max |c|``."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if len(m) == 0:
        return 0
    mags = np.abs(m.coeffs)
    if mags.max() == 0.0:
        return 0
    return int(np.count_nonzero(mags > rel_tol * mags.max()))


@dataclass(frozen=True)
class ErrorReport:
    h2_error: float
    hinf_error: float
    hinf_certified: float
    empirical_mse: float
    effective_degree: int
    theorem_bound: float
    theorem_bound_59: float
    bound_satisfied: bool

    def to_dict(self) -> dict:
        return asdict(self)


def error_report(truth: AtomicModel, estimate: AtomicModel, plan: MeasurementPlan,
                 rho: float, sigma: float, delta: float, hankel_nuclear: float,
                 grid_size: int = 8192, degree_tol: float = 1e-3) -> ErrorReport:
    """Every error metric of one identification run.

    ``bound_satisfied`` compares the squared H2 error with the constant-186
    bound; ``n`` in the bounds is the number of measurements in ``plan``.
    """
    h2 = h2_error(estimate, truth)
    hinf = hinf_error(estimate, truth, grid_size)
    bound = theorem_bound(rho, sigma, delta, plan.n, hankel_nuclear)
    bound59 = theorem_bound_59(rho, sigma, delta, plan.n, 8 / math.pi * hankel_nuclear)
    return ErrorReport(
        h2_error=h2,
        hinf_error=hinf.raw,
        hinf_certified=hinf.certified,
        empirical_mse=empirical_mse(plan, estimate, truth),
        effective_degree=effective_degree(estimate, degree_tol),
        theorem_bound=bound,
        theorem_bound_59=bound59,
        bound_satisfied=h2 * h2 <= bound,
    )
