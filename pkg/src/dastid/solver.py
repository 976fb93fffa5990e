"""Discretized atomic soft thresholding (DAST).

Solves the complex weighted-l1 problem

    minimize_c  0.5 * ||M c - y||^2 + mu * sum_j |c_j|

by accelerated proximal gradient with function-value restart, and
certifies the result with a Fenchel duality gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from ._validation import check_complex_vector, check_positive, check_positive_int, check_rho
from .atoms import AtomicModel
from .measure import MeasurementMatrix
from .net import EpsilonNet

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover
    threadpool_limits = None


class InvalidParameterError(ValueError):
    """A formula was evaluated outside the range where it is meaningful."""


def choose_mu(sigma: float, n: int, rho: float, delta: float) -> float:
    """Regularization weight ``2 sigma sqrt(n log(11 rho^2 / (delta (1 - rho))))``."""
    sigma = check_positive(sigma, "sigma", strict=False)
    n = check_positive_int(n, "n")
    rho = check_rho(rho)
    if not 0.0 < delta < 1.0:
        raise InvalidParameterError(f"delta must lie in (0, 1), got {delta}")
    arg = 11 * rho ** 2 / (delta * (1 - rho))
    if arg <= 1.0:
        raise InvalidParameterError(
            f"log argument 11 rho^2 / (delta (1 - rho)) = {arg:.4g} must exceed 1"
        )
    return 2 * sigma * math.sqrt(n * math.log(arg))


@dataclass
class SolverConfig:
    """Knobs for :func:`solve_dast`.

    ``gap_tol`` is an absolute duality-gap target; ``None`` means
    ``1e-6 * (1 + ||y||^2)``.
    """

    gap_tol: float | None = None
    max_iter: int = 50_000
    support_tol: float = 1e-6
    restart: bool = True
    threads: int | None = None
    real_system: bool = False
    gap_every: int = 10
    power_iters: int = 30
    lipschitz_margin: float = 1.05

    @classmethod
    def from_mapping(cls, data: dict) -> "SolverConfig":
        """Build from string key-value pairs (unknown keys are rejected)."""
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in data.items():
            if key not in known:
                raise KeyError(f"unknown solver option {key!r}")
            if raw is None or (isinstance(raw, str) and raw.strip().lower() in ("", "none")):
                kwargs[key] = None
            elif key in ("restart", "real_system"):
                kwargs[key] = raw if isinstance(raw, bool) else str(raw).strip().lower() in ("1", "true", "yes", "on")
            elif key in ("max_iter", "threads", "gap_every", "power_iters"):
                kwargs[key] = int(raw)
            else:
                kwargs[key] = float(raw)
        return cls(**kwargs)


@dataclass(frozen=True, eq=False)
class DastProblem:
    """LASSO instance ``(M, y, mu)``."""

    M: np.ndarray
    y: np.ndarray
    mu: float
    net: EpsilonNet | None = None

    def __post_init__(self):
        net = self.net
        M = self.M
        if isinstance(M, MeasurementMatrix):
            net = net if net is not None else M.net
            M = M.entries
        M = np.asarray(M, complex)
        if M.ndim != 2:
            raise ValueError("M must be a 2-D matrix")
        y = check_complex_vector(self.y, "y", length=M.shape[0])
        mu = float(self.mu)
        if not mu > 0:
            raise ValueError(f"mu must be > 0, got {mu}")
        if net is not None and len(net) != M.shape[1]:
            raise ValueError("net size does not match the number of columns of M")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "net", net)

    def objective(self, c) -> float:
        r = self.M @ c - self.y
        return 0.5 * float(np.vdot(r, r).real) + self.mu * float(np.abs(c).sum())


@dataclass(eq=False)
class DastSolution:
    coeffs: np.ndarray
    objective: float
    dual_gap: float
    iterations: int
    support: np.ndarray
    converged: bool
    gap_tol: float
    mu: float
    lipschitz: float
    restarts: int = 0
    threads: int | None = None
    objective_history: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)

    @property
    def status(self) -> str:
        return "converged" if self.converged else "max_iter"


class _Coordinates:
    """Free coordinates ``v`` and their expansion to net coefficients ``c``.

    Untied: ``c = v``. Tied (real systems): one complex coordinate per
    conjugate pair with ``c[conj] = conj(v)`` and weight 2, and one real
    coordinate per real pole.
    """

    def __init__(self, p: int, rep: np.ndarray, partner: np.ndarray, real_mask: np.ndarray):
        self.p = p
        self.rep = rep
        self.partner = partner
        self.real_mask = real_mask
        self.pair = partner >= 0
        self.tied = bool(self.pair.any() or real_mask.any())
        self.size = rep.size
        self.weights = np.where(self.pair, 2.0, 1.0)

    @classmethod
    def untied(cls, p: int) -> "_Coordinates":
        return cls(p, np.arange(p), np.full(p, -1), np.zeros(p, bool))

    @classmethod
    def tied_to(cls, net: EpsilonNet | None) -> "_Coordinates":
        if net is None:
            raise ValueError("the real-system constraint needs the net to pair conjugate poles")
        partner = net.conjugate_index()
        if np.any(partner < 0):
            raise ValueError("net is not closed under conjugation")
        p = len(net)
        is_real = partner == np.arange(p)
        rep = np.flatnonzero(is_real | (net.points.imag > 0))
        return cls(p, rep, np.where(is_real[rep], -1, partner[rep]), is_real[rep])

    def subset(self, active: np.ndarray):
        """Coordinates restricted to ``active``, plus the columns they touch."""
        rep, partner = self.rep[active], self.partner[active]
        cols = np.concatenate([rep, partner[partner >= 0]])
        remap = np.full(self.p, -1)
        remap[cols] = np.arange(cols.size)
        sub = _Coordinates(cols.size, remap[rep], np.where(partner >= 0, remap[np.maximum(partner, 0)], -1),
                           self.real_mask[active])
        return sub, cols

    def expand(self, v: np.ndarray) -> np.ndarray:
        if not self.tied:
            return v
        c = np.zeros(self.p, complex)
        c[self.rep] = v
        c[self.partner[self.pair]] = np.conj(v[self.pair])
        return c

    def reduce(self, g: np.ndarray) -> np.ndarray:
        """Adjoint of :meth:`expand` for the real inner product ``Re <., .>``."""
        if not self.tied:
            return g
        out = g[self.rep].copy()
        out[self.pair] += np.conj(g[self.partner[self.pair]])
        out[self.real_mask] = out[self.real_mask].real
        return out

    def column_norms(self, col_norms: np.ndarray) -> np.ndarray:
        """Lipschitz constants of ``theta -> reduce(M^H theta)_i``."""
        out = col_norms[self.rep].copy()
        out[self.pair] += col_norms[self.partner[self.pair]]
        return out

    def prox(self, v: np.ndarray, thresh: float) -> np.ndarray:
        """Weighted complex soft-thresholding; real coordinates are projected first."""
        if self.real_mask.any():
            v = v.copy()
            v[self.real_mask] = v[self.real_mask].real
        mod = np.abs(v)
        t = thresh * self.weights
        scale = np.maximum(0.0, 1.0 - t / np.where(mod > 0, mod, 1.0))
        return v * np.where(mod > t, scale, 0.0)

    def penalty(self, v: np.ndarray) -> float:
        return float(self.weights @ np.abs(v))


def _power_iteration(apply_normal, size: int, n_iter: int, margin: float) -> float:
    """Estimate of ``||A||_2^2`` with a safety margin."""
    if size == 0:
        return 1.0
    rng = np.random.default_rng(0)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(n_iter):
        w = apply_normal(v)
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 1.0
        est = nrm
        v = w / nrm
    # certify with one more product: the Rayleigh quotient never exceeds the top eigenvalue
    rq = float(np.vdot(v, apply_normal(v)).real)
    return margin * max(est, rq)


def _gap_terms(M: np.ndarray, y: np.ndarray, mu: float, coords: _Coordinates,
               v: np.ndarray, Mc: np.ndarray):
    """Duality gap, scaled dual point and correlations ``reduce(M^H theta)``."""
    r = y - Mc
    corr = coords.reduce(M.conj().T @ r)
    dual_norm = float(np.max(np.abs(corr) / coords.weights)) if corr.size else 0.0
    scale = 1.0 if dual_norm <= mu else mu / dual_norm
    theta = r * scale
    primal = 0.5 * float(np.vdot(r, r).real) + mu * coords.penalty(v)
    diff = y - theta
    dual = 0.5 * float(np.vdot(y, y).real) - 0.5 * float(np.vdot(diff, diff).real)
    return primal - dual, corr * scale


def _dual_gap(M, y, mu, coords, v, Mc) -> float:
    return _gap_terms(M, y, mu, coords, v, Mc)[0]


def dual_atomic_norm(M, z) -> float:
    """``max_j |<M_j, z>|`` over the measured atoms (columns of ``M``)."""
    M = M.entries if isinstance(M, MeasurementMatrix) else np.asarray(M)
    z = check_complex_vector(z, "z", length=M.shape[0])
    if M.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(M.conj().T @ z)))


def dual_gap(p: DastProblem, c) -> float:
    """Fenchel duality gap of coefficients ``c`` for the untied problem."""
    c = check_complex_vector(c, "c", length=p.M.shape[1])
    coords = _Coordinates.untied(c.size)
    return _dual_gap(p.M, p.y, p.mu, coords, c, p.M @ c)


def solve_dast(p: DastProblem, cfg: SolverConfig | None = None) -> DastSolution:
    """Solve the DAST problem to a certified duality gap.

    Returns a solution with ``converged=False`` (status ``"max_iter"``) and
    the best iterate if ``cfg.max_iter`` is exhausted first.
    """
    cfg = cfg or SolverConfig()
    if cfg.threads is not None and threadpool_limits is not None:
        with threadpool_limits(limits=cfg.threads):
            return _solve(p, cfg)
    return _solve(p, cfg)


def _fista(coords, Ms, y, mu, x, L, max_iter, stop, cfg, history):
    """Accelerated proximal gradient on one working set.

    Returns the final iterate, its image, the (possibly enlarged) step
    constant, the number of iterations and restarts.
    """
    MsH = np.ascontiguousarray(Ms.conj().T)

    def fwd(v):
        return Ms @ coords.expand(v)

    def objective(v, Mv):
        r = Mv - y
        return 0.5 * float(np.vdot(r, r).real) + mu * coords.penalty(v)

    Mx = fwd(x)
    F = objective(x, Mx)
    z, Mz, t = x, Mx, 1.0
    it = restarts = 0
    while it < max_iter:
        it += 1
        x_new = coords.prox(z - coords.reduce(MsH @ (Mz - y)) / L, mu / L)
        Mx_new = fwd(x_new)
        F_new = objective(x_new, Mx_new)
        if F_new > F and cfg.restart:
            # drop momentum: plain proximal step from the last iterate
            restarts += 1
            t = 1.0
            x_new = coords.prox(x - coords.reduce(MsH @ (Mx - y)) / L, mu / L)
            Mx_new = fwd(x_new)
            F_new = objective(x_new, Mx_new)
            if F_new > F:
                if F_new > F + 1e-12 * max(1.0, abs(F)):
                    L *= 2.0
                x_new, Mx_new, F_new = x, Mx, F
        t_new = 0.5 * (1 + math.sqrt(1 + 4 * t * t))
        beta = (t - 1) / t_new
        z = x_new + beta * (x_new - x)
        Mz = Mx_new + beta * (Mx_new - Mx)
        x, Mx, F, t = x_new, Mx_new, F_new, t_new
        history.append(F)
        if it % cfg.gap_every == 0:
            Mx = fwd(x)
            if stop(x, Mx):
                break
    return x, L, it, restarts


def _solve(p: DastProblem, cfg: SolverConfig) -> DastSolution:
    M, y, mu = p.M, p.y, p.mu
    n, n_cols = M.shape
    full = _Coordinates.tied_to(p.net) if cfg.real_system else _Coordinates.untied(n_cols)
    gap_tol = cfg.gap_tol if cfg.gap_tol is not None else 1e-6 * (1 + float(np.vdot(y, y).real))
    lip_radius = full.column_norms(np.linalg.norm(M, axis=0))

    v = np.zeros(full.size, complex)
    gap, corr = _gap_terms(M, y, mu, full, v, np.zeros(n, complex))
    history = [0.5 * float(np.vdot(y, y).real)]
    alive = np.ones(full.size, bool)
    it = restarts = 0
    L = 0.0
    ws_size = 0
    while gap > gap_tol and it < cfg.max_iter:
        # gap-safe sphere: the optimal dual point lies within sqrt(2 gap) of theta
        radius = math.sqrt(2.0 * max(gap, 0.0))
        alive &= np.abs(corr) + lip_radius * radius >= mu * full.weights
        alive |= v != 0
        score = np.where(alive, np.abs(corr) / full.weights, -np.inf)
        support = np.flatnonzero(v != 0)
        ws_size = min(int(alive.sum()), max(2 * support.size, 32))
        ranked = np.argsort(-score, kind="stable")[:ws_size]
        work = np.union1d(support, ranked[np.isfinite(score[ranked])])
        coords, cols = full.subset(work)
        Ms = np.ascontiguousarray(M[:, cols])
        L = _power_iteration(lambda u: coords.reduce(Ms.conj().T @ (Ms @ coords.expand(u))),
                             coords.size, cfg.power_iters, cfg.lipschitz_margin)
        inner_tol = max(0.3 * gap, 0.5 * gap_tol)

        def stop(x, Mx, coords=coords, Ms=Ms):
            return _dual_gap(Ms, y, mu, coords, x, Mx) <= inner_tol

        x, L, k, r = _fista(coords, Ms, y, mu, v[work].copy(), L, cfg.max_iter - it, stop, cfg, history)
        it += k
        restarts += r
        v[:] = 0
        v[work] = x
        gap, corr = _gap_terms(M, y, mu, full, v, M @ full.expand(v))

    c = full.expand(v)
    r = M @ c - y
    objective = 0.5 * float(np.vdot(r, r).real) + mu * float(np.abs(c).sum())
    mags = np.abs(c)
    cutoff = cfg.support_tol * mags.max() if mags.size and mags.max() > 0 else np.inf
    return DastSolution(
        coeffs=c,
        objective=objective,
        dual_gap=max(gap, 0.0),
        iterations=it,
        support=np.flatnonzero(mags > cutoff),
        converged=gap <= gap_tol,
        gap_tol=gap_tol,
        mu=mu,
        lipschitz=float(L),
        restarts=restarts,
        threads=cfg.threads,
        objective_history=np.asarray(history),
    )


def reconstruct_model(c, net: EpsilonNet, support_tol: float = 1e-6,
                      real_system: bool = False) -> AtomicModel:
    """Atomic model from net coefficients, dropping ``|c_j| <= support_tol * max|c|``."""
    c = check_complex_vector(c, "c", length=len(net))
    mags = np.abs(c)
    if mags.size == 0 or mags.max() == 0.0:
        return AtomicModel(np.zeros(0, complex), np.zeros(0, complex), net.rho, real_system)
    keep = mags > support_tol * mags.max()
    return AtomicModel(net.points[keep], c[keep], net.rho, real_system)
