"""Time-domain simulation and a textbook Ho-Kalman comparator."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._validation import check_positive_int, check_real_vector
from .atoms import AtomicModel
from .hankel import hankel_from_markov

POLE_CLIP = 1 - 1e-8


class PoleClippingWarning(UserWarning):
    """An identified pole left the unit disk and was pulled back radially."""


class DefectiveRealizationError(ArithmeticError):
    """The identified state matrix is not (numerically) diagonalizable.

    Carries the realization so callers can still score it from its
    impulse response.
    """

    def __init__(self, message, A, B, C):
        super().__init__(message)
        self.A, self.B, self.C = A, B, C


@dataclass(frozen=True, eq=False)
class DiagonalRealization:
    """``x[t+1] = A x[t] + B u[t]``, ``y[t] = C x[t]`` with ``A = diag(w)``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: float = 0.0

    @classmethod
    def from_model(cls, m: AtomicModel, check_len: int = 20) -> "DiagonalRealization":
        w = m.poles
        real = cls(np.diag(w), np.ones(w.size, complex), m.coeffs * (1 - np.abs(w) ** 2))
        if w.size:
            g = m.impulse_response(check_len)
            if not np.allclose(real.impulse_response(check_len), g, rtol=0, atol=1e-10):
                raise ArithmeticError("diagonal realization does not reproduce the Markov parameters")
        return real

    @property
    def spectral_radius(self) -> float:
        d = np.diag(self.A)
        return float(np.abs(d).max()) if d.size else 0.0

    def impulse_response(self, K: int) -> np.ndarray:
        """``C A^(k-1) B`` for ``k = 1..K``."""
        d = np.diag(self.A)
        return (d[None, :] ** np.arange(K)[:, None]) @ (self.C * self.B)

    def simulate(self, u) -> np.ndarray:
        """State recursion from ``x[0] = 0``; output is complex in general."""
        u = np.asarray(u, float)
        d = np.diag(self.A)
        x = np.zeros(d.size, complex)
        y = np.empty(u.size, complex)
        for t in range(u.size):
            y[t] = self.C @ x
            x = d * x + self.B * u[t]
        return y


def simulate_io(m: AtomicModel, u) -> np.ndarray:
    """Output ``y[t] = sum_{j=1}^{t} g_j u[t-j]`` of a real system from rest."""
    if not m.real_system:
        raise ValueError("simulate_io needs a real_system model (conjugate-closed terms)")
    u = check_real_vector(u, "u")
    T = u.size
    if len(m) == 0:
        return np.zeros(T)
    g = m.impulse_response(T)
    y = np.zeros(T, complex)
    y[1:] = np.convolve(g, u)[:T - 1]
    scale = max(1.0, float(np.abs(y).max()))
    if np.abs(y.imag).max() > 1e-10 * scale:
        raise ArithmeticError("simulated output has a non-negligible imaginary part")
    return y.real.copy()


def _lagged_inputs(u: np.ndarray, K: int) -> np.ndarray:
    """``Phi[t, j-1] = u[t-j]`` with zeros before the record starts."""
    col = np.concatenate([[0.0], u[:-1]])
    row = np.zeros(K)
    return scipy.linalg.toeplitz(col, row)


def estimate_markov(u, y, K: int) -> np.ndarray:
    """Least-squares Markov parameters ``g_1..g_K`` from one I/O record.

    Uses every sample (zero initial state) and returns the minimum-norm
    solution when the regression is underdetermined.
    """
    K = check_positive_int(K, "K")
    u = check_real_vector(u, "u", min_length=K + 1)
    y = check_real_vector(y, "y", min_length=K + 1)
    if u.size != y.size:
        raise ValueError(f"u and y differ in length: {u.size} != {y.size}")
    Phi = _lagged_inputs(u, K)
    g, *_ = np.linalg.lstsq(Phi, y, rcond=None)
    return g


def ho_kalman_realization(g, order: int, T: int):
    """Balanced ``(A, B, C)`` of the requested order from ``g_1..g_{2T-1}``."""
    order = check_positive_int(order, "order")
    T = check_positive_int(T, "T")
    if order > T:
        raise ValueError(f"order {order} exceeds Hankel size {T}")
    g = np.asarray(g, float).ravel()
    H = hankel_from_markov(g, T)
    U, s, Vh = np.linalg.svd(H)
    root = np.sqrt(s[:order])
    O = U[:, :order] * root
    Ctrb = root[:, None] * Vh[:order]
    if T > 1:
        A, *_ = np.linalg.lstsq(O[:-1], O[1:], rcond=None)
    else:
        A = np.zeros((order, order))
    return A, Ctrb[:, 0], O[0, :]


def ho_kalman(g, order: int, T: int, rho: float | None = None, cond_max: float = 1e12) -> AtomicModel:
    """Atomic model from the rank-``order`` Ho-Kalman realization of ``g``.

    The realization is diagonalized to partial fractions ``r_i / (z - p_i)``
    and rescaled to atom coefficients ``r_i / (1 - |p_i|^2)``. Poles with
    modulus above ``1 - 1e-8`` are pulled back radially with a
    :class:`PoleClippingWarning`.
    """
    A, B, C = ho_kalman_realization(g, order, T)
    lam, W = np.linalg.eig(A)
    if np.linalg.cond(W) > cond_max:
        raise DefectiveRealizationError("state matrix is not diagonalizable", A, B, C)
    resid = (C @ W) * np.linalg.solve(W, B)
    mod = np.abs(lam)
    if np.any(mod > POLE_CLIP):
        warnings.warn(f"{int(np.sum(mod > POLE_CLIP))} pole(s) clipped to radius {POLE_CLIP}",
                      PoleClippingWarning, stacklevel=2)
        lam = np.where(mod > POLE_CLIP, lam / np.where(mod > 0, mod, 1) * POLE_CLIP, lam)
        mod = np.abs(lam)
    coeffs = resid / (1 - mod ** 2)
    if rho is None:
        rho = min(max(float(mod.max()), 1e-12), POLE_CLIP)
    return AtomicModel(lam, coeffs, max(rho, float(mod.max())))


def realization_impulse(A, B, C, K: int) -> np.ndarray:
    out = np.empty(K, complex)
    x = np.asarray(B, complex)
    for k in range(K):
        out[k] = C @ x
        x = A @ x
    return out


def default_markov_horizon(m: int, rho: float) -> int:
    """``min(floor((m+1)/2), ceil(log(1e-8)/log(rho)))``."""
    return max(1, min((m + 1) // 2, math.ceil(math.log(1e-8) / math.log(rho))))


def subspace_identify(u, y, order: int, rho: float, K: int | None = None,
                      T: int | None = None) -> AtomicModel:
    """Markov-parameter regression followed by Ho-Kalman.

    ``K`` defaults to :func:`default_markov_horizon` and the Hankel size to
    ``floor((K + 1) / 2)`` so that ``2T - 1 <= K``.
    """
    u = check_real_vector(u, "u")
    if K is None:
        K = default_markov_horizon(u.size, rho)
    K = min(K, u.size - 1)
    if T is None:
        T = max(order, (K + 1) // 2)
    g = estimate_markov(u, y, max(K, 2 * T - 1))
    return ho_kalman(g, order, T)
