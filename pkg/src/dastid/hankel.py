"""Truncated Hankel matrices, Hankel singular values and nuclear norms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .atoms import AtomicModel, decomposition_weight

RANK_RTOL = 1e-10


class HankelDecompositionError(ArithmeticError):
    """SVD of a truncated Hankel matrix failed to converge."""


def default_order(rho: float, tol: float = 1e-10) -> int:
    """Truncation order T with ``rho**(2T) <= tol``."""
    if rho <= 0.0:
        return 1
    return max(1, math.ceil(math.log(tol) / (2 * math.log(rho))))


@dataclass(frozen=True, eq=False)
class TruncatedHankel:
    """Leading ``T x T`` block ``H[j, k] = g_{j+k+1}`` of a Hankel operator."""

    T: int
    entries: np.ndarray
    rho: float = 0.0

    @property
    def tail_bound(self) -> float:
        """Geometric tail ``rho^(2T) / (1 - rho^2)`` of the dropped entries."""
        return self.rho ** (2 * self.T) / (1 - self.rho ** 2)

    def singular_values(self) -> np.ndarray:
        return hankel_singular_values(self)

    def nuclear_norm(self) -> float:
        return hankel_nuclear_norm(self)

    def rank(self, rtol: float = RANK_RTOL) -> int:
        s = hankel_singular_values(self)
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.count_nonzero(s > rtol * s[0]))


def hankel_from_markov(g, T: int) -> np.ndarray:
    """``T x T`` Hankel matrix from Markov parameters ``g_1..g_{2T-1}``."""
    g = np.asarray(g)
    if g.size < 2 * T - 1:
        raise ValueError(f"need {2 * T - 1} Markov parameters for order {T}, got {g.size}")
    return scipy.linalg.hankel(g[:T], g[T - 1:2 * T - 1])


def build_hankel(m: AtomicModel, T: int | None = None) -> TruncatedHankel:
    """Truncated Hankel matrix of an atomic model."""
    if T is None:
        T = default_order(m.rho)
    if T < 1:
        raise ValueError("T must be >= 1")
    g = m.impulse_response(2 * T - 1)
    return TruncatedHankel(T, hankel_from_markov(g, T), m.rho)


# entries below this fraction of the largest are zeroed before the SVD; the
# perturbation is far below double precision, and it keeps LAPACK off the
# very slow subnormal-arithmetic path for fast-decaying responses
_FLUSH_REL = 1e-150


def hankel_singular_values(h: TruncatedHankel) -> np.ndarray:
    H = h.entries
    if not np.all(np.isfinite(H)):
        raise HankelDecompositionError("Hankel matrix has non-finite entries")
    keep = np.abs(H) > _FLUSH_REL * (np.abs(H).max() if H.size else 0.0)
    rows, cols = np.flatnonzero(keep.any(axis=1)), np.flatnonzero(keep.any(axis=0))
    if rows.size == 0:
        return np.zeros(min(H.shape))
    block = np.where(keep, H, 0)[:rows[-1] + 1, :cols[-1] + 1]
    try:
        s = scipy.linalg.svdvals(block)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise HankelDecompositionError(str(exc)) from exc
    s = np.concatenate([s, np.zeros(min(H.shape) - s.size)])
    return np.sort(s)[::-1]


def hankel_nuclear_norm(h: TruncatedHankel) -> float:
    return float(hankel_singular_values(h).sum())


def zeta_vector(a: complex, T: int) -> np.ndarray:
    """Unit-norm factor ``sqrt(1-|a|^2) (1, a, ..., a^(T-1))`` of the atom's Hankel matrix."""
    if T < 1:
        raise ValueError("T must be >= 1")
    a = complex(a)
    return math.sqrt(1 - abs(a) ** 2) * a ** np.arange(T)


def zeta_inner(a: complex, b: complex) -> complex:
    """Closed form of ``<zeta_a, zeta_b> = sum conj(zeta_a) zeta_b`` as ``T -> inf``."""
    a, b = complex(a), complex(b)
    return math.sqrt(1 - abs(a) ** 2) * math.sqrt(1 - abs(b) ** 2) / (1 - a.conjugate() * b)


def atom_pair_nuclear_norm(a: complex, b: complex, T: int | None = None) -> float:
    """Nuclear norm of ``Gamma_{phi_a} - Gamma_{phi_b}``.

    The difference ``zeta_a zeta_a^T - zeta_b zeta_b^T`` has rank at most two.
    With ``g = <zeta_a, zeta_b>`` its squared Frobenius norm is ``2 - 2 Re g^2``
    and the product of its two singular values is ``1 - |g|^2``, which gives
    the untruncated (``T=None``) value in closed form. A finite ``T`` uses a
    2x2 eigenproblem on the truncated Gram matrix.
    """
    a, b = complex(a), complex(b)
    if T is None:
        # closed form: 2 sqrt(|a-b|^2/|1-conj(a)b|^2 + Im(g)^2), free of the
        # cancellation the eigenvalue route suffers when a ~ b
        q = 1 - a.conjugate() * b
        im_g = math.sqrt((1 - abs(a) ** 2) * (1 - abs(b) ** 2)) * (a.conjugate() * b).imag / abs(q) ** 2
        return 2 * math.sqrt(abs(a - b) ** 2 / abs(q) ** 2 + im_g ** 2)
    Z = np.column_stack([zeta_vector(a, T), zeta_vector(b, T)])
    gram = Z.conj().T @ Z
    # X = U V^H with U = [za, -zb], V = conj([za, zb])
    sign = np.diag([1.0, -1.0])
    ev = np.linalg.eigvals(gram.conj() @ (sign @ gram @ sign))
    return float(np.sqrt(np.clip(ev.real, 0.0, None)).sum())


def atom_pair_nuclear_bound(a: complex, b: complex, rho: float) -> float:
    """Upper bound ``(2 rho / (1 - rho)) |a - b|`` on the pair's nuclear distance."""
    if max(abs(a), abs(b)) > rho * (1 + 1e-12):
        raise ValueError("both poles must satisfy |w| <= rho")
    return 2 * rho / (1 - rho) * abs(complex(a) - complex(b))


def norm_chain_ratio(m: AtomicModel, T: int | None = None) -> float:
    """Ratio of Hankel nuclear norm to decomposition weight.

    The upper inequality makes this at most 1. Values below ``pi/8`` only say
    that this particular decomposition is far from the cheapest one.
    """
    w = decomposition_weight(m)
    if w == 0.0:
        return float("nan")
    return hankel_nuclear_norm(build_hankel(m, T)) / w
