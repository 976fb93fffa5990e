"""Single-pole atoms and finite atomic models.

An atom is the strictly proper transfer function

    phi_w(z) = (1 - |w|^2) / (z - w),     |w| < 1,

scaled so that its Hankel operator has unit nuclear norm. An
:class:`AtomicModel` is a finite linear combination ``sum_j c_j phi_{w_j}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from ._validation import check_rho

__all__ = [
    "AtomicModel",
    "eval_atom",
    "atom_impulse_response",
    "eval_model",
    "h2_inner",
    "h2_gram",
    "model_h2_norm",
    "decomposition_weight",
    "impulse_length",
    "random_model",
    "coefficient_vector",
    "IndefiniteGramError",
]

MERGE_TOL = 1e-12
GRAM_INDEFINITE_TOL = 1e-9


class IndefiniteGramError(ArithmeticError):
    """The H2 Gram matrix of a model is numerically indefinite."""


def impulse_length(rho: float, tol: float = 1e-9) -> int:
    """Truncation length K with ``rho**K <= tol``."""
    if rho <= 0.0:
        return 1
    return max(1, math.ceil(math.log(tol) / math.log(rho)))


def _check_on_or_outside_circle(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) < 1.0 - 1e-15):
        raise ValueError("atoms are only evaluated on or outside the unit circle (|z| >= 1)")
    return z


def eval_atom(a: complex, z):
    """Evaluate ``phi_a(z) = (1 - |a|^2) / (z - a)``.

    ``z`` may be a scalar or an array; all entries must satisfy ``|z| >= 1``.
    """
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError(f"pole must lie in the open unit disk, got |a|={abs(a)}")
    zz = _check_on_or_outside_circle(z)
    out = (1.0 - abs(a) ** 2) / (zz - a)
    return complex(out) if out.ndim == 0 else out


def atom_impulse_response(a: complex, K: int) -> np.ndarray:
    """Markov parameters ``g_k = (1 - |a|^2) a^(k-1)`` for ``k = 1..K``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    a = complex(a)
    return (1.0 - abs(a) ** 2) * a ** np.arange(K)


def h2_inner(a: complex, b: complex) -> complex:
    """H2 inner product ``<phi_a, phi_b>`` (linear in the first slot)."""
    a, b = complex(a), complex(b)
    return (1.0 - abs(a) ** 2) * (1.0 - abs(b) ** 2) / (1.0 - a * b.conjugate())


def h2_gram(poles) -> np.ndarray:
    """Gram matrix ``G[j, k] = h2_inner(poles[j], poles[k])``."""
    w = np.asarray(poles, dtype=complex)
    s = 1.0 - np.abs(w) ** 2
    return np.outer(s, s) / (1.0 - np.outer(w, w.conj()))


def _merge_terms(poles: np.ndarray, coeffs: np.ndarray, tol: float):
    """Merge poles closer than ``tol``, keeping first-appearance order."""
    if poles.size < 2:
        return poles, coeffs
    pairs = cKDTree(np.column_stack([poles.real, poles.imag])).query_pairs(tol, output_type="ndarray")
    if pairs.size == 0:
        return poles, coeffs
    # union-find over close pairs; the representative is the smallest index
    parent = np.arange(poles.size)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(poles.size)])
    keep = np.unique(roots)
    merged = np.zeros(keep.size, complex)
    np.add.at(merged, np.searchsorted(keep, roots), coeffs)
    return poles[keep].copy(), merged


@dataclass(frozen=True, eq=False)
class AtomicModel:
    """Finite sum of single-pole atoms ``G(z) = sum_j c_j phi_{w_j}(z)``.

    Parameters
    ----------
    poles, coeffs : array_like of complex
        Pole locations and coefficients, same length. Poles closer than
        ``1e-12`` are merged by summing their coefficients.
    rho : float
        Stability radius; every pole must satisfy ``|w| <= rho < 1``.
    real_system : bool
        Require the terms to be closed under complex conjugation, so that
        ``G`` has real Markov parameters.
    """

    poles: np.ndarray
    coeffs: np.ndarray
    rho: float
    real_system: bool = False

    def __post_init__(self):
        rho = check_rho(self.rho)
        p = np.atleast_1d(np.asarray(self.poles, dtype=complex)).ravel()
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).ravel()
        if p.shape != c.shape:
            raise ValueError(f"poles and coeffs differ in length: {p.size} != {c.size}")
        if np.any(~np.isfinite(p)) or np.any(~np.isfinite(c)):
            raise ValueError("poles and coefficients must be finite")
        if p.size and np.max(np.abs(p)) > rho * (1.0 + 1e-12):
            raise ValueError(
                f"pole modulus {np.max(np.abs(p)):.6g} exceeds stability radius {rho}"
            )
        p, c = _merge_terms(p, c, MERGE_TOL)
        if self.real_system:
            _check_conjugate_closed(p, c)
        p.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "poles", p)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "rho", rho)

    # -- construction helpers ------------------------------------------------
    @classmethod
    def empty(cls, rho: float = 0.5) -> "AtomicModel":
        return cls(np.zeros(0, complex), np.zeros(0, complex), rho)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, complex]], rho: float,
                   real_system: bool = False) -> "AtomicModel":
        terms = list(terms)
        poles = [t[0] for t in terms]
        coeffs = [t[1] for t in terms]
        return cls(np.array(poles, complex), np.array(coeffs, complex), rho, real_system)

    @classmethod
    def conjugate_pair(cls, pole: complex, coeff: complex, rho: float) -> "AtomicModel":
        """Real model ``c phi_w + conj(c) phi_conj(w)``."""
        pole, coeff = complex(pole), complex(coeff)
        if pole.imag == 0.0:
            return cls.from_terms([(pole, 2 * coeff.real)], rho, real_system=True)
        return cls.from_terms(
            [(pole, coeff), (pole.conjugate(), coeff.conjugate())], rho, real_system=True
        )

    # -- algebra ----------------------------------------------------------------
    def __len__(self) -> int:
        return self.poles.size

    @property
    def terms(self) -> list[tuple[complex, complex]]:
        return [(complex(w), complex(c)) for w, c in zip(self.poles, self.coeffs)]

    def __add__(self, other: "AtomicModel") -> "AtomicModel":
        if not isinstance(other, AtomicModel):
            return NotImplemented
        return AtomicModel(
            np.concatenate([self.poles, other.poles]),
            np.concatenate([self.coeffs, other.coeffs]),
            max(self.rho, other.rho),
            self.real_system and other.real_system,
        )

    def __mul__(self, alpha) -> "AtomicModel":
        alpha = complex(alpha)
        real = self.real_system and alpha.imag == 0.0
        return AtomicModel(self.poles, alpha * self.coeffs, self.rho, real)

    __rmul__ = __mul__

    def __neg__(self) -> "AtomicModel":
        return self * -1.0

    def __sub__(self, other: "AtomicModel") -> "AtomicModel":
        if not isinstance(other, AtomicModel):
            return NotImplemented
        return self + (-other)

    def with_rho(self, rho: float) -> "AtomicModel":
        return AtomicModel(self.poles, self.coeffs, rho, self.real_system)

    # -- evaluation -------------------------------------------------------------
    def __call__(self, z):
        return eval_model(self, z)

    def impulse_response(self, K: int | None = None, tol: float = 1e-9) -> np.ndarray:
        """Markov parameters ``g_1..g_K`` of the model."""
        if K is None:
            K = impulse_length(self.rho, tol)
        if K < 1:
            raise ValueError("K must be >= 1")
        if len(self) == 0:
            return np.zeros(K, complex)
        scale = self.coeffs * (1.0 - np.abs(self.poles) ** 2)
        powers = self.poles[None, :] ** np.arange(K)[:, None]
        return powers @ scale

    # -- serialization ----------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "rho": float(self.rho),
            "real_system": bool(self.real_system),
            "terms": [
                {"re": w.real, "im": w.imag, "cre": c.real, "cim": c.imag}
                for w, c in self.terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "AtomicModel":
        terms = data.get("terms", [])
        poles = np.array([complex(t["re"], t["im"]) for t in terms], complex)
        coeffs = np.array([complex(t["cre"], t["cim"]) for t in terms], complex)
        return cls(poles, coeffs, float(data["rho"]), bool(data.get("real_system", False)))

    @classmethod
    def from_json(cls, text: str) -> "AtomicModel":
        return cls.from_dict(json.loads(text))


def _check_conjugate_closed(poles: np.ndarray, coeffs: np.ndarray, tol: float = 1e-10):
    for w, c in zip(poles, coeffs):
        if w.imag == 0.0:
            if abs(c.imag) > tol * max(1.0, abs(c)):
                raise ValueError("real_system model has a complex coefficient on a real pole")
            continue
        match = np.flatnonzero(np.abs(poles - w.conjugate()) < MERGE_TOL)
        if match.size != 1 or abs(coeffs[match[0]] - c.conjugate()) > tol * max(1.0, abs(c)):
            raise ValueError(f"real_system model is not closed under conjugation at pole {w}")


def eval_model(m: AtomicModel, z):
    """Evaluate ``sum_j c_j phi_{w_j}(z)`` at scalar or array ``z`` (|z| >= 1)."""
    zz = _check_on_or_outside_circle(z)
    if len(m) == 0:
        out = np.zeros(zz.shape, complex)
    else:
        scale = m.coeffs * (1.0 - np.abs(m.poles) ** 2)
        out = (scale / (zz[..., None] - m.poles)).sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def model_h2_norm(m: AtomicModel) -> float:
    """Closed-form H2 norm ``sqrt(c^H Gram c)``."""
    if len(m) == 0:
        return 0.0
    gram = h2_gram(m.poles)
    c = m.coeffs
    sq = float(np.real(np.vdot(c, gram.T @ c)))
    scale = float(np.real(np.abs(c) @ np.abs(gram) @ np.abs(c)))
    if sq < -GRAM_INDEFINITE_TOL * max(scale, 1e-300):
        raise IndefiniteGramError(
            f"H2 Gram form is negative ({sq:.3e}); the model likely has near-duplicate poles"
        )
    return math.sqrt(max(sq, 0.0))


def decomposition_weight(m: AtomicModel) -> float:
    """Total coefficient mass ``sum |c_w|``, an upper bound on the atomic norm."""
    return float(np.abs(m.coeffs).sum())


def random_model(rng: np.random.Generator, n_atoms: int, rho: float,
                 real_system: bool = False, min_sep: float = 0.0,
                 max_tries: int = 10_000) -> AtomicModel:
    """Random model with poles uniform in the disk of radius ``rho``.

    With ``real_system`` each drawn pole brings its conjugate along, so the
    model holds up to ``2 * n_atoms`` terms. ``min_sep`` bounds the distance
    between any two poles (conjugates included) from below.
    """
    drawn: list[complex] = []
    placed: list[complex] = []
    tries = 0
    while len(drawn) < n_atoms:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("could not place poles with the requested separation")
        w = rho * math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        new = [w, w.conjugate()] if real_system else [w]
        if real_system and 2 * abs(w.imag) < min_sep:
            continue
        if min_sep and any(abs(p - q) < min_sep for p in new for q in placed):
            continue
        drawn.append(w)
        placed.extend(new)
    coeffs = rng.normal(size=n_atoms) + 1j * rng.normal(size=n_atoms)
    if not real_system:
        return AtomicModel(np.array(drawn), coeffs, rho)
    poles = np.concatenate([drawn, np.conj(drawn)])
    return AtomicModel(poles, np.concatenate([coeffs, coeffs.conj()]), rho, real_system=True)


def coefficient_vector(m: AtomicModel, points: Sequence[complex], tol: float = MERGE_TOL) -> np.ndarray:
    """Coefficients of ``m`` laid out on a given pole list.

    Raises ``ValueError`` if a pole of ``m`` is not among ``points``.
    """
    pts = np.asarray(points, complex)
    c = np.zeros(pts.size, complex)
    for w, coef in zip(m.poles, m.coeffs):
        d = np.abs(pts - w)
        j = int(np.argmin(d))
        if d[j] > tol:
            raise ValueError(f"pole {w} is not on the given grid")
        c[j] += coef
    return c
