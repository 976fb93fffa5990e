"""Epsilon-nets of the closed disk ``|w| <= rho`` and their covering constants."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ._validation import check_positive, check_rho

DEFAULT_MAX_POINTS = 1_000_000


class NetSizeError(ValueError):
    """The requested net would exceed the configured point cap."""


@dataclass(frozen=True, eq=False)
class EpsilonNet:
    """Finite pole set covering the disk of radius ``rho`` to resolution ``eps``.

    ``points`` is closed under complex conjugation. When
    ``covering_certified`` is set, every ``|w| <= rho`` lies within ``eps``
    of some point, by the geometry of the construction.
    """

    rho: float
    eps: float
    points: np.ndarray
    covering_certified: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        if pts.size == 0:
            raise ValueError("a net needs at least one point")
        if np.max(np.abs(pts)) > self.rho * (1 + 1e-12):
            raise ValueError("net points must satisfy |p| <= rho")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size

    def conjugate_index(self, tol: float = 1e-12) -> np.ndarray:
        """Index of ``conj(p)`` for each point ``p``; -1 where absent."""
        tree = cKDTree(np.column_stack([self.points.real, self.points.imag]))
        d, idx = tree.query(np.column_stack([self.points.real, -self.points.imag]))
        return np.where(d <= tol, idx, -1)

    def packing_bound(self, delta: float) -> float:
        """Volume bound ``1024 rho^4 / (pi^2 (1-rho)^2 delta^2)`` on net size."""
        return 1024 * self.rho ** 4 / (math.pi ** 2 * (1 - self.rho) ** 2 * delta ** 2)

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "eps": self.eps,
            "covering_certified": self.covering_certified,
            "points": [{"re": p.real, "im": p.imag} for p in self.points.tolist()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "EpsilonNet":
        pts = np.array([complex(p["re"], p["im"]) for p in data["points"]], complex)
        return cls(float(data["rho"]), float(data["eps"]), pts,
                   bool(data.get("covering_certified", False)))

    @classmethod
    def from_json(cls, text: str) -> "EpsilonNet":
        return cls.from_dict(json.loads(text))


def _ring_layout(rho: float, eps: float):
    """Ring radii and per-ring point counts with spacing <= eps/sqrt(2)."""
    h = eps / math.sqrt(2.0)
    n_rings = max(1, math.ceil(rho / h))
    radii = rho * np.arange(n_rings + 1) / n_rings
    counts = np.ones(n_rings + 1, dtype=np.int64)
    counts[1:] = np.maximum(1, np.ceil(2 * np.pi * radii[1:] / h)).astype(np.int64)
    return radii, counts


def net_cardinality(rho: float, eps: float) -> int:
    """Number of points :func:`build_net` would produce, without building it."""
    rho = check_rho(rho)
    eps = check_positive(eps, "eps")
    if eps >= rho:
        return 1
    return int(_ring_layout(rho, eps)[1].sum())


def build_net(rho: float, eps: float, max_points: int = DEFAULT_MAX_POINTS) -> EpsilonNet:
    """Polar-ring net of the disk ``|w| <= rho`` with covering radius <= ``eps``.

    Rings sit at radii ``m * rho / M`` (origin and ``rho`` included) and
    carry equally spaced angles ``2 pi k / N_m``. Radial spacing and arc
    spacing are both at most ``eps / sqrt(2)``, which bounds the distance
    from any disk point to its nearest net point by ``eps * sqrt(5/16)``.
    """
    rho = check_rho(rho)
    eps = check_positive(eps, "eps")
    if eps >= rho:
        return EpsilonNet(rho, eps, np.zeros(1, complex), covering_certified=True)
    radii, counts = _ring_layout(rho, eps)
    total = int(counts.sum())
    if total > max_points:
        raise NetSizeError(f"net with eps={eps:.3g} needs {total} points (cap {max_points})")
    chunks = [np.zeros(1, complex)]
    for r, n in zip(radii[1:], counts[1:]):
        # upper half-plane angles, mirrored so the ring is exactly conjugate-closed
        k = np.arange(n // 2 + 1)
        upper = r * np.exp(2j * np.pi * k / n)
        upper[0] = r
        if n % 2 == 0:
            upper[-1] = -r
            lower = np.conj(upper[1:-1][::-1])
        else:
            lower = np.conj(upper[1:][::-1])
        chunks.append(np.concatenate([upper, lower]))
    return EpsilonNet(rho, eps, np.concatenate(chunks), covering_certified=True)


def net_for_cardinality(rho: float, target: int, max_points: int = DEFAULT_MAX_POINTS) -> EpsilonNet:
    """Certified net whose size is as close as possible to ``target``."""
    rho = check_rho(rho)
    if target <= 1:
        return build_net(rho, 2 * rho)
    lo, hi = 1e-6, 2 * rho
    for _ in range(100):
        mid = math.sqrt(lo * hi)
        if net_cardinality(rho, mid) > target:
            lo = mid
        else:
            hi = mid
    n_hi, n_lo = net_cardinality(rho, hi), net_cardinality(rho, lo)
    eps = hi if abs(n_hi - target) <= abs(n_lo - target) else lo
    return build_net(rho, eps, max_points=max_points)


def eps_from_delta(delta: float, rho: float) -> float:
    """Net resolution ``pi (1 - rho) delta / (16 rho)`` tied to a target ``delta``."""
    # delta = 1 is admitted as the degenerate boundary (eps where C_eps hits 0)
    delta = float(delta)
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    rho = check_rho(rho)
    return math.pi * (1 - rho) * delta / (16 * rho)


def covering_constant(rho: float, eps: float) -> float:
    """Lower equivalence constant ``max(0, 1 - 16 rho eps / (pi (1 - rho)))``."""
    rho = check_rho(rho)
    eps = check_positive(eps, "eps", strict=False)
    return max(0.0, 1.0 - 16 * rho * eps / (math.pi * (1 - rho)))


def sample_disk(rho: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from the disk of radius ``rho``."""
    r = rho * np.sqrt(rng.uniform(size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def covering_radius_estimate(net: EpsilonNet, n_samples: int = 100_000, seed=0) -> float:
    """Largest nearest-point distance over uniform random disk samples."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    w = sample_disk(net.rho, n_samples, np.random.default_rng(seed))
    tree = cKDTree(np.column_stack([net.points.real, net.points.imag]))
    d, _ = tree.query(np.column_stack([w.real, w.imag]))
    return float(d.max())
