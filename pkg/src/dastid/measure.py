"""Linear measurement ensembles and the DAST measurement matrix.

Three families of functionals ``L_i`` are supported:

* frequency samples ``L_i(G) = G(exp(i theta_i))``,
* impulse-response samples ``L_i(G) = g_{k_i}``,
* convolutions with a known input ``L_t(G) = sum_{j=1}^{K} g_j u_{t-j}``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._validation import check_complex_vector, check_positive, check_positive_int, check_real_vector
from .atoms import AtomicModel, eval_model
from .net import EpsilonNet

KINDS = ("frequency_uniform", "frequency_list", "impulse", "convolution")
DEFAULT_MAX_ENTRIES = 200_000_000


class MatrixSizeError(ValueError):
    """The measurement matrix would exceed the configured entry cap."""


@dataclass(frozen=True, eq=False)
class MeasurementPlan:
    """Declarative description of ``n`` linear functionals.

    Use the constructors :meth:`frequency_uniform`, :meth:`frequency_list`,
    :meth:`impulse` and :meth:`convolution` rather than the raw fields.
    """

    kind: str
    n_uniform: int | None = None
    thetas: np.ndarray | None = None
    indices: np.ndarray | None = None
    u: np.ndarray | None = None
    times: np.ndarray | None = None
    K: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plan kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "frequency_uniform":
            check_positive_int(self.n_uniform, "n")
        elif self.kind == "frequency_list":
            th = check_real_vector(self.thetas, "thetas")
            object.__setattr__(self, "thetas", th)
        elif self.kind == "impulse":
            idx = np.asarray(self.indices).ravel()
            if idx.size == 0 or np.any(idx != np.round(idx)) or np.any(idx < 1):
                raise ValueError("impulse indices must be integers >= 1")
            object.__setattr__(self, "indices", idx.astype(np.int64))
        else:
            u = check_real_vector(self.u, "u")
            times = np.asarray(self.times).ravel()
            if times.size == 0 or np.any(times != np.round(times)) or np.any(times < 0):
                raise ValueError("convolution output times must be integers >= 0")
            times = times.astype(np.int64)
            K = check_positive_int(self.K, "K")
            if K < times.max():
                raise ValueError(f"truncation K={K} is below the largest output time {times.max()}")
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "times", times)
            object.__setattr__(self, "K", K)

    # -- constructors -----------------------------------------------------------
    @classmethod
    def frequency_uniform(cls, n: int) -> "MeasurementPlan":
        """Samples at ``theta_k = 2 pi k / n`` for ``k = 1..n``."""
        return cls("frequency_uniform", n_uniform=n)

    @classmethod
    def frequency_list(cls, thetas) -> "MeasurementPlan":
        return cls("frequency_list", thetas=np.asarray(thetas, float))

    @classmethod
    def impulse(cls, indices) -> "MeasurementPlan":
        return cls("impulse", indices=np.asarray(indices))

    @classmethod
    def convolution(cls, u, times=None, K: int | None = None) -> "MeasurementPlan":
        """Outputs ``y_t = sum_{j=1}^{K} g_j u_{t-j}``; ``u`` is zero before index 0.

        Defaults: ``times = 0..len(u)-1`` and ``K = max(times)``, which makes
        the functionals exact for zero initial state.
        """
        u = np.asarray(u, float)
        times = np.arange(u.size) if times is None else np.asarray(times)
        if K is None:
            K = max(1, int(np.max(times)))
        return cls("convolution", u=u, times=times, K=K)

    # -- properties -------------------------------------------------------------
    @property
    def n(self) -> int:
        if self.kind == "frequency_uniform":
            return self.n_uniform
        if self.kind == "frequency_list":
            return self.thetas.size
        if self.kind == "impulse":
            return self.indices.size
        return self.times.size

    @property
    def is_frequency(self) -> bool:
        return self.kind.startswith("frequency")

    @property
    def is_complex(self) -> bool:
        """Whether observations are complex-valued (frequency samples)."""
        return self.is_frequency

    def frequencies(self) -> np.ndarray:
        if self.kind == "frequency_uniform":
            return 2 * np.pi * np.arange(1, self.n_uniform + 1) / self.n_uniform
        if self.kind == "frequency_list":
            return self.thetas
        raise AttributeError(f"{self.kind} plans have no frequencies")

    def points(self) -> np.ndarray:
        """Unit-circle evaluation points of a frequency plan."""
        return np.exp(1j * self.frequencies())

    def _input_toeplitz(self) -> np.ndarray:
        """``U[i, j-1] = u_{t_i - j}`` for ``j = 1..K`` (zero before the input starts)."""
        if "toeplitz" not in self._cache:
            lags = self.times[:, None] - np.arange(1, self.K + 1)[None, :]
            valid = (lags >= 0) & (lags < self.u.size)
            U = np.where(valid, self.u[np.clip(lags, 0, self.u.size - 1)], 0.0)
            self._cache["toeplitz"] = U
        return self._cache["toeplitz"]

    # -- serialization ----------------------------------------------------------
    def to_dict(self) -> dict:
        if self.kind == "frequency_uniform":
            return {"kind": self.kind, "n": self.n_uniform}
        if self.kind == "frequency_list":
            return {"kind": self.kind, "thetas": self.thetas.tolist()}
        if self.kind == "impulse":
            return {"kind": self.kind, "indices": self.indices.tolist()}
        return {"kind": self.kind, "u": self.u.tolist(), "times": self.times.tolist(), "K": self.K}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MeasurementPlan":
        kind = data["kind"]
        if kind == "frequency_uniform":
            return cls.frequency_uniform(int(data["n"]))
        if kind == "frequency_list":
            return cls.frequency_list(data["thetas"])
        if kind == "impulse":
            return cls.impulse(data["indices"])
        if kind == "convolution":
            return cls.convolution(data["u"], data.get("times"), data.get("K"))
        raise ValueError(f"unknown plan kind {kind!r}")

    @classmethod
    def from_json(cls, text: str) -> "MeasurementPlan":
        return cls.from_dict(json.loads(text))


def _impulse_matrix(poles: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """``(1 - |w_j|^2) w_j^(k_i - 1)`` for each index ``k_i`` and pole ``w_j``."""
    return (1 - np.abs(poles) ** 2)[None, :] * poles[None, :] ** (ks[:, None] - 1)


def apply_plan(plan: MeasurementPlan, m: AtomicModel) -> np.ndarray:
    """Noiseless observations ``L_i(G)`` of an atomic model."""
    if plan.is_frequency:
        return np.asarray(eval_model(m, plan.points()), complex)
    if len(m) == 0:
        return np.zeros(plan.n, complex)
    if plan.kind == "impulse":
        return _impulse_matrix(m.poles, plan.indices) @ m.coeffs
    g = m.impulse_response(plan.K)
    return plan._input_toeplitz() @ g


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    """``entries[i, j] = L_i(phi_{w_j})`` for the points ``w_j`` of a net."""

    entries: np.ndarray
    plan: MeasurementPlan
    net: EpsilonNet

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __matmul__(self, c):
        return self.entries @ c

    def numerical_rank(self, rtol: float = 1e-10) -> int:
        s = scipy.linalg.svdvals(self.entries)
        return int(np.count_nonzero(s > rtol * s[0])) if s.size and s[0] > 0 else 0


def measurement_columns(plan: MeasurementPlan, poles) -> np.ndarray:
    """Columns ``L(phi_w)`` for an arbitrary list of poles."""
    poles = np.asarray(poles, complex).ravel()
    if plan.is_frequency:
        z = plan.points()
        return (1 - np.abs(poles) ** 2)[None, :] / (z[:, None] - poles[None, :])
    if plan.kind == "impulse":
        return _impulse_matrix(poles, plan.indices)
    G = _impulse_matrix(poles, np.arange(1, plan.K + 1))
    return plan._input_toeplitz() @ G


def build_matrix(plan: MeasurementPlan, net: EpsilonNet,
                 max_entries: int = DEFAULT_MAX_ENTRIES) -> MeasurementMatrix:
    """Dense ``n x |net|`` matrix of measured atoms."""
    size = plan.n * len(net)
    if plan.kind == "convolution":
        size = max(size, plan.K * len(net))
    if size > max_entries:
        raise MatrixSizeError(f"measurement matrix needs {size} entries (cap {max_entries})")
    M = measurement_columns(plan, net.points)
    M.setflags(write=False)
    return MeasurementMatrix(M, plan, net)


def add_noise(y, sigma: float, rng_seed=None, complex_noise: bool | None = None) -> np.ndarray:
    """Add i.i.d. zero-mean Gaussian noise with ``E|w_i|^2 = sigma^2``.

    Complex data get independent real and imaginary parts of variance
    ``sigma^2 / 2`` each; real data get real noise of variance ``sigma^2``.
    ``complex_noise`` overrides the choice inferred from the dtype of ``y``.
    """
    sigma = check_positive(sigma, "sigma", strict=False)
    y = np.asarray(y)
    if complex_noise is None:
        complex_noise = np.iscomplexobj(y)
    rng = np.random.default_rng(rng_seed)
    if complex_noise:
        w = (rng.standard_normal(y.size) + 1j * rng.standard_normal(y.size)) * (sigma / np.sqrt(2))
        return y.astype(complex) + w.reshape(y.shape)
    return y + sigma * rng.standard_normal(y.size).reshape(y.shape)


def observations_to_csv(y) -> str:
    """CSV text with header ``index,re,im``."""
    y = check_complex_vector(y)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "re", "im"])
    for i, v in enumerate(y.tolist()):
        writer.writerow([i, repr(v.real), repr(v.imag)])
    return buf.getvalue()


def observations_from_csv(text: str) -> np.ndarray:
    rows = list(csv.DictReader(io.StringIO(text)))
    rows.sort(key=lambda r: int(r["index"]))
    return np.array([complex(float(r["re"]), float(r["im"])) for r in rows], complex)
