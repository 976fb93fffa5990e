"""Argument checks shared by the estimators and the functional API."""
from __future__ import annotations

import numbers

import numpy as np


def check_rho(rho) -> float:
    """Stability radius must be a real number in (0, 1)."""
    if not isinstance(rho, numbers.Real) or isinstance(rho, bool):
        raise TypeError(f"rho must be a real number, got {type(rho).__name__}")
    rho = float(rho)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return rho


def check_unit_interval(value, name: str) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return value


def check_positive(value, name: str, strict: bool = True) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0.0 or (strict and value == 0.0):
        bound = "> 0" if strict else ">= 0"
        raise ValueError(f"{name} must be {bound}, got {value}")
    return value


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_complex_vector(y, name: str = "y", length: int | None = None) -> np.ndarray:
    """1-D finite complex array, optionally of a given length."""
    y = np.asarray(y)
    if y.ndim == 2 and 1 in y.shape:
        y = y.ravel()
    if y.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {y.shape}")
    y = y.astype(complex, copy=False)
    if not np.all(np.isfinite(y)):
        raise ValueError(f"{name} contains non-finite values")
    if length is not None and y.size != length:
        raise ValueError(f"{name} has length {y.size}, expected {length}")
    return y


def check_real_vector(u, name: str = "u", min_length: int = 1) -> np.ndarray:
    u = np.asarray(u)
    if np.iscomplexobj(u):
        if np.any(u.imag != 0):
            raise ValueError(f"{name} must be real-valued")
        u = u.real
    u = np.asarray(u, dtype=float).ravel()
    if u.size < min_length:
        raise ValueError(f"{name} must have at least {min_length} samples, got {u.size}")
    if not np.all(np.isfinite(u)):
        raise ValueError(f"{name} contains non-finite values")
    return u
