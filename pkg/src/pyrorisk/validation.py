"""Input validation helpers.

All checks raise :class:`~pyrorisk.errors.DomainError` naming the offending
field, so ingestion bugs fail fast instead of being clamped away.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import DomainError


def check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name}={value} is not finite")
    return value


def check_range(
    name: str,
    value: float,
    lo: float | None = None,
    hi: float | None = None,
) -> float:
    """Validate ``lo <= value <= hi`` (either bound optional)."""
    value = check_finite(name, value)
    if lo is not None and value < lo:
        raise DomainError(f"{name}={value} outside [{lo}, {hi if hi is not None else 'inf'}]")
    if hi is not None and value > hi:
        raise DomainError(f"{name}={value} outside [{lo if lo is not None else '-inf'}, {hi}]")
    return value


def check_int(name: str, value: int, lo: int | None = None, hi: int | None = None) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise DomainError(f"{name}={value!r} is not an integer")
    if lo is not None and value < lo:
        raise DomainError(f"{name}={value} below minimum {lo}")
    if hi is not None and value > hi:
        raise DomainError(f"{name}={value} above maximum {hi}")
    return int(value)


def check_matrix(X, name: str = "X", n_columns: int | None = None) -> np.ndarray:
    """Coerce to a 2-D float64 array with finite entries and at least one row."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DomainError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise DomainError(f"{name} has no rows")
    if not np.isfinite(arr).all():
        raise DomainError(f"{name} contains NaN or infinite entries")
    if n_columns is not None and arr.shape[1] != n_columns:
        raise DomainError(f"{name} has {arr.shape[1]} columns, expected {n_columns}")
    return arr


def check_vector(y, name: str = "y", length: int | None = None) -> np.ndarray:
    arr = np.asarray(y, dtype=np.float64).ravel()
    if arr.size == 0:
        raise DomainError(f"{name} is empty")
    if not np.isfinite(arr).all():
        raise DomainError(f"{name} contains NaN or infinite entries")
    if length is not None and arr.size != length:
        raise DomainError(f"{name} has length {arr.size}, expected {length}")
    return arr


def check_unique_names(names: Sequence[str], what: str) -> tuple[str, ...]:
    names = tuple(str(n) for n in names)
    if len(set(names)) != len(names):
        raise DomainError(f"duplicate {what} names: {names}")
    return names
