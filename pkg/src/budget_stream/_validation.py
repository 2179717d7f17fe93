"""Input validation helpers shared by the estimators and the harness."""

from __future__ import annotations

import numpy as np


def as_float_matrix(X, *, allow_nan: bool = False, name: str = "X") -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if not allow_nan and not np.isfinite(X).all():
        raise ValueError(f"{name} contains non-finite values")
    if allow_nan and np.isinf(X).any():
        raise ValueError(f"{name} contains infinite values")
    return X


def as_label_vector(y, *, n_rows: int | None = None, name: str = "y") -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {y.shape}")
    if n_rows is not None and len(y) != n_rows:
        raise ValueError(f"{name} has {len(y)} entries, expected {n_rows}")
    return y


def check_fraction(value: float, name: str, *, closed_top: bool = True) -> float:
    top_ok = value <= 1.0 if closed_top else value < 1.0
    if not (0.0 < value and top_ok):
        bound = "(0, 1]" if closed_top else "(0, 1)"
        raise ValueError(f"{name} must be in {bound}, got {value}")
    return value
