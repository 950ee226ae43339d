"""Input validation helpers shared by metrics and estimators."""

from __future__ import annotations

import numpy as np


def as_vector_pair(y_true, y_pred, min_len: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Coerce two 1-D float vectors of equal length, checking finiteness."""
    a = np.asarray(y_true, dtype=np.float64).ravel()
    b = np.asarray(y_pred, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] < min_len:
        raise ValueError(f"need at least {min_len} element(s), got {a.shape[0]}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("inputs must be finite")
    return a, b


def as_feature_matrix(X, n_features: int | None = None) -> np.ndarray:
    """Coerce a finite 2-D float64 matrix, optionally pinning the column count."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D array, got ndim={X.ndim}")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} feature column(s), got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature matrix must be finite")
    return X
