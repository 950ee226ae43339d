"""Min-max feature scaling with an exact inverse transform."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError


class MinMaxRangeScaler(BaseEstimator, TransformerMixin):
    """Affine per-column rescaling of [min, max] onto a target range.

    Each column is mapped by ``x' = lo + (x - min) * (hi - lo) / (max - min)``
    and ``inverse_transform`` applies the exact inverse, so round trips are
    identity to within float rounding.  A constant column (max == min) maps
    to the midpoint of the target range and inverts back to that constant.

    The map is applied as a global affine function: values outside the fitted
    [min, max] scale past the target range rather than clipping.
    """

    def __init__(self, feature_range: tuple[float, float] = (0.0, 1.0)):
        self.feature_range = feature_range

    def fit(self, X, y=None) -> "MinMaxRangeScaler":
        lo, hi = self.feature_range
        if not lo < hi:
            raise ValueError(f"feature_range must satisfy lo < hi, got {self.feature_range!r}")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] == 0:
            raise ValueError(f"expected a non-empty 2-D array, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("cannot fit scaler on non-finite values")
        self.data_min_ = X.min(axis=0)
        self.data_max_ = X.max(axis=0)
        self.n_features_in_ = X.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "data_min_"):
            raise NotFittedError("MinMaxRangeScaler is not fitted yet")

    def _check_shape(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected shape (n, {self.n_features_in_}), got {X.shape}")
        return X

    def transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = self._check_shape(X)
        lo, hi = self.feature_range
        span = self.data_max_ - self.data_min_
        constant = span == 0
        safe_span = np.where(constant, 1.0, span)
        out = lo + (X - self.data_min_) * (hi - lo) / safe_span
        out[:, constant] = 0.5 * (lo + hi)
        return out

    def inverse_transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = self._check_shape(X)
        lo, hi = self.feature_range
        span = self.data_max_ - self.data_min_
        constant = span == 0
        safe_span = np.where(constant, 1.0, span)
        out = self.data_min_ + (X - lo) * safe_span / (hi - lo)
        out[:, constant] = self.data_min_[constant]
        return out
