"""Held-out metrics in physical units (S/m) and parity data.

All metrics are computed on denormalized predictions.  The deviation
statistic is the population standard deviation (divide by N) of the signed
deviations ``y_true - y_pred`` around their arithmetic mean, so it measures
scatter and is blind to a constant bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import as_vector_pair


def aae(y_true, y_pred) -> float:
    """Average absolute error: mean of |true - predicted|."""
    a, b = as_vector_pair(y_true, y_pred)
    return float(np.mean(np.abs(a - b)))


def stdev_of_deviation(y_true, y_pred) -> float:
    """Population standard deviation of the signed deviations true - pred."""
    a, b = as_vector_pair(y_true, y_pred, min_len=2)
    deviation = a - b
    return float(np.sqrt(np.mean((deviation - deviation.mean()) ** 2)))


def rmse(y_true, y_pred) -> float:
    """Root mean squared error, for reporting alongside AAE and StDev."""
    a, b = as_vector_pair(y_true, y_pred)
    return float(np.sqrt(np.mean((a - b) ** 2)))


@dataclass
class EvalReport:
    """Metrics in S/m plus the (true, predicted) parity pairs, input order."""

    aae: float
    stdev_of_deviation: float
    rmse: float
    n: int
    parity: list[tuple[float, float]]


def evaluate(model, X, y_true) -> EvalReport:
    """Score a trained model on raw-unit features and conductivities.

    ``model`` is anything with a ``predict(X) -> S/m`` method (a ModelBundle
    or the sklearn estimator).  Requires at least 2 samples for the deviation
    statistic.
    """
    y_true = np.asarray(y_true, dtype=np.float64).ravel()
    y_pred = np.asarray(model.predict(X), dtype=np.float64).ravel()
    return EvalReport(
        aae=aae(y_true, y_pred),
        stdev_of_deviation=stdev_of_deviation(y_true, y_pred),
        rmse=rmse(y_true, y_pred),
        n=int(y_true.shape[0]),
        parity=[(float(t), float(p)) for t, p in zip(y_true, y_pred)],
    )
