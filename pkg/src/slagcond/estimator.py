"""Scikit-learn compatible regressor wrapping the training internals."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .model_io import ModelBundle
from .scaling import MinMaxRangeScaler
from .training import TrainConfig, fit_network
from .validation import as_feature_matrix, as_vector_pair


class ReluMLPRegressor(RegressorMixin, BaseEstimator):
    """Single-hidden-layer ReLU regressor trained with Adam on RMSE loss.

    Features and target are min-max scaled onto ``feature_range`` internally
    (scalers fitted on the data passed to ``fit``), so the estimator consumes
    and predicts raw physical units and composes with sklearn tooling.

    Parameters mirror the CLI defaults: Glorot-uniform init, batch size 32,
    2000 epochs, Adam at learning rate 0.001.  ``random_state`` must be a
    non-negative int; identical seeds give bit-identical fits.

    Attributes after fit: ``network_`` (the raw weight container),
    ``feature_scaler_``, ``target_scaler_``, ``loss_curve_`` (per-epoch
    training RMSE in normalized units), ``n_features_in_``.
    """

    def __init__(
        self,
        hidden_width: int = 100,
        epochs: int = 2000,
        batch_size: int = 32,
        learning_rate: float = 1e-3,
        beta_1: float = 0.9,
        beta_2: float = 0.999,
        epsilon: float = 1e-8,
        feature_range: tuple[float, float] = (0.0, 1.0),
        random_state: int = 0,
    ):
        self.hidden_width = hidden_width
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.beta_1 = beta_1
        self.beta_2 = beta_2
        self.epsilon = epsilon
        self.feature_range = feature_range
        self.random_state = random_state

    def _config(self) -> TrainConfig:
        if not isinstance(self.random_state, (int, np.integer)):
            raise ValueError("random_state must be a non-negative int")
        return TrainConfig(
            hidden_width=self.hidden_width,
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            beta1=self.beta_1,
            beta2=self.beta_2,
            epsilon=self.epsilon,
            seed=int(self.random_state),
            target_range=tuple(self.feature_range),
        )

    def fit(self, X, y) -> "ReluMLPRegressor":
        X = as_feature_matrix(X)
        y, _ = as_vector_pair(y, y)
        if y.shape[0] != X.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
        config = self._config()
        config.validate(input_dim=X.shape[1])

        self.feature_scaler_ = MinMaxRangeScaler(tuple(self.feature_range)).fit(X)
        self.target_scaler_ = MinMaxRangeScaler(tuple(self.feature_range)).fit(y[:, None])
        self.network_, self.loss_curve_ = fit_network(
            self.feature_scaler_.transform(X),
            self.target_scaler_.transform(y[:, None])[:, 0],
            config,
        )
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "network_"):
            raise NotFittedError("ReluMLPRegressor is not fitted yet")
        return self.to_bundle().predict(X)

    def to_bundle(self, train_fraction: float = 0.8) -> ModelBundle:
        """Package the fitted state for serialization or CLI-style prediction."""
        if not hasattr(self, "network_"):
            raise NotFittedError("ReluMLPRegressor is not fitted yet")
        return ModelBundle(
            network=self.network_,
            feature_scaler=self.feature_scaler_,
            target_scaler=self.target_scaler_,
            seed=int(self.random_state),
            train_fraction=train_fraction,
        )
