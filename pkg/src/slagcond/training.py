"""Loss, exact gradients, Adam updates, the epoch loop, and width sweeps.

The training objective is the batch root-mean-squared error.  Its gradient
with respect to a prediction is ``(pred - true) / (N * max(rmse, 1e-12))``;
the guard keeps the zero-error batch a true stationary point instead of a
division by zero.  The ReLU gate passes gradient only where the hidden
pre-activation is strictly positive (subgradient 0 at the kink).
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import evaluation
from .data import Dataset, remove_outliers, split
from .errors import NumericError
from .model_io import ModelBundle
from .network import Network, check_min_width, forward_batch, glorot_uniform_init
from .rng import STREAM_BATCHES, seeded_rng
from .scaling import MinMaxRangeScaler
from .validation import as_vector_pair

RMSE_GRADIENT_GUARD = 1e-12


def rmse(y_true, y_pred) -> float:
    """Root mean squared error between two equal-length vectors."""
    a, b = as_vector_pair(y_true, y_pred)
    return float(np.sqrt(np.mean((a - b) ** 2)))


def backward(net: Network, X: np.ndarray, y_true: np.ndarray) -> tuple[float, dict[str, np.ndarray]]:
    """Batch RMSE and its exact gradients w.r.t. all four parameter tensors."""
    X = np.asarray(X, dtype=np.float64)
    y_true = np.asarray(y_true, dtype=np.float64).ravel()
    n = X.shape[0]
    if n == 0:
        raise ValueError("batch must be non-empty")
    if y_true.shape[0] != n:
        raise ValueError(f"batch size mismatch: {n} inputs vs {y_true.shape[0]} targets")

    with np.errstate(over="ignore", invalid="ignore"):
        y_pred, hidden_pre, hidden_post = forward_batch(net, X)
        diff = y_pred - y_true
        loss = float(np.sqrt(np.mean(diff**2)))

        dy = diff / (n * max(loss, RMSE_GRADIENT_GUARD))  # (N,)
        grad_w2 = (dy @ hidden_post)[None, :]
        grad_b2 = np.array([dy.sum()])
        d_hidden = np.outer(dy, net.w2[0]) * (hidden_pre > 0)
        grad_w1 = d_hidden.T @ X
        grad_b1 = d_hidden.sum(axis=0)

    grads = {"w1": grad_w1, "b1": grad_b1, "w2": grad_w2, "b2": grad_b2}
    if not math.isfinite(loss) or any(not np.all(np.isfinite(g)) for g in grads.values()):
        raise NumericError("non-finite gradient")
    return loss, grads


@dataclass
class AdamState:
    """First/second moment accumulators plus the shared step counter."""

    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    t: int = 0
    alpha: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def zeros_like(cls, params: dict[str, np.ndarray], **hyper) -> "AdamState":
        return cls(
            m={k: np.zeros_like(np.asarray(p, dtype=np.float64)) for k, p in params.items()},
            v={k: np.zeros_like(np.asarray(p, dtype=np.float64)) for k, p in params.items()},
            **hyper,
        )


def adam_step(
    state: AdamState,
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
) -> tuple[dict[str, np.ndarray], AdamState]:
    """One Adam update; inputs are left untouched, fresh tensors returned.

    Moments: m <- b1*m + (1-b1)*g and v <- b2*v + (1-b2)*g^2, bias-corrected
    by (1 - b^t), then theta <- theta - alpha * m_hat / (sqrt(v_hat) + eps).
    """
    if params.keys() != state.m.keys():
        raise ValueError("parameter names do not match optimizer state")
    t = state.t + 1
    new_params, new_m, new_v = {}, {}, {}
    for k, theta in params.items():
        g = np.asarray(grads[k], dtype=np.float64)
        if g.shape != np.shape(theta):
            raise ValueError(f"gradient shape {g.shape} does not match parameter {k}")
        m = state.beta1 * state.m[k] + (1.0 - state.beta1) * g
        v = state.beta2 * state.v[k] + (1.0 - state.beta2) * g**2
        m_hat = m / (1.0 - state.beta1**t)
        v_hat = v / (1.0 - state.beta2**t)
        new_params[k] = theta - state.alpha * m_hat / (np.sqrt(v_hat) + state.epsilon)
        new_m[k], new_v[k] = m, v
    new_state = AdamState(
        m=new_m, v=new_v, t=t,
        alpha=state.alpha, beta1=state.beta1, beta2=state.beta2, epsilon=state.epsilon,
    )
    return new_params, new_state


@dataclass
class TrainConfig:
    """Hyperparameters for one training run.

    Defaults follow the standard Adam settings (alpha 0.001, beta1 0.9,
    beta2 0.999, eps 1e-8) with batch size 32 and 2000 epochs; all of them
    are overridable from the CLI.
    """

    hidden_width: int = 100
    epochs: int = 2000
    batch_size: int = 32
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0
    train_fraction: float = 0.8
    target_range: tuple[float, float] = (0.0, 1.0)

    def validate(self, input_dim: int = 6) -> None:
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if self.learning_rate <= 0 or self.epsilon <= 0:
            raise ValueError("learning_rate and epsilon must be positive")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie in [0, 1)")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        lo, hi = self.target_range
        if not lo < hi:
            raise ValueError("target_range must satisfy lo < hi")
        ok, min_width = check_min_width(input_dim, self.hidden_width)
        if not ok:
            raise ValueError(
                f"hidden width {self.hidden_width} below minimum {min_width} for {input_dim} inputs"
            )


@dataclass
class TrainReport:
    """Per-epoch loss curve plus the held-out metrics of one run."""

    loss_per_epoch: list[tuple[int, float]]
    test_metrics: "evaluation.EvalReport"
    wall_seconds: float
    config: TrainConfig
    n_loaded: int = 0
    n_removed_outliers: int = 0
    n_train: int = 0
    n_test: int = 0


@dataclass
class TrainResult:
    model: ModelBundle
    report: TrainReport
    split_indices: "object" = None


def fit_network(
    X_norm: np.ndarray,
    y_norm: np.ndarray,
    config: TrainConfig,
    rng_batches: np.random.Generator | None = None,
) -> tuple[Network, list[tuple[int, float]]]:
    """Run the Adam epoch loop on normalized arrays.

    Batches are reshuffled every epoch from the run's batch stream; the last
    short batch of an epoch is kept, so the step counter advances by exactly
    ceil(N / batch_size) per epoch.  Records full-training-set RMSE (in
    normalized units) after each epoch.
    """
    n = X_norm.shape[0]
    config.validate(input_dim=X_norm.shape[1])
    if rng_batches is None:
        rng_batches = seeded_rng(config.seed, STREAM_BATCHES)

    net = glorot_uniform_init(X_norm.shape[1], config.hidden_width, 1, rng=config.seed)
    params = net.parameters()
    state = AdamState.zeros_like(
        params,
        alpha=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        epsilon=config.epsilon,
    )

    loss_curve: list[tuple[int, float]] = []
    for epoch in range(1, config.epochs + 1):
        order = rng_batches.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, grads = backward(net, X_norm[batch], y_norm[batch])
            if not math.isfinite(loss):
                raise NumericError(f"non-finite loss at epoch {epoch}")
            new_params, state = adam_step(state, params, grads)
            for name in params:
                params[name][...] = new_params[name]

        y_pred, _, _ = forward_batch(net, X_norm)
        epoch_rmse = float(np.sqrt(np.mean((y_pred - y_norm) ** 2)))
        if not math.isfinite(epoch_rmse):
            raise NumericError(f"non-finite loss at epoch {epoch}")
        loss_curve.append((epoch, epoch_rmse))

    return net, loss_curve


def train(dataset: Dataset, config: TrainConfig) -> TrainResult:
    """Full pipeline: outlier filter, split, scale, fit, evaluate in S/m.

    Deterministic given (dataset contents, config): the split, the weight
    init, and the batch order each consume their own stream of the run seed.
    """
    config.validate()
    started = time.perf_counter()

    filtered, removed = remove_outliers(dataset)
    indices = split(filtered, config.train_fraction, config.seed)
    train_set = filtered.subset(indices.train_indices)
    test_set = filtered.subset(indices.test_indices)

    X_train, y_train = train_set.feature_matrix(), train_set.target_vector()
    feature_scaler = MinMaxRangeScaler(config.target_range).fit(X_train)
    target_scaler = MinMaxRangeScaler(config.target_range).fit(y_train[:, None])

    net, loss_curve = fit_network(
        feature_scaler.transform(X_train),
        target_scaler.transform(y_train[:, None])[:, 0],
        config,
    )

    bundle = ModelBundle(
        network=net,
        feature_scaler=feature_scaler,
        target_scaler=target_scaler,
        seed=config.seed,
        train_fraction=config.train_fraction,
    )
    test_report = evaluation.evaluate(bundle, test_set.feature_matrix(), test_set.target_vector())

    report = TrainReport(
        loss_per_epoch=loss_curve,
        test_metrics=test_report,
        wall_seconds=time.perf_counter() - started,
        config=config,
        n_loaded=len(dataset),
        n_removed_outliers=removed,
        n_train=len(train_set),
        n_test=len(test_set),
    )
    return TrainResult(model=bundle, report=report, split_indices=indices)


@dataclass
class SweepResult:
    table: list[tuple[int, float]]  # (width, test AAE in S/m) per trained width
    best_width: int
    best: TrainResult


def sweep(dataset: Dataset, widths: list[int], base_config: TrainConfig) -> SweepResult:
    """Train one network per hidden width and pick the lowest test AAE.

    Every run shares the seed, so all widths see identical data partitions.
    Ties are broken toward the smaller width.  Duplicate widths are trained
    once (a warning is emitted).
    """
    if not widths:
        raise ValueError("width list is empty")
    deduped: list[int] = []
    for w in widths:
        if w in deduped:
            warnings.warn(f"duplicate width {w} ignored", stacklevel=2)
        else:
            deduped.append(w)
    for w in deduped:
        ok, min_width = check_min_width(6, w)
        if not ok:
            raise ValueError(f"hidden width {w} below minimum {min_width} for 6 inputs")

    results: dict[int, TrainResult] = {}
    table: list[tuple[int, float]] = []
    for w in deduped:
        result = train(dataset, replace(base_config, hidden_width=w))
        results[w] = result
        table.append((w, result.report.test_metrics.aae))

    best_width, _ = min(table, key=lambda row: (row[1], row[0]))
    return SweepResult(table=table, best_width=best_width, best=results[best_width])
