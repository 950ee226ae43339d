"""Single-hidden-layer ReLU perceptron: topology, init, forward pass.

The architecture is fixed at one ReLU hidden layer and one linear output
neuron.  A hidden layer is only a universal approximator once its width
reaches the input dimension plus one, so ``check_min_width`` gates every
width chosen for training.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericError
from .rng import STREAM_INIT, seeded_rng


class WidthCheck(NamedTuple):
    ok: bool
    min_width: int


def check_min_width(input_dim: int, hidden_width: int) -> WidthCheck:
    """Validate a hidden width against the minimum for universal approximation."""
    if input_dim < 1 or hidden_width < 1:
        raise ValueError("input_dim and hidden_width must be positive")
    min_width = input_dim + 1
    return WidthCheck(ok=hidden_width >= min_width, min_width=min_width)


def glorot_limit(fan_in: int, fan_out: int) -> float:
    """Half-width of the Glorot uniform interval for one weight layer."""
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


@dataclass
class Network:
    """Weights and biases of a depth-1 regressor.

    Shapes: ``w1`` is (hidden, input), ``b1`` (hidden,), ``w2`` (1, hidden),
    ``b2`` (1,).  Activation tags are fixed; they are stored so model files
    stay self-describing.
    """

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    hidden_activation: str = "relu"
    output_activation: str = "identity"

    def __post_init__(self):
        self.w1 = np.asarray(self.w1, dtype=np.float64)
        self.b1 = np.asarray(self.b1, dtype=np.float64)
        self.w2 = np.asarray(self.w2, dtype=np.float64)
        self.b2 = np.asarray(self.b2, dtype=np.float64)
        h, d = self.w1.shape
        if self.b1.shape != (h,):
            raise ValueError(f"b1 shape {self.b1.shape} does not match hidden width {h}")
        if self.w2.shape != (1, h):
            raise ValueError(f"w2 shape {self.w2.shape} does not match (1, {h})")
        if self.b2.shape != (1,):
            raise ValueError(f"b2 shape {self.b2.shape} is not (1,)")
        for name, arr in self.parameters().items():
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"parameter {name} contains non-finite values")
        if self.hidden_activation != "relu" or self.output_activation != "identity":
            raise ValueError("only relu hidden / identity output activations are supported")

    @property
    def input_dim(self) -> int:
        return self.w1.shape[1]

    @property
    def hidden_width(self) -> int:
        return self.w1.shape[0]

    @property
    def output_dim(self) -> int:
        return self.w2.shape[0]

    def parameters(self) -> dict[str, np.ndarray]:
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": self.b2}

    def copy(self) -> "Network":
        return Network(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())


def glorot_uniform_init(
    input_dim: int,
    hidden_width: int,
    output_dim: int = 1,
    rng: np.random.Generator | int = 0,
) -> Network:
    """Draw a fresh network with Glorot-uniform weights and zero biases.

    Each weight layer is i.i.d. uniform on [-L, L] with
    L = sqrt(6 / (fan_in + fan_out)).  ``rng`` may be a Generator or a seed,
    in which case the dedicated init stream of that seed is used.
    """
    if output_dim != 1:
        raise ValueError("only a single output neuron is supported")
    ok, min_width = check_min_width(input_dim, hidden_width)
    if not ok:
        raise ValueError(
            f"hidden width {hidden_width} below minimum {min_width} for {input_dim} inputs"
        )
    if not isinstance(rng, np.random.Generator):
        rng = seeded_rng(int(rng), STREAM_INIT)

    l1 = glorot_limit(input_dim, hidden_width)
    l2 = glorot_limit(hidden_width, output_dim)
    w1 = rng.uniform(-l1, l1, size=(hidden_width, input_dim))
    w2 = rng.uniform(-l2, l2, size=(output_dim, hidden_width))
    return Network(w1=w1, b1=np.zeros(hidden_width), w2=w2, b2=np.zeros(output_dim))


def forward(net: Network, x) -> tuple[float, np.ndarray, np.ndarray]:
    """Evaluate one input vector; returns (y, hidden_pre, hidden_post).

    The pre- and post-activation vectors are returned for gradient code and
    tests.  Raises NumericError on a non-finite intermediate.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.input_dim,):
        raise ValueError(f"expected input of shape ({net.input_dim},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NumericError("numeric overflow: non-finite input")

    with np.errstate(over="ignore", invalid="ignore"):
        hidden_pre = net.w1 @ x + net.b1
        hidden_post = np.maximum(0.0, hidden_pre)
        y = float((net.w2 @ hidden_post)[0] + net.b2[0])
    if not (np.all(np.isfinite(hidden_pre)) and np.isfinite(y)):
        raise NumericError("numeric overflow: non-finite intermediate in forward pass")
    return y, hidden_pre, hidden_post


def forward_batch(net: Network, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized forward pass over an (N, input_dim) batch.

    Returns (y (N,), hidden_pre (N, W), hidden_post (N, W)).  Finiteness is
    not checked here; the training loop guards its loss values instead.
    """
    hidden_pre = X @ net.w1.T + net.b1
    hidden_post = np.maximum(0.0, hidden_pre)
    y = hidden_post @ net.w2[0] + net.b2[0]
    return y, hidden_pre, hidden_post
