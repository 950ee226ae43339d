"""Connection-weights sensitivity analysis of a trained network.

Each input's signed contribution is the sum over hidden neurons of the
input-to-hidden weight times that neuron's hidden-to-output weight
(biases excluded), i.e. entry i of the matrix product w2 @ w1.  Relative
importance takes absolute values and normalizes to percentages; the signed
contributions are kept in the report for interpretability.

Contributions are computed on the stored weights as-is, so importances are
relative to the normalized input ranges the network was trained on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import FEATURE_COLUMNS
from .network import Network


@dataclass
class SensitivityReport:
    """Per-input signed contributions and relative importances (percent).

    When every contribution is exactly zero the percentages are undefined;
    ``degenerate`` is set and ``importance_pct`` holds NaNs.
    """

    labels: tuple[str, ...]
    contributions: np.ndarray
    importance_pct: np.ndarray
    degenerate: bool = False

    def ranked(self) -> list[tuple[str, float, float]]:
        """(label, contribution, importance) rows sorted by importance, descending."""
        order = np.argsort(-self.importance_pct)
        return [
            (self.labels[i], float(self.contributions[i]), float(self.importance_pct[i]))
            for i in order
        ]


def connection_weights(net: Network, labels: tuple[str, ...] | None = None) -> SensitivityReport:
    """Score each input of a depth-1, single-output network.

    Labels default to the conductivity schema's six predictor names when the
    network has six inputs, otherwise to x0..x{D-1}.
    """
    if net.output_dim != 1:
        raise ValueError("connection weights are defined for a single output neuron")
    if labels is None:
        labels = FEATURE_COLUMNS if net.input_dim == 6 else tuple(f"x{i}" for i in range(net.input_dim))
    if len(labels) != net.input_dim:
        raise ValueError(f"{len(labels)} labels for {net.input_dim} inputs")

    contributions = (net.w2 @ net.w1)[0]
    total = np.sum(np.abs(contributions))
    if total == 0.0:
        return SensitivityReport(
            labels=tuple(labels),
            contributions=contributions,
            importance_pct=np.full(net.input_dim, np.nan),
            degenerate=True,
        )
    return SensitivityReport(
        labels=tuple(labels),
        contributions=contributions,
        importance_pct=np.abs(contributions) / total * 100.0,
    )
