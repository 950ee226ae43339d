"""Self-describing text serialization of a trained model.

Layout: ``key = value`` lines, blank lines and ``#`` comments ignored.
Scalar keys come first, then arrays as whitespace-separated decimals and
weight matrices as one ``name/row`` line per row::

    format_version = 1
    input_dim = 6
    hidden_width = 100
    output_dim = 1
    hidden_activation = relu
    output_activation = identity
    seed = 7
    train_fraction = 0.8000...
    norm_lo = 0
    norm_hi = 1
    scaler_min = <input_dim + 1 values: predictors in column order, then target>
    scaler_max = <input_dim + 1 values>
    b1 = <hidden_width values>
    b2 = <1 value>
    w1/0 = <input_dim values>    # one line per hidden neuron
    w2/0 = <hidden_width values>

Every float is written with 17 significant digits, which round-trips IEEE
doubles exactly: a loaded model predicts bit-identically, and saving it
again reproduces the file byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModelFormatError
from .network import Network, forward_batch
from .scaling import MinMaxRangeScaler
from .validation import as_feature_matrix

FORMAT_VERSION = 1


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


@dataclass
class ModelBundle:
    """A trained network plus everything needed to reproduce predictions."""

    network: Network
    feature_scaler: MinMaxRangeScaler
    target_scaler: MinMaxRangeScaler
    seed: int
    train_fraction: float

    def predict(self, X) -> np.ndarray:
        """Predict conductivity in S/m for raw-unit feature rows."""
        X = as_feature_matrix(X, self.network.input_dim)
        y_norm, _, _ = forward_batch(self.network, self.feature_scaler.transform(X))
        return self.target_scaler.inverse_transform(y_norm[:, None])[:, 0]


def save_model(bundle: ModelBundle, path: str) -> None:
    net = bundle.network
    scaler_min = np.concatenate([bundle.feature_scaler.data_min_, bundle.target_scaler.data_min_])
    scaler_max = np.concatenate([bundle.feature_scaler.data_max_, bundle.target_scaler.data_max_])
    lo, hi = bundle.feature_scaler.feature_range

    lines = [
        "# slagcond model file",
        f"format_version = {FORMAT_VERSION}",
        f"input_dim = {net.input_dim}",
        f"hidden_width = {net.hidden_width}",
        f"output_dim = {net.output_dim}",
        f"hidden_activation = {net.hidden_activation}",
        f"output_activation = {net.output_activation}",
        f"seed = {bundle.seed}",
        f"train_fraction = {_fmt(bundle.train_fraction)}",
        f"norm_lo = {_fmt(lo)}",
        f"norm_hi = {_fmt(hi)}",
        "scaler_min = " + " ".join(_fmt(v) for v in scaler_min),
        "scaler_max = " + " ".join(_fmt(v) for v in scaler_max),
        "b1 = " + " ".join(_fmt(v) for v in net.b1),
        "b2 = " + " ".join(_fmt(v) for v in net.b2),
    ]
    lines += [f"w1/{i} = " + " ".join(_fmt(v) for v in row) for i, row in enumerate(net.w1)]
    lines += [f"w2/{i} = " + " ".join(_fmt(v) for v in row) for i, row in enumerate(net.w2)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_floats(key: str, text: str, expected: int) -> np.ndarray:
    parts = text.split()
    if len(parts) != expected:
        raise ModelFormatError(f"key {key!r}: expected {expected} values, found {len(parts)}")
    try:
        return np.array([float(p) for p in parts], dtype=np.float64)
    except ValueError as exc:
        raise ModelFormatError(f"key {key!r}: {exc}") from None


def load_model(path: str) -> ModelBundle:
    """Parse a model file; raises ModelFormatError on any problem."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc}") from exc

    entries: dict[str, str] = {}
    for line in raw_lines:
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ModelFormatError(f"{path}: malformed line {text!r}")
        key, _, value = text.partition("=")
        entries[key.strip()] = value.strip()

    def take(key: str) -> str:
        if key not in entries:
            raise ModelFormatError(f"{path}: missing key {key!r}")
        return entries[key]

    try:
        version = int(take("format_version"))
    except ValueError:
        raise ModelFormatError(f"{path}: format_version is not an integer") from None
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"{path}: unsupported format version {version} (expected {FORMAT_VERSION})")

    try:
        input_dim = int(take("input_dim"))
        hidden_width = int(take("hidden_width"))
        output_dim = int(take("output_dim"))
        seed = int(take("seed"))
        train_fraction = float(take("train_fraction"))
        lo = float(take("norm_lo"))
        hi = float(take("norm_hi"))
    except ValueError as exc:
        raise ModelFormatError(f"{path}: {exc}") from None
    if min(input_dim, hidden_width, output_dim) < 1:
        raise ModelFormatError(f"{path}: dimensions must be positive")

    scaler_min = _parse_floats("scaler_min", take("scaler_min"), input_dim + 1)
    scaler_max = _parse_floats("scaler_max", take("scaler_max"), input_dim + 1)
    b1 = _parse_floats("b1", take("b1"), hidden_width)
    b2 = _parse_floats("b2", take("b2"), output_dim)
    w1 = np.stack([_parse_floats(f"w1/{i}", take(f"w1/{i}"), input_dim) for i in range(hidden_width)])
    w2 = np.stack([_parse_floats(f"w2/{i}", take(f"w2/{i}"), hidden_width) for i in range(output_dim)])

    try:
        net = Network(
            w1=w1, b1=b1, w2=w2, b2=b2,
            hidden_activation=take("hidden_activation"),
            output_activation=take("output_activation"),
        )
    except ValueError as exc:
        raise ModelFormatError(f"{path}: {exc}") from None

    feature_scaler = MinMaxRangeScaler(feature_range=(lo, hi))
    feature_scaler.data_min_ = scaler_min[:input_dim]
    feature_scaler.data_max_ = scaler_max[:input_dim]
    feature_scaler.n_features_in_ = input_dim

    target_scaler = MinMaxRangeScaler(feature_range=(lo, hi))
    target_scaler.data_min_ = scaler_min[input_dim:]
    target_scaler.data_max_ = scaler_max[input_dim:]
    target_scaler.n_features_in_ = 1

    return ModelBundle(
        network=net,
        feature_scaler=feature_scaler,
        target_scaler=target_scaler,
        seed=seed,
        train_fraction=train_fraction,
    )
