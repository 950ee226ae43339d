"""Command-line surface: train, evaluate, predict, sensitivity, sweep, report.

Exit codes: 0 success, 1 usage error (bad flags, width below the admissible
minimum), 2 data/schema/model-file error, 3 numeric failure during training.

Flags may also be supplied through ``--config FILE`` (plain ``key = value``
lines, ``#`` comments allowed, keys named like the long flags without the
leading dashes); explicit command-line flags take precedence.

Every run writes a ``<command>.manifest.json`` recording the resolved flags,
seed, input digests, and artifact paths.  Reruns with identical inputs
reproduce every artifact byte for byte; only the manifest's wall-clock
fields differ.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import sys
import time

from . import __version__
from .data import (
    Dataset,
    histogram_counts,
    load_csv,
    remove_outliers,
    split,
)
from .errors import DataError, ModelFormatError, NumericError, RowError, SchemaError
from .evaluation import EvalReport, evaluate
from .model_io import ModelBundle, load_model, save_model
from .network import check_min_width
from .sensitivity import connection_weights
from .training import TrainConfig, TrainResult, sweep, train

INPUT_DIM = 6


class CliUsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# flag parsing and config-file resolution


def _parse_pos_int(name):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise CliUsageError(f"--{name}: {text!r} is not an integer") from None
        if value < 1:
            raise CliUsageError(f"--{name} must be positive, got {value}")
        return value

    return parse


def _parse_seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise CliUsageError(f"--seed: {text!r} is not an integer") from None
    if value < 0:
        raise CliUsageError(f"--seed must be non-negative, got {value}")
    return value


def _parse_lr(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CliUsageError(f"--lr: {text!r} is not a number") from None
    if value <= 0:
        raise CliUsageError(f"--lr must be positive, got {value}")
    return value


def _parse_split(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CliUsageError(f"--split: {text!r} is not a number") from None
    if not 0.0 < value < 1.0:
        raise CliUsageError(f"--split must lie strictly between 0 and 1, got {value}")
    return value


def _parse_norm_range(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliUsageError(f"--norm-range expects 'lo,hi', got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise CliUsageError(f"--norm-range: {text!r} contains a non-number") from None
    if not lo < hi:
        raise CliUsageError(f"--norm-range requires lo < hi, got {text!r}")
    return lo, hi


def _parse_widths(text: str) -> list[int]:
    try:
        widths = [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise CliUsageError(f"--widths: {text!r} is not a comma-separated integer list") from None
    if not widths:
        raise CliUsageError("--widths list is empty")
    min_width = check_min_width(INPUT_DIM, 1).min_width
    for w in widths:
        if w < min_width:
            raise CliUsageError(
                f"--widths: width {w} below minimum {min_width} for {INPUT_DIM} inputs"
            )
    return widths


def _parse_hidden(text: str) -> int:
    value = _parse_pos_int("hidden")(text)
    ok, min_width = check_min_width(INPUT_DIM, value)
    if not ok:
        raise CliUsageError(f"--hidden {value} is below minimum width {min_width} for {INPUT_DIM} inputs")
    return value


def _parse_bool(name):
    def parse(text: str) -> bool:
        lowered = text.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise CliUsageError(f"{name}: {text!r} is not a boolean")

    return parse


FLAG_PARSERS = {
    "data": str,
    "model": str,
    "out": str,
    "outdir": str,
    "seed": _parse_seed,
    "hidden": _parse_hidden,
    "epochs": _parse_pos_int("epochs"),
    "lr": _parse_lr,
    "batch": _parse_pos_int("batch"),
    "split": _parse_split,
    "norm-range": _parse_norm_range,
    "widths": _parse_widths,
    "bins": _parse_pos_int("bins"),
    "renormalize-fractions": _parse_bool("renormalize-fractions"),
    "full": _parse_bool("full"),
}

FLAG_DEFAULTS = {
    "outdir": ".",
    "seed": 0,
    "hidden": 100,
    "epochs": 2000,
    "lr": 1e-3,
    "batch": 32,
    "split": 0.8,
    "norm-range": (0.0, 1.0),
    "bins": 30,
    "renormalize-fractions": False,
    "full": False,
}


def _read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliUsageError(f"--config: cannot read {path}: {exc}") from exc
    values = {}
    for line_no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise CliUsageError(f"--config {path} line {line_no}: expected 'key = value'")
        key, _, value = text.partition("=")
        key = key.strip()
        if key not in FLAG_PARSERS:
            raise CliUsageError(f"--config {path} line {line_no}: unknown flag {key!r}")
        values[key] = value.strip()
    return values


def _resolve_flags(args: argparse.Namespace, used: list[str], required: list[str]) -> dict:
    """Merge CLI values, config-file values, and defaults, in that order."""
    config_values = _read_config_file(args.config) if args.config else {}
    resolved = {}
    for name in used:
        cli_value = getattr(args, name.replace("-", "_"))
        if cli_value is not None:
            resolved[name] = FLAG_PARSERS[name](cli_value) if isinstance(cli_value, str) else cli_value
        elif name in config_values:
            resolved[name] = FLAG_PARSERS[name](config_values[name])
        elif name in FLAG_DEFAULTS:
            resolved[name] = FLAG_DEFAULTS[name]
        else:
            resolved[name] = None
    for name in required:
        if resolved.get(name) is None:
            raise CliUsageError(f"--{name} is required")
    return resolved


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage problems are exit 1
        raise CliUsageError(message)


def _add_flags(sub: argparse.ArgumentParser, names: list[str]) -> None:
    for name in names:
        if name in ("renormalize-fractions", "full"):
            sub.add_argument(f"--{name}", nargs="?", const="true", default=None, metavar="BOOL")
        else:
            sub.add_argument(f"--{name}", type=str, default=None)
    sub.add_argument("--config", type=str, default=None)


COMMAND_FLAGS = {
    "train": ["data", "out", "outdir", "seed", "hidden", "epochs", "lr", "batch",
              "split", "norm-range", "renormalize-fractions"],
    "evaluate": ["model", "data", "outdir", "full", "renormalize-fractions"],
    "predict": ["model", "data", "out", "outdir", "renormalize-fractions"],
    "sensitivity": ["model", "outdir"],
    "sweep": ["data", "widths", "out", "outdir", "seed", "epochs", "lr", "batch",
              "split", "norm-range", "renormalize-fractions"],
    "report": ["model", "data", "outdir", "bins", "full", "renormalize-fractions"],
}

COMMAND_REQUIRED = {
    "train": ["data"],
    "evaluate": ["model", "data"],
    "predict": ["model", "data"],
    "sensitivity": ["model"],
    "sweep": ["data", "widths"],
    "report": ["model", "data"],
}


def build_parser() -> _Parser:
    parser = _Parser(prog="slagcond", description="Melt conductivity regression toolkit")
    parser.add_argument("--version", action="version", version=f"slagcond {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    for command in COMMAND_FLAGS:
        sub = subparsers.add_parser(command, add_help=True)
        _add_flags(sub, COMMAND_FLAGS[command])
    return parser


# ---------------------------------------------------------------------------
# artifact helpers


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_rows(path: str, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _write_manifest(outdir: str, command: str, flags: dict, seed, inputs: dict,
                    artifacts: list[str], started_utc: str, elapsed: float) -> str:
    path = os.path.join(outdir, f"{command}.manifest.json")
    payload = {
        "command": command,
        "tool_version": __version__,
        "seed": seed,
        "flags": {k: (list(v) if isinstance(v, tuple) else v) for k, v in flags.items()},
        "inputs": inputs,
        "artifacts": artifacts,
        "wall_clock": {"started_utc": started_utc, "elapsed_seconds": elapsed},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return path


def _input_digests(**paths: str | None) -> dict:
    return {
        name: {"path": path, "sha256": _sha256(path)}
        for name, path in paths.items()
        if path is not None
    }


def _train_report_path(model_path: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(model_path)), "train_report.json")


def _loss_curve_path(model_path: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(model_path)), "loss_curve.csv")


def _write_train_artifacts(result: TrainResult, model_path: str, flags: dict) -> list[str]:
    save_model(result.model, model_path)
    report = result.report
    report_payload = {
        "config": {
            "hidden_width": report.config.hidden_width,
            "epochs": report.config.epochs,
            "batch_size": report.config.batch_size,
            "learning_rate": report.config.learning_rate,
            "beta1": report.config.beta1,
            "beta2": report.config.beta2,
            "epsilon": report.config.epsilon,
            "seed": report.config.seed,
            "train_fraction": report.config.train_fraction,
            "norm_range": list(report.config.target_range),
            "renormalize_fractions": flags.get("renormalize-fractions", False),
        },
        "data": {
            "n_loaded": report.n_loaded,
            "n_removed_outliers": report.n_removed_outliers,
            "n_train": report.n_train,
            "n_test": report.n_test,
        },
        "test_metrics_s_per_m": {
            "aae": report.test_metrics.aae,
            "stdev_of_deviation": report.test_metrics.stdev_of_deviation,
            "rmse": report.test_metrics.rmse,
            "n": report.test_metrics.n,
        },
        "loss_per_epoch": [[epoch, value] for epoch, value in report.loss_per_epoch],
    }
    report_path = _train_report_path(model_path)
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report_payload, fh, indent=2)
        fh.write("\n")
    curve_path = _loss_curve_path(model_path)
    _write_loss_curve(curve_path, report.loss_per_epoch)
    return [model_path, report_path, curve_path]


def _write_loss_curve(path: str, loss_per_epoch) -> None:
    _write_rows(path, "epoch,rmse", ((str(e), repr(v)) for e, v in loss_per_epoch))


def _write_parity(path: str, report: EvalReport) -> None:
    _write_rows(
        path,
        "conductivity_true,conductivity_pred",
        ((repr(t), repr(p)) for t, p in report.parity),
    )


def _write_importance(path: str, report) -> None:
    _write_rows(
        path,
        "input,contribution,importance_pct",
        (
            (label, repr(float(c)), repr(float(pct)))
            for label, c, pct in zip(report.labels, report.contributions, report.importance_pct)
        ),
    )


def _evaluation_subset(bundle: ModelBundle, dataset: Dataset, full: bool) -> Dataset:
    """Outlier-filter the data, then pick the model's held-out partition.

    By default the test partition is re-derived from the seed and split
    fraction stored in the model file; ``full`` evaluates every retained
    sample instead.
    """
    filtered, _ = remove_outliers(dataset)
    if full:
        return filtered
    indices = split(filtered, bundle.train_fraction, bundle.seed)
    return filtered.subset(indices.test_indices)


def _print_metrics(report: EvalReport) -> None:
    print(f"n:            {report.n}")
    print(f"AAE (S/m):    {report.aae:.6g}")
    print(f"StDev (S/m):  {report.stdev_of_deviation:.6g}")
    print(f"RMSE (S/m):   {report.rmse:.6g}")


# ---------------------------------------------------------------------------
# commands


def _cmd_train(args) -> int:
    flags = _resolve_flags(args, COMMAND_FLAGS["train"], COMMAND_REQUIRED["train"])
    started_utc = datetime.datetime.now(datetime.timezone.utc).isoformat()
    t0 = time.perf_counter()
    os.makedirs(flags["outdir"], exist_ok=True)
    model_path = flags["out"] or os.path.join(flags["outdir"], "model.txt")

    config = TrainConfig(
        hidden_width=flags["hidden"],
        epochs=flags["epochs"],
        batch_size=flags["batch"],
        learning_rate=flags["lr"],
        seed=flags["seed"],
        train_fraction=flags["split"],
        target_range=flags["norm-range"],
    )
    dataset = load_csv(flags["data"], renormalize_fractions=flags["renormalize-fractions"])
    result = train(dataset, config)
    artifacts = _write_train_artifacts(result, model_path, flags)

    report = result.report
    print(
        f"trained width={config.hidden_width} on {report.n_train} samples "
        f"({report.n_removed_outliers} outliers removed, {report.n_test} held out)"
    )
    print(f"final train RMSE (normalized): {report.loss_per_epoch[-1][1]:.6g}")
    _print_metrics(report.test_metrics)

    artifacts.append(
        _write_manifest(
            flags["outdir"], "train", flags, flags["seed"],
            _input_digests(data=flags["data"]),
            artifacts, started_utc, time.perf_counter() - t0,
        )
    )
    return 0


def _cmd_evaluate(args) -> int:
    flags = _resolve_flags(args, COMMAND_FLAGS["evaluate"], COMMAND_REQUIRED["evaluate"])
    started_utc = datetime.datetime.now(datetime.timezone.utc).isoformat()
    t0 = time.perf_counter()
    os.makedirs(flags["outdir"], exist_ok=True)

    bundle = load_model(flags["model"])
    dataset = load_csv(flags["data"], renormalize_fractions=flags["renormalize-fractions"])
    subset = _evaluation_subset(bundle, dataset, flags["full"])
    report = evaluate(bundle, subset.feature_matrix(), subset.target_vector())

    _print_metrics(report)
    parity_path = os.path.join(flags["outdir"], "parity.csv")
    _write_parity(parity_path, report)

    _write_manifest(
        flags["outdir"], "evaluate", flags, bundle.seed,
        _input_digests(data=flags["data"], model=flags["model"]),
        [parity_path], started_utc, time.perf_counter() - t0,
    )
    return 0


def _cmd_predict(args) -> int:
    flags = _resolve_flags(args, COMMAND_FLAGS["predict"], COMMAND_REQUIRED["predict"])
    started_utc = datetime.datetime.now(datetime.timezone.utc).isoformat()
    t0 = time.perf_counter()
    os.makedirs(flags["outdir"], exist_ok=True)

    bundle = load_model(flags["model"])
    dataset = load_csv(
        flags["data"],
        renormalize_fractions=flags["renormalize-fractions"],
        require_target=False,
    )
    predictions = bundle.predict(dataset.feature_matrix())

    out_path = flags["out"] or os.path.join(flags["outdir"], "predictions.csv")
    _write_rows(out_path, "conductivity_pred", ((repr(float(p)),) for p in predictions))
    print(f"wrote {len(predictions)} prediction(s) to {out_path}")

    _write_manifest(
        flags["outdir"], "predict", flags, bundle.seed,
        _input_digests(data=flags["data"], model=flags["model"]),
        [out_path], started_utc, time.perf_counter() - t0,
    )
    return 0


def _cmd_sensitivity(args) -> int:
    flags = _resolve_flags(args, COMMAND_FLAGS["sensitivity"], COMMAND_REQUIRED["sensitivity"])
    started_utc = datetime.datetime.now(datetime.timezone.utc).isoformat()
    t0 = time.perf_counter()
    os.makedirs(flags["outdir"], exist_ok=True)

    bundle = load_model(flags["model"])
    report = connection_weights(bundle.network)

    print("input,contribution,importance_pct")
    for label, c, pct in zip(report.labels, report.contributions, report.importance_pct):
        print(f"{label},{float(c):.6g},{float(pct):.6g}")
    if report.degenerate:
        print("note: all contributions are zero; importances are undefined")

    importance_path = os.path.join(flags["outdir"], "importance.csv")
    _write_importance(importance_path, report)

    _write_manifest(
        flags["outdir"], "sensitivity",
        {**flags, "degenerate": report.degenerate}, bundle.seed,
        _input_digests(model=flags["model"]),
        [importance_path], started_utc, time.perf_counter() - t0,
    )
    return 0


def _cmd_sweep(args) -> int:
    flags = _resolve_flags(args, COMMAND_FLAGS["sweep"], COMMAND_REQUIRED["sweep"])
    started_utc = datetime.datetime.now(datetime.timezone.utc).isoformat()
    t0 = time.perf_counter()
    os.makedirs(flags["outdir"], exist_ok=True)
    model_path = flags["out"] or os.path.join(flags["outdir"], "model.txt")

    config = TrainConfig(
        epochs=flags["epochs"],
        batch_size=flags["batch"],
        learning_rate=flags["lr"],
        seed=flags["seed"],
        train_fraction=flags["split"],
        target_range=flags["norm-range"],
    )
    dataset = load_csv(flags["data"], renormalize_fractions=flags["renormalize-fractions"])
    result = sweep(dataset, flags["widths"], config)

    print("width,test_aae")
    for width, value in result.table:
        print(f"{width},{value:.6g}")
    print(f"best width: {result.best_width}")

    table_path = os.path.join(flags["outdir"], "sweep.csv")
    _write_rows(table_path, "width,test_aae", ((str(w), repr(v)) for w, v in result.table))
    artifacts = [table_path] + _write_train_artifacts(result.best, model_path, flags)

    artifacts.append(
        _write_manifest(
            flags["outdir"], "sweep", flags, flags["seed"],
            _input_digests(data=flags["data"]),
            artifacts, started_utc, time.perf_counter() - t0,
        )
    )
    return 0


def _cmd_report(args) -> int:
    flags = _resolve_flags(args, COMMAND_FLAGS["report"], COMMAND_REQUIRED["report"])
    started_utc = datetime.datetime.now(datetime.timezone.utc).isoformat()
    t0 = time.perf_counter()
    os.makedirs(flags["outdir"], exist_ok=True)

    bundle = load_model(flags["model"])
    dataset = load_csv(flags["data"], renormalize_fractions=flags["renormalize-fractions"])
    filtered, _ = remove_outliers(dataset)

    # Figure data 1: conductivity histogram of the retained samples.
    bins = histogram_counts(filtered.target_vector(), flags["bins"])
    histogram_path = os.path.join(flags["outdir"], "histogram.csv")
    _write_rows(
        histogram_path, "bin_lo,bin_hi,count",
        ((repr(lo), repr(hi), str(count)) for lo, hi, count in bins),
    )

    # Figure data 2: loss curve, replayed from the report stored at training time.
    stored_report = _train_report_path(flags["model"])
    if not os.path.exists(stored_report):
        raise ModelFormatError(
            f"no train_report.json found beside {flags['model']}; "
            "run 'slagcond train' (it writes the loss history needed here)"
        )
    with open(stored_report, "r", encoding="utf-8") as fh:
        loss_per_epoch = json.load(fh)["loss_per_epoch"]
    curve_path = os.path.join(flags["outdir"], "loss_curve.csv")
    _write_loss_curve(curve_path, loss_per_epoch)

    # Figure data 3: parity pairs on the evaluation subset.
    subset = _evaluation_subset(bundle, dataset, flags["full"])
    eval_report = evaluate(bundle, subset.feature_matrix(), subset.target_vector())
    parity_path = os.path.join(flags["outdir"], "parity.csv")
    _write_parity(parity_path, eval_report)

    # Figure data 4: relative importances.
    importance_path = os.path.join(flags["outdir"], "importance.csv")
    _write_importance(importance_path, connection_weights(bundle.network))

    artifacts = [histogram_path, curve_path, parity_path, importance_path]
    print("wrote " + ", ".join(os.path.basename(p) for p in artifacts))
    _write_manifest(
        flags["outdir"], "report", flags, bundle.seed,
        _input_digests(data=flags["data"], model=flags["model"]),
        artifacts, started_utc, time.perf_counter() - t0,
    )
    return 0


COMMANDS = {
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "predict": _cmd_predict,
    "sensitivity": _cmd_sensitivity,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise CliUsageError("missing command (train, evaluate, predict, sensitivity, sweep, report)")
        return COMMANDS[args.command](args)
    except CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SchemaError, RowError, DataError, ModelFormatError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())
