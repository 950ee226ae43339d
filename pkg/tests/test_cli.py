import hashlib
import json

import numpy as np
import numpy.testing as npt
import pytest

from slagcond import cli
from slagcond.data import load_csv
from slagcond.errors import NumericError
from slagcond.model_io import load_model


@pytest.fixture
def train_csv(make_linear_dataset, make_csv):
    return make_csv(make_linear_dataset(120, seed=1), "train.csv")


def run_cli(*argv):
    return cli.main(list(argv))


def read_lines(path):
    return path.read_text().splitlines()


def test_train_writes_artifacts(train_csv, tmp_path):
    outdir = tmp_path / "run"
    code = run_cli("train", "--data", train_csv, "--outdir", str(outdir),
                   "--hidden", "8", "--epochs", "5", "--seed", "3")
    assert code == 0

    model = load_model(str(outdir / "model.txt"))
    assert model.network.hidden_width == 8
    assert model.seed == 3

    curve = read_lines(outdir / "loss_curve.csv")
    assert curve[0] == "epoch,rmse"
    assert len(curve) == 6
    assert curve[1].startswith("1,")

    report = json.loads((outdir / "train_report.json").read_text())
    assert report["config"]["hidden_width"] == 8
    assert report["config"]["seed"] == 3
    assert len(report["loss_per_epoch"]) == 5
    assert {"aae", "stdev_of_deviation", "rmse", "n"} <= set(report["test_metrics_s_per_m"])
    assert "wall" not in json.dumps(report)  # artifacts must be rerun-stable

    manifest = json.loads((outdir / "train.manifest.json").read_text())
    with open(train_csv, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    assert manifest["inputs"]["data"]["sha256"] == digest
    assert manifest["seed"] == 3
    assert manifest["wall_clock"]["elapsed_seconds"] > 0


def test_train_honors_out_flag(train_csv, tmp_path):
    out = tmp_path / "custom_name.txt"
    code = run_cli("train", "--data", train_csv, "--out", str(out),
                   "--outdir", str(tmp_path), "--hidden", "7", "--epochs", "2")
    assert code == 0
    assert out.exists()
    assert (tmp_path / "train_report.json").exists()


def test_evaluate_reproduces_trained_test_metrics(train_csv, tmp_path, capsys):
    outdir = tmp_path / "run"
    run_cli("train", "--data", train_csv, "--outdir", str(outdir),
            "--hidden", "8", "--epochs", "5", "--seed", "2")
    stored = json.loads((outdir / "train_report.json").read_text())["test_metrics_s_per_m"]
    capsys.readouterr()

    evaldir = tmp_path / "eval"
    code = run_cli("evaluate", "--model", str(outdir / "model.txt"),
                   "--data", train_csv, "--outdir", str(evaldir))
    assert code == 0
    out = capsys.readouterr().out
    assert f"n:            {stored['n']}" in out
    assert f"{stored['aae']:.6g}" in out

    parity = read_lines(evaldir / "parity.csv")
    assert parity[0] == "conductivity_true,conductivity_pred"
    assert len(parity) == stored["n"] + 1


def test_evaluate_full_uses_all_retained_rows(train_csv, tmp_path):
    outdir = tmp_path / "run"
    run_cli("train", "--data", train_csv, "--outdir", str(outdir),
            "--hidden", "8", "--epochs", "3")
    evaldir = tmp_path / "eval"
    code = run_cli("evaluate", "--model", str(outdir / "model.txt"),
                   "--data", train_csv, "--outdir", str(evaldir), "--full")
    assert code == 0
    parity = read_lines(evaldir / "parity.csv")
    assert len(parity) == 120 + 1  # no outliers in this dataset


def test_predict_matches_library(train_csv, tmp_path):
    outdir = tmp_path / "run"
    run_cli("train", "--data", train_csv, "--outdir", str(outdir),
            "--hidden", "8", "--epochs", "3")
    preddir = tmp_path / "pred"
    code = run_cli("predict", "--model", str(outdir / "model.txt"),
                   "--data", train_csv, "--outdir", str(preddir))
    assert code == 0

    lines = read_lines(preddir / "predictions.csv")
    assert lines[0] == "conductivity_pred"
    got = np.array([float(v) for v in lines[1:]])
    bundle = load_model(str(outdir / "model.txt"))
    expected = bundle.predict(load_csv(train_csv).feature_matrix())
    npt.assert_array_equal(got, expected)


def test_predict_accepts_feature_only_csv(train_csv, tmp_path):
    outdir = tmp_path / "run"
    run_cli("train", "--data", train_csv, "--outdir", str(outdir),
            "--hidden", "8", "--epochs", "3")
    rows = read_lines(tmp_path / "train.csv")
    features_only = tmp_path / "features.csv"
    features_only.write_text(
        "\n".join(",".join(r.split(",")[:6]) for r in rows) + "\n"
    )
    code = run_cli("predict", "--model", str(outdir / "model.txt"),
                   "--data", str(features_only), "--outdir", str(tmp_path / "p"))
    assert code == 0


def test_sensitivity_outputs(train_csv, tmp_path, capsys):
    outdir = tmp_path / "run"
    run_cli("train", "--data", train_csv, "--outdir", str(outdir),
            "--hidden", "8", "--epochs", "3")
    capsys.readouterr()
    sensdir = tmp_path / "sens"
    code = run_cli("sensitivity", "--model", str(outdir / "model.txt"),
                   "--outdir", str(sensdir))
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("input,contribution,importance_pct")

    table = read_lines(sensdir / "importance.csv")
    assert table[0] == "input,contribution,importance_pct"
    assert len(table) == 7
    labels = [r.split(",")[0] for r in table[1:]]
    assert labels == ["temperature_K", "SiO2", "CaO", "MgO", "Al2O3", "FeO"]
    pct = [float(r.split(",")[2]) for r in table[1:]]
    npt.assert_allclose(sum(pct), 100.0, rtol=0, atol=1e-9)


def test_report_writes_all_figure_data(train_csv, tmp_path):
    outdir = tmp_path / "run"
    run_cli("train", "--data", train_csv, "--outdir", str(outdir),
            "--hidden", "8", "--epochs", "4")
    repdir = tmp_path / "rep"
    code = run_cli("report", "--model", str(outdir / "model.txt"),
                   "--data", train_csv, "--outdir", str(repdir), "--bins", "10")
    assert code == 0

    hist = read_lines(repdir / "histogram.csv")
    assert hist[0] == "bin_lo,bin_hi,count"
    assert len(hist) == 11
    assert sum(int(r.split(",")[2]) for r in hist[1:]) == 120

    assert (repdir / "loss_curve.csv").read_text() == (outdir / "loss_curve.csv").read_text()
    assert read_lines(repdir / "parity.csv")[0] == "conductivity_true,conductivity_pred"
    assert read_lines(repdir / "importance.csv")[0] == "input,contribution,importance_pct"


def test_report_needs_stored_training_history(train_csv, tmp_path):
    outdir = tmp_path / "run"
    run_cli("train", "--data", train_csv, "--outdir", str(outdir),
            "--hidden", "8", "--epochs", "3")
    bare = tmp_path / "bare"
    bare.mkdir()
    (bare / "model.txt").write_bytes((outdir / "model.txt").read_bytes())
    code = run_cli("report", "--model", str(bare / "model.txt"),
                   "--data", train_csv, "--outdir", str(tmp_path / "rep2"))
    assert code == 2


def test_sweep_outputs(train_csv, tmp_path, capsys):
    swdir = tmp_path / "sw"
    code = run_cli("sweep", "--data", train_csv, "--widths", "7,9",
                   "--epochs", "4", "--outdir", str(swdir))
    assert code == 0
    out = capsys.readouterr().out
    assert "width,test_aae" in out
    assert "best width:" in out

    table = read_lines(swdir / "sweep.csv")
    assert table[0] == "width,test_aae"
    assert [r.split(",")[0] for r in table[1:]] == ["7", "9"]
    best = load_model(str(swdir / "model.txt"))
    best_width = min(
        ((float(r.split(",")[1]), int(r.split(",")[0])) for r in table[1:])
    )[1]
    assert best.network.hidden_width == best_width


def test_config_file_supplies_defaults(train_csv, tmp_path):
    config = tmp_path / "run.conf"
    config.write_text("# comment\nepochs = 4\nhidden = 9\nseed = 5\n")
    outdir = tmp_path / "run"
    code = run_cli("train", "--data", train_csv, "--outdir", str(outdir),
                   "--config", str(config))
    assert code == 0
    report = json.loads((outdir / "train_report.json").read_text())
    assert report["config"]["epochs"] == 4
    assert report["config"]["hidden_width"] == 9
    assert report["config"]["seed"] == 5


def test_cli_flags_override_config(train_csv, tmp_path):
    config = tmp_path / "run.conf"
    config.write_text("epochs = 4\nhidden = 9\n")
    outdir = tmp_path / "run"
    code = run_cli("train", "--data", train_csv, "--outdir", str(outdir),
                   "--config", str(config), "--epochs", "2")
    assert code == 0
    report = json.loads((outdir / "train_report.json").read_text())
    assert report["config"]["epochs"] == 2
    assert report["config"]["hidden_width"] == 9


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["mystery"],
        ["train"],  # --data is required
        ["train", "--data", "x.csv", "--hidden", "6"],
        ["train", "--data", "x.csv", "--epochs", "0"],
        ["train", "--data", "x.csv", "--norm-range", "1,1"],
        ["train", "--data", "x.csv", "--seed", "-1"],
        ["train", "--data", "x.csv", "--split", "1.5"],
        ["sweep", "--data", "x.csv", "--widths", "8,6"],
        ["sweep", "--data", "x.csv", "--widths", ""],
        ["train", "--data", "x.csv", "--config", "/nonexistent.conf"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert cli.main(argv) == 1
    assert "usage error" in capsys.readouterr().err


def test_unknown_config_key_is_usage_error(train_csv, tmp_path, capsys):
    config = tmp_path / "bad.conf"
    config.write_text("epoch = 4\n")  # misspelled key
    assert run_cli("train", "--data", train_csv, "--config", str(config)) == 1
    assert "unknown flag" in capsys.readouterr().err


def test_data_errors_exit_2(train_csv, tmp_path, capsys):
    assert run_cli("train", "--data", str(tmp_path / "absent.csv"),
                   "--outdir", str(tmp_path)) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong,header\n1,2\n")
    assert run_cli("train", "--data", str(bad), "--outdir", str(tmp_path)) == 2
    assert run_cli("evaluate", "--model", str(tmp_path / "absent.txt"),
                   "--data", train_csv, "--outdir", str(tmp_path)) == 2
    err = capsys.readouterr().err
    assert "data error" in err


def test_numeric_errors_exit_3(train_csv, tmp_path, monkeypatch, capsys):
    def explode(dataset, config):
        raise NumericError("non-finite loss at epoch 1")

    monkeypatch.setattr(cli, "train", explode)
    assert run_cli("train", "--data", train_csv, "--outdir", str(tmp_path)) == 3
    assert "numeric error" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert "slagcond" in capsys.readouterr().out
