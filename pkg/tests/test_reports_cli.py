import json

import numpy as np
import pytest
from click.testing import CliRunner

from toeplitz_trace import reports
from toeplitz_trace.cli import main


def test_fmt_round_trips():
    x = 0.1 + 0.2
    assert float(reports.fmt(x)) == x
    assert reports.fmt(3) == "3"


@pytest.mark.parametrize(
    "dev, tol, strict, passed",
    [(0.5, 1.0, False, True), (1.0, 1.0, False, True), (1.0, 1.0, True, False), (float("nan"), 1.0, False, False), (-1.0, 0.0, True, True)],
)
def test_row_pass_rule(dev, tol, strict, passed):
    assert reports.ReportRow("x", {}, 0.0, 0.0, dev, tol, strict=strict).passed is passed


def test_csv_sorted_and_deterministic(tmp_path):
    rows = [reports.ReportRow(name, {"k": 1.5}, 1 + 2j, 1.0, 0.1, 0.2, wall_time=np.random.rand()) for name in "cab"]
    reports.write_csv(rows, tmp_path / "a.csv")
    rows2 = [reports.ReportRow(name, {"k": 1.5}, 1 + 2j, 1.0, 0.1, 0.2, wall_time=np.random.rand()) for name in "bca"]
    reports.write_csv(rows2, tmp_path / "b.csv")
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    lines = a.decode().splitlines()
    assert lines[0].split(",") == reports.CSV_FIELDS
    assert [ln.split(",")[0] for ln in lines[1:]] == ["a", "b", "c"]


def test_load_config(tmp_path):
    defaults = {"x": 1, "tol_a": 1e-3}
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"version": 1, "cmd": {"x": 5}}))
    assert reports.load_config(p, defaults, "cmd") == {"x": 5, "tol_a": 1e-3}
    p.write_text(json.dumps({"y": 2}))
    with pytest.raises(reports.ConfigError, match="'y'"):
        reports.load_config(p, defaults, "cmd")
    p.write_text(json.dumps({"version": 7}))
    with pytest.raises(reports.ConfigError, match="version"):
        reports.load_config(p, defaults, "cmd")
    p.write_text('{\n  "x": ,\n}')
    with pytest.raises(reports.ConfigError, match="line 2"):
        reports.load_config(p, defaults, "cmd")


@pytest.mark.parametrize("cfg", [{"tol_a": 0.0}, {"tol_a": -1.0}, {"lambda_grid": [100.0, 50.0]}, {"lambda_grid": [-1.0, 2.0]}])
def test_validate_config_rejects(cfg):
    with pytest.raises(reports.ConfigError):
        reports.validate_config(cfg)


@pytest.mark.parametrize(
    "spec, grid",
    [("50:400:4", [50.0, 100.0, 200.0, 400.0]), ("100:100:1", [100.0]), ("10:1000:3", [10.0, 100.0, 1000.0])],
)
def test_parse_lambda_grid(spec, grid):
    assert reports.parse_lambda_grid(spec) == grid


@pytest.mark.parametrize("spec", ["1:2", "a:b:c", "400:50:3", "0:10:2"])
def test_parse_lambda_grid_rejects(spec):
    with pytest.raises(reports.ConfigError):
        reports.parse_lambda_grid(spec)


def test_merge_summaries(tmp_path):
    reports.write_json({"command": "a", "passed": True}, tmp_path / "a.summary.json")
    reports.write_json({"command": "b", "passed": False}, tmp_path / "b.summary.json")
    merged = reports.merge_summaries(sorted(tmp_path.glob("*.summary.json")))
    assert merged["passed"] is False
    assert set(merged["commands"]) == {"a", "b"}


@pytest.fixture
def runner():
    return CliRunner()


def test_cli_stationary_deterministic(runner, tmp_path):
    r1 = runner.invoke(main, ["stationary", "--out", str(tmp_path / "a")])
    r2 = runner.invoke(main, ["stationary", "--out", str(tmp_path / "b")])
    assert r1.exit_code == 0 and r2.exit_code == 0, r1.output
    assert (tmp_path / "a/stationary.csv").read_bytes() == (tmp_path / "b/stationary.csv").read_bytes()
    summ = json.loads((tmp_path / "a/stationary.summary.json").read_text())
    assert summ["passed"] and summ["schema_version"] == reports.SCHEMA_VERSION


def test_cli_tiny_tolerance_fails(runner, tmp_path):
    r = runner.invoke(main, ["stationary", "--out", str(tmp_path), "--tol-scale", "1e-20"])
    assert r.exit_code == 1
    assert "FAIL" in r.output


def test_cli_unknown_key(runner, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"f0_valuez": [1.0]}))
    r = runner.invoke(main, ["stationary", "--config", str(cfg), "--out", str(tmp_path)])
    assert r.exit_code == 2
    assert "f0_valuez" in r.output


def test_cli_grid_without_lambda(runner, tmp_path):
    r = runner.invoke(main, ["stationary", "--lambda-grid", "1:2:2", "--out", str(tmp_path)])
    assert r.exit_code == 2


def test_cli_single_lambda_slope(runner, tmp_path):
    r = runner.invoke(main, ["oscillatory", "--lambda-grid", "100:100:1", "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    summ = json.loads((tmp_path / "oscillatory.summary.json").read_text())
    assert summ["slope"] == "n/a"
    assert "error_slope" not in (tmp_path / "oscillatory.csv").read_text()


def test_cli_report(runner, tmp_path):
    runner.invoke(main, ["stationary", "--out", str(tmp_path)])
    runner.invoke(main, ["cp1", "negative", "--out", str(tmp_path)])
    r = runner.invoke(main, ["report", "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    acc = json.loads((tmp_path / "acceptance.json").read_text())
    assert set(acc["commands"]) == {"stationary", "cp1 negative"}
    assert acc["passed"]


def test_cli_report_empty(runner, tmp_path):
    assert runner.invoke(main, ["report", "--out", str(tmp_path)]).exit_code == 2
