import csv
import math

import pytest
from click.testing import CliRunner

from gausscap.cli import ExitCode, crosscheck_point, main
from gausscap.degradability import amplifier
from gausscap.degradability.amplifier import CertifiedGap
from gausscap.degradability.gamma import Q_STAR
from gausscap.errors import DomainError
from gausscap.reports.records import format_value, read_json_records
from gausscap.utils.sweep import parse_float_list, parse_q_range, run_pool


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args, **kwargs):
    return runner.invoke(main, ["--jobs", "1", *args], **kwargs)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


# ── capacity ───────────────────────────────────────────────────────────────────
def test_capacity_single_point(runner, tmp_path):
    out = tmp_path / "cap.csv"
    result = invoke(runner, "capacity", "--q", "0.75", "--pa", "5", "--pe", "1", "-o", str(out))
    assert result.exit_code == ExitCode.OK, result.output
    (row,) = read_csv(out)
    assert float(row["Q_closed"]) == pytest.approx(math.log(3))
    assert float(row["P_A"]) == 5.0
    assert row["channel_class"] == "C_att"
    assert float(row["chi_h"]) + float(row["chi_a"]) >= float(row["uncertainty_lb"])
    assert float(row["conferencing_ideal"]) > float(row["conferencing_literal"]) > 0


def test_capacity_range_covers_grid(runner, tmp_path):
    out = tmp_path / "cap.csv"
    result = invoke(runner, "capacity", "--q-range", "0.51:0.99:0.01", "-o", str(out))
    assert result.exit_code == ExitCode.OK, result.output
    rows = read_csv(out)
    assert len(rows) == 49
    assert float(rows[-1]["q"]) == pytest.approx(0.99)


def test_capacity_rejects_identity(runner):
    result = invoke(runner, "capacity", "--q", "1")
    assert result.exit_code == ExitCode.INVALID_INPUT
    assert "singular" in result.output


def test_capacity_needs_a_grid(runner):
    assert invoke(runner, "capacity").exit_code == ExitCode.INVALID_INPUT
    assert invoke(runner, "capacity", "--q", "0.7", "--q-range", "0.6:0.7:0.1").exit_code == ExitCode.INVALID_INPUT


def test_capacity_json(runner, tmp_path):
    out = tmp_path / "cap.json"
    result = invoke(runner, "capacity", "--q", "2", "--format", "json", "-o", str(out))
    assert result.exit_code == ExitCode.OK, result.output
    (record,) = read_json_records(out)
    assert record["Q_closed"] == pytest.approx(math.log(2))
    assert record["channel_class"] == "C_amp"


# ── figures ────────────────────────────────────────────────────────────────────
def test_fig1_contains_threshold_rows(runner, tmp_path):
    result = invoke(runner, "figures", "fig1", "--q-range", "0.7:0.8:0.05", "--outdir", str(tmp_path))
    assert result.exit_code == ExitCode.OK, result.output
    rows = read_csv(tmp_path / "fig1.csv")
    at_star = [r for r in rows if float(r["q"]) == Q_STAR]
    assert {r["label"] for r in at_star} == {"c(k_2,-k_1)", "c(-k_4,k_2)"}
    assert [float(r["q"]) for r in rows] == sorted(float(r["q"]) for r in rows)


def test_figures_are_reproducible(runner, tmp_path):
    args = ["figures", "all", "--q-range", "0.6:0.8:0.1", "--n-max", "12"]
    for name in ("a", "b"):
        result = invoke(runner, *args, "--outdir", str(tmp_path / name))
        assert result.exit_code == ExitCode.OK, result.output
    for table in ("fig1.csv", "fig2.csv"):
        assert (tmp_path / "a" / table).read_bytes() == (tmp_path / "b" / table).read_bytes()


# ── crosscheck ─────────────────────────────────────────────────────────────────
def test_crosscheck_passes(runner, tmp_path):
    out, report = tmp_path / "cc.csv", tmp_path / "cc.md"
    result = invoke(runner, "crosscheck", "-o", str(out), "--report", str(report))
    assert result.exit_code == ExitCode.OK, result.output
    rows = read_csv(out)
    assert len(rows) == 6
    assert all(r["ok"] == "true" for r in rows)
    assert max(float(r["error"]) for r in rows) <= 1e-6
    assert [r["q"] for r in rows] == ["0.6"] * 3 + ["0.75"] * 3
    assert [r["n_bar"] for r in rows] == ["0.0", "1.0", "3.0"] * 2
    assert "PASS" in report.read_text(encoding="utf-8")


@pytest.mark.parametrize("value", [0.6, 0.1 + 0.2, 1e-7, 2 / 3, 123456.789])
def test_csv_floats_are_shortest_and_exact(value):
    text = format_value(value)
    assert float(text) == value
    assert text == repr(value)
    assert format_value(0.6) == "0.6"


def test_crosscheck_reports_truncation(runner, tmp_path):
    out, report = tmp_path / "cc.csv", tmp_path / "cc.md"
    result = invoke(runner, "crosscheck", "-D", "8", "--n-bar-list", "3", "-o", str(out), "--report", str(report))
    assert result.exit_code == ExitCode.CHECK_FAILED
    assert all(r["ok"] == "false" for r in read_csv(out))
    assert "FAIL" in report.read_text(encoding="utf-8")


def test_crosscheck_point_vacuum():
    record = crosscheck_point((0.6, 0.0, 0.0, 10, 1e-6))
    assert record["ok"]
    assert record["S_B_gauss"] == pytest.approx(0.0, abs=1e-12)
    assert record["S_B_fock"] == pytest.approx(0.0, abs=1e-10)


def test_crosscheck_point_amplifier():
    record = crosscheck_point((1.5, 0.0, 0.0, 60, 1e-6))
    assert record["ok"], record


# ── witness ────────────────────────────────────────────────────────────────────
def test_witness_beam_splitter(runner, tmp_path):
    out = tmp_path / "w.json"
    result = invoke(runner, "witness", "--q", "0.72", "-o", str(out))
    assert result.exit_code == ExitCode.OK, result.output
    (record,) = read_json_records(out)
    assert record["kind"] == "negativity"
    assert record["certified"] is True
    assert record["value"] < 0


def test_witness_amplifier(runner, tmp_path):
    out, report = tmp_path / "w.json", tmp_path / "w.md"
    result = invoke(runner, "witness", "--rational", "2/1", "--eps", "1e-3", "-o", str(out), "--report", str(report))
    assert result.exit_code == ExitCode.OK, result.output
    (record,) = read_json_records(out)
    assert record["kind"] == "relative_entropy"
    assert record["m1"] == 3 and record["m2"] == 1
    assert record["gap_upper"] < 0
    assert report.exists()


def test_witness_amplifier_from_q(runner, tmp_path):
    out = tmp_path / "w.json"
    result = invoke(runner, "witness", "--q", "1.5", "--eps", "1e-3", "-o", str(out))
    assert result.exit_code == ExitCode.OK, result.output
    (record,) = read_json_records(out)
    assert record["m1"] == 4 and record["m2"] == 2


def test_witness_anti_degradable_range_is_inconclusive(runner, tmp_path):
    out = tmp_path / "w.json"
    result = invoke(runner, "witness", "--q", "0.5", "-o", str(out))
    assert result.exit_code == ExitCode.INCONCLUSIVE
    (record,) = read_json_records(out)
    assert record["kind"] is None
    assert record["certified"] is False


def test_witness_amplifier_without_negative_gap_is_inconclusive(runner, tmp_path, monkeypatch):
    def positive_gap(q_prime, m1, m2):
        return CertifiedGap(q_prime, m1, m2, 200, 0.1, 0.0, 1e-9)

    monkeypatch.setattr(amplifier, "certified_gap", positive_gap)
    out, report = tmp_path / "w.json", tmp_path / "w.md"
    result = invoke(runner, "witness", "--rational", "2/1", "--eps", "1e-3", "-o", str(out), "--report", str(report))
    assert result.exit_code == ExitCode.INCONCLUSIVE
    (record,) = read_json_records(out)
    assert record["q"] == 2.0
    assert record["kind"] is None and record["certified"] is False
    assert "2/1" in record["reason"]
    assert (record["m1"], record["m2"], record["n_zero"]) == (3, 1, 0)
    assert [t["eps"] for t in record["tried"]] == pytest.approx([1e-3 / 10 ** k for k in range(7)])
    assert all(t["upper"] > 0 for t in record["tried"])
    text = report.read_text(encoding="utf-8")
    assert "Inconclusive" in text and "n_zero" in text


def test_witness_input_errors(runner):
    assert invoke(runner, "witness").exit_code == ExitCode.INVALID_INPUT
    assert invoke(runner, "witness", "--rational", "two/one").exit_code == ExitCode.INVALID_INPUT
    assert invoke(runner, "witness", "--rational", "4/2").exit_code == ExitCode.INVALID_INPUT
    assert invoke(runner, "witness", "--q", "0.7", "--rational", "2/1").exit_code == ExitCode.INVALID_INPUT


# ── config and jobs ────────────────────────────────────────────────────────────
def test_config_file_sets_defaults(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# capacity defaults\npa = 5\nformat = json\njobs = 1\n", encoding="utf-8")
    out = tmp_path / "cap.json"
    result = runner.invoke(main, ["--config", str(cfg), "capacity", "--q", "0.75", "-o", str(out)])
    assert result.exit_code == ExitCode.OK, result.output
    (record,) = read_json_records(out)
    assert record["P_A"] == 5.0


def test_flags_override_config(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("pa = 5\nformat = json\n", encoding="utf-8")
    out = tmp_path / "cap.json"
    result = invoke(runner, "--config", str(cfg), "capacity", "--q", "0.75", "--pa", "2", "-o", str(out))
    assert result.exit_code == ExitCode.OK, result.output
    (record,) = read_json_records(out)
    assert record["P_A"] == 2.0


def test_unknown_config_key(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = red\n", encoding="utf-8")
    result = runner.invoke(main, ["--config", str(cfg), "capacity", "--q", "0.75"])
    assert result.exit_code == ExitCode.INVALID_INPUT


def test_bad_jobs_environment(runner):
    result = runner.invoke(main, ["capacity", "--q", "0.75"], env={"GAUSSCAP_JOBS": "many"})
    assert result.exit_code == ExitCode.INVALID_INPUT


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "gausscap" in result.output


# ── sweeps ─────────────────────────────────────────────────────────────────────
def test_parse_q_range():
    grid = parse_q_range("0.51:0.99:0.01")
    assert len(grid) == 49
    assert grid[0] == 0.51 and grid[-1] == 0.99
    assert grid[17] == 0.68
    with pytest.raises(DomainError):
        parse_q_range("0.5:0.4:0.1")
    with pytest.raises(DomainError):
        parse_q_range("0.5:0.6")


def test_parse_float_list():
    assert parse_float_list("0, 1 ,3") == [0.0, 1.0, 3.0]
    with pytest.raises(DomainError):
        parse_float_list("0,x")


def test_run_pool_keeps_order():
    items = [float(i * i) for i in range(1, 9)]
    assert run_pool(math.sqrt, items, jobs=2) == [float(i) for i in range(1, 9)]
    assert run_pool(math.sqrt, items, jobs=1) == run_pool(math.sqrt, items, jobs=2)
