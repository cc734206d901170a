"""Tests for the hopf-heat command-line interface."""

import json
import math
import os
from pathlib import Path

import pytest

from hopfheat.cli import main
from hopfheat.kernels import p_series, q_tilde

DATA_DIR = Path(__file__).parent / "data"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_p_diagonal(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--kernel", "p", "--t", "1", "--r", "0", "--theta", "0")
        assert code == 0
        value = float(out.split()[0])
        assert value == pytest.approx(p_series(1.0, 0.0, 0.0), rel=1e-12)
        assert "method=series" in out

    def test_qtilde_at_zero(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--kernel", "qtilde", "--t", "1", "--r", "0")
        assert code == 0
        value = float(out.split()[0])
        ref = sum((2 * k + 1) * math.exp(-4 * k * (k + 1)) for k in range(50))
        assert value == pytest.approx(ref, rel=1e-13)

    def test_cross_method(self, capsys):
        args = ["eval", "--kernel", "p", "--t", "0.3", "--r", "0.4", "--theta", "1.2"]
        code, out_s, _ = run_cli(capsys, *args, "--method", "series")
        assert code == 0
        code, out_i, _ = run_cli(capsys, *args, "--method", "integral")
        assert code == 0
        vs = float(out_s.split()[0])
        vi = float(out_i.split()[0])
        assert abs(vs - vi) / vs <= 1e-8
        assert "method=integral" in out_i

    def test_q_kernel(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--kernel", "q", "--t", "1", "--delta", "0.8")
        assert code == 0
        assert "method=theta-dual" in out

    def test_missing_argument_is_domain_error(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--kernel", "p", "--t", "1", "--r", "0")
        assert code == 2
        assert "theta" in err

    def test_bad_t(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--kernel", "p", "--t", "-1", "--r", "0", "--theta", "0")
        assert code == 2
        assert "positive" in err


class TestVerify:
    def test_unknown_suite_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--suite", "bogus", "--seed", "1")
        assert code == 2
        assert "unknown suite" in err

    def test_seed_required(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--suite", "submersion")
        assert code == 2
        assert "--seed" in err

    def test_passing_suite_exit_0(self, capsys, tmp_path):
        out = tmp_path / "rep.json"
        code, stdout, _ = run_cli(
            capsys, "verify", "--suite", "volume-growth", "--seed", "31", "--out", str(out)
        )
        assert code == 0
        assert "pass" in stdout
        data = json.loads(out.read_text())
        assert data["schema"] == "hopf-heat/report/v1"

    def test_failing_suite_exit_1_report_still_written(self, capsys, tmp_path):
        out = tmp_path / "rep.json"
        code, _, _ = run_cli(
            capsys, "verify", "--suite", "small-time", "--seed", "42", "--out", str(out)
        )
        assert code == 1
        data = json.loads(out.read_text())
        assert data["passed"] is False

    def test_tol_override_changes_outcome(self, capsys):
        # loosening the LDP tolerance to an attainable level flips the suite
        code, _, _ = run_cli(
            capsys,
            "verify", "--suite", "small-time", "--seed", "42",
            "--tol-overrides", "ldp=2.0",
        )
        assert code == 0

    def test_csv_written(self, capsys, tmp_path):
        csv = tmp_path / "rep.csv"
        code, _, _ = run_cli(
            capsys, "verify", "--suite", "volume-growth", "--seed", "31", "--csv", str(csv)
        )
        assert code == 0
        assert csv.read_text().startswith("check,residual,threshold,passed")


class TestEmbed:
    def test_writes_report_and_coordinates(self, capsys, tmp_path):
        out = tmp_path / "embed.json"
        code, _, _ = run_cli(capsys, "embed", "--n", "100", "--seed", "7", "--out", str(out))
        assert code == 0
        data = json.loads(out.read_text())
        assert data["min_gram_eigenvalue"] > 0.05
        assert data["max_isometry_residual"] <= 1e-9
        assert len(data["s3_coordinates"]) == 100
        assert len(data["s2_coordinates"]) == 100

    def test_n_too_small(self, capsys):
        code, _, err = run_cli(capsys, "embed", "--n", "10", "--seed", "7")
        assert code == 2
        assert ">= 50" in err

    def test_seed_required(self, capsys):
        code, _, err = run_cli(capsys, "embed", "--n", "100")
        assert code == 2
        assert "--seed" in err


class TestTable:
    def test_single_row(self, capsys, tmp_path):
        out = tmp_path / "t.csv"
        code, _, _ = run_cli(
            capsys, "table", "--kernel", "p",
            "--t-grid", "1", "--r-grid", "0.3", "--theta-grid", "0.5",
            "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "t,r,theta,value,method"
        assert len(lines) == 2
        t, r, th, value, method = lines[1].split(",")
        assert float(value) == pytest.approx(p_series(1.0, 0.3, 0.5), rel=1e-12)
        assert method == "series"

    def test_symmetric_theta_grid(self, capsys, tmp_path):
        out = tmp_path / "t.csv"
        code, _, _ = run_cli(
            capsys, "table", "--kernel", "p",
            "--t-grid", "0.5", "--r-grid", "0.4", "--theta-grid=-0.9,0.9",
            "--out", str(out),
        )
        assert code == 0
        rows = out.read_text().strip().split("\n")[1:]
        v1 = float(rows[0].split(",")[3])
        v2 = float(rows[1].split(",")[3])
        assert v1 == pytest.approx(v2, rel=1e-13)

    def test_bad_grid_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "table", "--kernel", "p", "--t-grid", "1,x", "--r-grid", "0", "--theta-grid", "0")
        assert code == 2

    def test_empty_grid_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "table", "--kernel", "p", "--r-grid", "0", "--theta-grid", "0")
        assert code == 2

    def test_golden_table_regression(self, capsys, tmp_path):
        """The frozen 4x4x4 table from the first cross-validated build."""
        golden = DATA_DIR / "golden_table.csv"
        out = tmp_path / "regen.csv"
        code, _, _ = run_cli(
            capsys, "table", "--kernel", "p",
            "--t-grid", "0.1,0.3,1,3",
            "--r-grid", "0,0.3,0.7,1.2",
            "--theta-grid", "0,0.5,1.5,3.0",
            "--out", str(out),
        )
        assert code == 0
        ref_lines = golden.read_text().strip().split("\n")
        new_lines = out.read_text().strip().split("\n")
        assert len(ref_lines) == len(new_lines) == 1 + 64
        for ref, new in zip(ref_lines[1:], new_lines[1:]):
            rv = float(ref.split(",")[3])
            nv = float(new.split(",")[3])
            assert nv == pytest.approx(rv, rel=1e-12)


class TestConfigFile:
    def test_config_supplies_defaults_flags_override(self, capsys, tmp_path):
        cfg = tmp_path / "conf.toml"
        cfg.write_text('[eval]\nkernel = "qtilde"\nt = 1.0\nr = 0.0\n')
        code, out, _ = run_cli(capsys, "--config", str(cfg), "eval")
        assert code == 0
        v_cfg = float(out.split()[0])
        assert v_cfg == pytest.approx(q_tilde(1.0, 0.0), rel=1e-13)
        # a flag beats the file
        code, out, _ = run_cli(capsys, "--config", str(cfg), "eval", "--r", "0.7")
        assert code == 0
        v_flag = float(out.split()[0])
        assert v_flag == pytest.approx(q_tilde(1.0, 0.7), rel=1e-13)
        assert v_flag != v_cfg

    def test_missing_config_file(self, capsys):
        code, _, err = run_cli(capsys, "--config", "/nonexistent.toml", "eval", "--kernel", "p")
        assert code == 2
