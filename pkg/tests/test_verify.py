"""Tests for the verification-suite plumbing and reports."""

import json
import os

import pytest

from hopfheat.kernels import EvalPolicy
from hopfheat.verify import (
    ConfigError,
    SuiteConfig,
    atomic_write_text,
    run_suite,
)

SMALL_POLICY = EvalPolicy(haar_grid=(24, 16, 16))


class TestSuiteConfig:
    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            SuiteConfig(suite="bogus")

    def test_bad_tolerance_override(self):
        with pytest.raises(ConfigError):
            SuiteConfig(suite="small-time", tol_overrides={"ldp": -1.0})

    def test_override_lookup(self):
        cfg = SuiteConfig(suite="small-time", tol_overrides={"ldp": 0.5})
        assert cfg.tol("ldp", 0.01) == 0.5
        assert cfg.tol("other", 0.01) == 0.01


class TestRunSuite:
    def test_submersion_passes(self):
        rep = run_suite(SuiteConfig(suite="submersion", seed=42))
        assert rep.passed
        names = {c.name for c in rep.checks}
        assert "fiber-geodesic" in names
        assert "fiber-average-vanishing" in names

    def test_small_time_reports_known_failure(self):
        # the LDP check at t = 1e-3 carries an O(t log t) offset that the
        # 1 percent tolerance does not admit at moderate delta; the suite
        # must report it as a failing check, not mask it
        rep = run_suite(SuiteConfig(suite="small-time", seed=42))
        ldp = next(c for c in rep.checks if c.name == "ldp-relative")
        assert not ldp.passed
        small = next(c for c in rep.checks if c.name == "small-t-leading-order")
        assert small.passed

    def test_determinism(self):
        rep1 = run_suite(SuiteConfig(suite="rigidity", seed=5, n=200))
        rep2 = run_suite(SuiteConfig(suite="rigidity", seed=5, n=200))
        for c1, c2 in zip(rep1.checks, rep2.checks):
            assert c1.name == c2.name
            assert abs(c1.residual - c2.residual) <= 1e-12

    def test_report_schema(self, tmp_path):
        out = tmp_path / "report.json"
        rep = run_suite(SuiteConfig(suite="volume-growth", seed=31, out=str(out)))
        assert rep.passed
        data = json.loads(out.read_text())
        assert data["schema"] == "hopf-heat/report/v1"
        assert data["suite"] == "volume-growth"
        assert data["passed"] is True
        assert {"name", "residual", "threshold", "passed"} <= set(data["checks"][0])
        assert data["config"]["seed"] == 31

    def test_csv_output(self):
        rep = run_suite(SuiteConfig(suite="volume-growth", seed=31))
        csv = rep.to_csv()
        lines = csv.strip().split("\n")
        assert lines[0] == "check,residual,threshold,passed"
        assert len(lines) == 1 + len(rep.checks)

    def test_residuals_reported_on_pass(self):
        rep = run_suite(SuiteConfig(suite="volume-growth", seed=31))
        for c in rep.checks:
            assert c.residual >= 0.0
            assert c.passed


class TestAtomicWrite:
    def test_writes_and_replaces(self, tmp_path):
        target = tmp_path / "out.txt"
        atomic_write_text(str(target), "first")
        atomic_write_text(str(target), "second")
        assert target.read_text() == "second"
        # no stray temp files left behind
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]
