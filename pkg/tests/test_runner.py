"""Tests for command orchestration and exit statuses."""

from __future__ import annotations

import csv
import io
import json

import pytest

from nama import runner
from nama.config import Command, OutputFormat, RunConfig
from nama.errors import ConvergenceError
from nama.models import Check
from nama.runner import (
    EXIT_NO_SOLUTION,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    run,
)


@pytest.fixture
def cached_solver(monkeypatch, matched_n3):
    """Route the runner's shooting and global solve through the session cache."""
    match, sol = matched_n3
    monkeypatch.setattr(runner, "shoot_w0", lambda *args, **kwargs: match)
    monkeypatch.setattr(runner, "matched_solution", lambda *args, **kwargs: sol)
    return match, sol


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSpecfun:
    def test_evaluates(self):
        outcome = run(RunConfig(command=Command.SPECFUN, function="gamma", args=["0.5"]))
        assert outcome.exit_code == EXIT_OK
        row = _rows(outcome.text)[0]
        assert row["function"] == "gamma"
        assert float(row["value"]) == pytest.approx(1.7724538509055159, rel=1e-14)

    def test_unknown_function(self):
        outcome = run(RunConfig(command=Command.SPECFUN, function="zeta", args=["2"]))
        assert outcome.exit_code == EXIT_USAGE
        assert "Unknown function" in outcome.message

    def test_domain_error(self):
        outcome = run(RunConfig(command=Command.SPECFUN, function="gamma", args=["-1"]))
        assert outcome.exit_code == EXIT_USAGE


class TestExitStatus:
    def test_invalid_config(self):
        assert run(RunConfig(t_min=5.0)).exit_code == EXIT_USAGE

    def test_n2_has_no_solution(self):
        outcome = run(RunConfig(n=2))
        assert outcome.exit_code == EXIT_NO_SOLUTION
        assert "no positive solution" in outcome.message
        assert outcome.text == ""

    def test_convergence_failure(self, monkeypatch):
        def fail(*args, **kwargs):
            raise ConvergenceError("integration stalled")

        monkeypatch.setattr(runner, "shoot_w0", fail)
        outcome = run(RunConfig())
        assert outcome.exit_code == EXIT_NUMERIC
        assert "stalled" in outcome.message

    def test_failed_checks(self, monkeypatch):
        monkeypatch.setattr(
            runner, "run_checks", lambda config: [Check("ode_residual", False, 1.0, 1e-9)]
        )
        outcome = run(RunConfig(command=Command.VERIFY))
        assert outcome.exit_code == EXIT_NUMERIC
        assert "ode_residual" in outcome.message
        assert "false" in outcome.text


class TestCommands:
    def test_match(self, cached_solver):
        match, _ = cached_solver
        outcome = run(RunConfig(command=Command.MATCH))
        assert outcome.exit_code == EXIT_OK
        row = _rows(outcome.text)[0]
        assert float(row["w0_shot"]) == match.w0_shot
        assert float(row["nama_const"]) == pytest.approx(0.12)

    def test_match_json(self, cached_solver):
        outcome = run(RunConfig(command=Command.MATCH, format=OutputFormat.JSON))
        doc = json.loads(outcome.text)
        assert doc["config"]["command"] == "match"
        assert set(doc["results"]) >= {"w0_closed", "w0_shot", "residual", "v0", "a"}
        assert [c["name"] for c in doc["checks"]] == ["w0_routes_agree", "matching_condition"]
        assert all(c["passed"] for c in doc["checks"])

    def test_solve(self, cached_solver):
        outcome = run(RunConfig(command=Command.SOLVE, grid_size=20))
        rows = _rows(outcome.text)
        assert len(rows) == 20
        assert float(rows[0]["t"]) == pytest.approx(1e-3)
        assert float(rows[-1]["t"]) == pytest.approx(1e3)
        assert max(abs(float(r["ode_residual"])) for r in rows) <= 1e-9

    def test_solve_default_grid_within_tolerance(self, cached_solver):
        config = RunConfig(command=Command.SOLVE)
        rows = _rows(run(config).text)
        assert len(rows) == config.grid_size
        assert max(abs(float(r["ode_residual"])) for r in rows) <= config.tol

    def test_solve_writes_file(self, cached_solver, tmp_path):
        out = tmp_path / "grid.csv"
        outcome = run(RunConfig(command=Command.SOLVE, grid_size=5, out_path=str(out)))
        assert outcome.path == out
        assert out.read_text() == outcome.text

    def test_expand(self, cached_solver):
        outcome = run(RunConfig(command=Command.EXPAND, grid_size=5))
        rows = _rows(outcome.text)
        assert len(rows) == 5
        assert max(float(r["rel_error"]) for r in rows) <= 1e-5

    def test_scales(self, cached_solver):
        outcome = run(RunConfig(command=Command.SCALES, grid_size=4))
        rows = _rows(outcome.text)
        assert len(rows) == 4
        assert list(rows[0]) == [
            "r",
            "x1",
            "x2",
            "torus_diam",
            "fiber_diam",
            "dist",
            "vol_exponent",
            "grad_norm",
            "hess_norm",
        ]
        assert float(rows[-1]["r"]) == pytest.approx(1e4)
