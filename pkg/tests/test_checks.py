"""Tests for the cross-validation suite behind `nama verify`."""

from __future__ import annotations

import dataclasses
import math

import pytest

from nama import checks
from nama.checks import CHECKS, CheckContext, run_checks
from nama.config import RunConfig
from nama.models import ModelParams, RadialSolution


@pytest.fixture(scope="module")
def context(matched_n3):
    match, sol = matched_n3
    return CheckContext(config=RunConfig(), params=ModelParams(3), match=match, sol=sol)


@pytest.fixture
def cached_solver(monkeypatch, matched_n3):
    match, sol = matched_n3
    monkeypatch.setattr(checks, "shoot_w0", lambda *args, **kwargs: match)
    monkeypatch.setattr(checks, "matched_solution", lambda *args, **kwargs: sol)


@pytest.mark.parametrize("check", CHECKS, ids=lambda f: f.__name__)
def test_check_passes_on_matched_solution(check, context):
    result = check(context)
    assert math.isfinite(result.value)
    assert result.passed, f"{result.name}: {result.value:.3e} {result.detail}"


def test_run_checks_reports_every_check(cached_solver):
    results = run_checks(RunConfig())
    assert len(results) == len(CHECKS)
    assert len({r.name for r in results}) == len(CHECKS)
    assert all(r.passed for r in results)


def test_threshold_breach_is_reported(context):
    off = dataclasses.replace(context.match, w0_shot=context.match.w0_shot + 1e-3)
    result = checks.check_route_agreement(dataclasses.replace(context, match=off))
    assert not result.passed
    assert result.value == pytest.approx(1e-3, rel=1e-2)
    assert "closed form" in result.detail


@pytest.mark.slow
def test_checks_for_unequal_degrees(matched):
    match, sol = matched(3)
    ctx = CheckContext(
        config=RunConfig(d1=1, d2=2), params=ModelParams(3, d1=1, d2=2), match=match, sol=sol
    )
    failed = [r.name for r in (check(ctx) for check in CHECKS) if not r.passed]
    assert failed == []


def test_ode_residual_covers_interval_midpoints(context):
    result = checks.check_ode_residual(context)
    assert result.value <= 1e-10
    assert f"{len(context.sol) - 1} interval midpoints" in result.detail


def test_ode_residual_catches_inconsistent_samples(context):
    sol = dataclasses.replace(context.sol, wpp=1.01 * context.sol.wpp)
    result = checks.check_ode_residual(dataclasses.replace(context, sol=sol))
    assert not result.passed
    assert result.value == pytest.approx(0.005, rel=1e-3)


def test_ode_residual_catches_interpolated_second_derivative(context, monkeypatch):
    def interpolated(self, t):
        return self._interpolant(t), self._interpolant_d1(t), self._interpolant.derivative(2)(t)

    monkeypatch.setattr(RadialSolution, "_dense", interpolated)
    assert not checks.check_ode_residual(context).passed
