"""Command orchestration: config in, rendered table and exit status out."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from nama.checks import run_checks
from nama.config import Command, OutputFormat, RunConfig
from nama.errors import ConvergenceError, DomainError, NoRootError
from nama.matching import matched_solution, shoot_w0
from nama.models import Check, ModelParams
from nama.ode import series_near_one
from nama.potential import (
    boundary_expansion_u,
    length_scales,
    normalization_constants,
    sample_potential,
)
from nama.reporter import Table, format_summary, render_csv, render_json, save_output
from nama.specfun import SPECIAL_FUNCTIONS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_NO_SOLUTION = 2
EXIT_USAGE = 64

EXPAND_T_RANGE = (1e-3, 0.1)
SCALES_RADII = (10.0, 1e4)


@dataclass
class CommandResult:
    table: Table
    checks: list[Check] = field(default_factory=list)
    summary: str = ""


@dataclass
class RunOutcome:
    exit_code: int
    text: str = ""
    message: str = ""
    path: Path | None = None


def _matched(config: RunConfig):
    match = shoot_w0(config.n, config.bracket, config.tol, t_start=config.t_start)
    sol = matched_solution(config.n, config.t_min, config.tol, match=match)
    return match, sol


def run_match(config: RunConfig) -> CommandResult:
    match = shoot_w0(config.n, config.bracket, config.tol, t_start=config.t_start)
    record = match.to_dict()
    if config.n >= 3:
        params = ModelParams(n=config.n, d1=config.d1, d2=config.d2)
        record.update(normalization_constants(params, match.w0_shot).to_dict())
    table = Table(columns=list(record), single=True)
    table.add(*record.values())
    residual, limit = abs(match.residual), 10 * config.tol
    checks = [
        Check("w0_routes_agree", match.route_gap <= 1e-6, match.route_gap, 1e-6),
        Check("matching_condition", residual <= limit, residual, limit),
    ]
    summary = f"n={config.n}: w0_closed={match.w0_closed:.12g} w0_shot={match.w0_shot:.12g}"
    return CommandResult(table=table, checks=checks, summary=summary)


def run_solve(config: RunConfig) -> CommandResult:
    _, sol = _matched(config)
    grid = sol.resample(np.geomspace(config.t_min, 1.0 / config.t_min, config.grid_size))
    residuals = grid.residuals()
    table = Table(columns=["t", "w", "wp", "wpp", "ode_residual"])
    for (t, w, wp, wpp), res in zip(grid.samples(), residuals):
        table.add(t, w, wp, wpp, float(res))
    summary = f"{len(grid)} samples, max |ode residual| {float(np.max(np.abs(residuals))):.3e}"
    return CommandResult(table=table, summary=summary)


def run_verify(config: RunConfig) -> CommandResult:
    checks = run_checks(config)
    table = Table(columns=["name", "passed", "value", "threshold"])
    for c in checks:
        table.add(c.name, c.passed, c.value, c.threshold)
    return CommandResult(table=table, checks=checks, summary=format_summary(checks))


def run_expand(config: RunConfig) -> CommandResult:
    match, sol = _matched(config)
    params = ModelParams(n=config.n, d1=config.d1, d2=config.d2)
    series = series_near_one(config.n, match.w0_shot, max(2, config.order))
    lo = max(EXPAND_T_RANGE[0], config.t_min)
    table = Table(columns=["t", "x1", "x2", "u_exact", "u_expansion", "rel_error"])
    x1 = config.x1
    for t in np.geomspace(lo, EXPAND_T_RANGE[1], config.grid_size):
        x2 = float(t * params.d2 * x1 / params.d1)
        exact = sample_potential(params, sol, x1, x2).u
        approx = boundary_expansion_u(params, series, x1, x2, config.order)
        table.add(float(t), x1, x2, exact, approx, abs(approx - exact) / abs(exact))
    summary = f"order {config.order} expansion on {config.grid_size} points"
    return CommandResult(table=table, summary=summary)


def run_scales(config: RunConfig) -> CommandResult:
    _, sol = _matched(config)
    params = ModelParams(n=config.n, d1=config.d1, d2=config.d2)
    slope = config.ray_t * params.d2 / params.d1  # x2 / x1 along the ray
    table = Table(
        columns=[
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
    )
    for r in np.geomspace(*SCALES_RADII, config.grid_size):
        x1 = float(r / np.hypot(1.0, slope))
        x2 = x1 * slope
        sample = sample_potential(params, sol, x1, x2)
        scales = length_scales(params, sol, x1, x2)
        table.add(
            float(r),
            x1,
            x2,
            scales.torus_diam,
            scales.fiber_diam,
            scales.dist,
            scales.vol_exponent,
            float(np.hypot(*sample.du)),
            float(np.linalg.norm(sample.hess, 2)),
        )
    return CommandResult(table=table, summary=f"{config.grid_size} points along t={config.ray_t}")


def run_specfun(config: RunConfig) -> CommandResult:
    fn = SPECIAL_FUNCTIONS.get(config.function or "")
    if fn is None:
        known = ", ".join(sorted(SPECIAL_FUNCTIONS))
        raise DomainError(f"Unknown function: {config.function} (known: {known})")
    value = fn.call(config.args)
    table = Table(columns=["function", "args", "value"], single=True)
    table.add(fn.name, " ".join(config.args), value)
    return CommandResult(table=table)


COMMANDS: dict[Command, Callable[[RunConfig], CommandResult]] = {
    Command.MATCH: run_match,
    Command.SOLVE: run_solve,
    Command.VERIFY: run_verify,
    Command.EXPAND: run_expand,
    Command.SCALES: run_scales,
    Command.SPECFUN: run_specfun,
}


def render(config: RunConfig, result: CommandResult) -> str:
    if config.format == OutputFormat.JSON:
        return render_json(config.to_dict(), result.table, result.checks)
    return render_csv(result.table)


def run(config: RunConfig) -> RunOutcome:
    """Run one command. Library errors become exit codes; nothing is raised."""
    try:
        config.validate()
        result = COMMANDS[config.command](config)
    except NoRootError as e:
        return RunOutcome(exit_code=EXIT_NO_SOLUTION, message=str(e))
    except ConvergenceError as e:
        return RunOutcome(exit_code=EXIT_NUMERIC, message=str(e))
    except DomainError as e:
        return RunOutcome(exit_code=EXIT_USAGE, message=str(e))

    text = render(config, result)
    path = save_output(text, config.out_path)
    failed = [c for c in result.checks if not c.passed]
    if failed:
        names = ", ".join(c.name for c in failed)
        message = f"{len(failed)} check(s) failed: {names}"
        return RunOutcome(exit_code=EXIT_NUMERIC, text=text, message=message, path=path)
    return RunOutcome(exit_code=EXIT_OK, text=text, message=result.summary, path=path)
