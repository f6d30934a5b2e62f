"""Cross-validation suite behind `nama verify`.

Each check compares two independent routes to the same quantity and reports
the worst discrepancy against a fixed threshold.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from nama.config import RunConfig
from nama.matching import (
    closed_form_w0,
    legendre_g,
    matched_solution,
    p_star,
    shoot_w0,
)
from nama.models import Check, MatchResult, ModelParams, RadialSolution
from nama.ode import (
    first_integral_residual,
    frak_implicit,
    implicit_w,
    integrate_frak,
    series_near_one,
    symmetry_reflect,
)
from nama.potential import (
    boundary_expansion_u,
    calabi_ansatz_m1_residual,
    kahler_flags,
    length_scales,
    nama_constant,
    nama_residual,
    sample_potential,
    v0_a,
)
from nama.specfun import f_profile, f_profile_quadrature, gamma_fn

logger = logging.getLogger(__name__)

PROFILE_POINTS = (1.001, 1.1, 2.0, 10.0, 50.0)
PROFILE_DIMENSIONS = (3, 4, 5)
SERIES_DELTAS = (1e-2, 1e-3, 1e-4)
FD_STEP = 1e-5


@dataclass
class CheckContext:
    config: RunConfig
    params: ModelParams
    match: MatchResult
    sol: RadialSolution

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def w0(self) -> float:
        return self.match.w0_shot


def _check(name: str, value: float, threshold: float, detail: str = "") -> Check:
    return Check(
        name=name,
        passed=bool(value <= threshold),
        value=float(value),
        threshold=threshold,
        detail=detail,
    )


def _potential_grid(params: ModelParams) -> list[tuple[float, float]]:
    """10 x 10 log grid: x1 in [10, 1e4], t in [0.05, 20]."""
    points = []
    for x1 in np.geomspace(10.0, 1e4, 10):
        for t in np.geomspace(0.05, 20.0, 10):
            points.append((float(x1), float(t * params.d2 * x1 / params.d1)))
    return points


def check_route_agreement(ctx: CheckContext) -> Check:
    return _check(
        "w0_routes_agree",
        abs(closed_form_w0(ctx.n) - ctx.w0),
        1e-6,
        f"closed form {closed_form_w0(ctx.n):.12g}, shooting {ctx.w0:.12g}",
    )


def check_matching_condition(ctx: CheckContext) -> Check:
    return _check("matching_condition", abs(ctx.match.residual), 10 * ctx.config.tol)


def check_w_at_one(ctx: CheckContext) -> Check:
    return _check("w_at_one_is_p_star", abs(ctx.match.w_at_one - p_star(ctx.n, ctx.w0)), 1e-6)


def check_first_integral(ctx: CheckContext) -> Check:
    samples = integrate_frak(ctx.n, ctx.w0, 1.0 + 1e-4, 100.0, 1e-12)
    worst = max(abs(first_integral_residual(s, ctx.n, ctx.w0)) for s in samples)
    detail = f"{len(samples)} steps over s in [1, 100]"
    return _check("first_integral_conserved", worst, 1e-9, detail)


def check_implicit_solution(ctx: CheckContext) -> Check:
    ts = np.geomspace(ctx.config.t_min, 0.99, 40)
    worst = max(abs(ctx.sol.evaluate(t)[0] - implicit_w(t, ctx.n, ctx.w0)[0]) for t in ts)
    return _check("implicit_vs_integrated", worst, 1e-7)


def check_reflection(ctx: CheckContext) -> Check:
    t_min = ctx.config.t_min
    worst = max(
        abs(ctx.sol.evaluate(t)[0] - t * ctx.sol.evaluate(1.0 / t)[0])
        for t in np.geomspace(t_min, 1.0 / t_min, 101)
    )
    return _check("reflection_symmetry", worst, 1e-7)


def check_ode_residual(ctx: CheckContext) -> Check:
    t = ctx.sol.t
    midpoints = 0.5 * (t[:-1] + t[1:])
    worst = max(ctx.sol.max_residual(), float(np.max(np.abs(ctx.sol.dense_residuals(midpoints)))))
    detail = f"{len(t)} samples and {len(midpoints)} interval midpoints"
    return _check("ode_residual", worst, ctx.config.tol, detail)


def check_nama_residual(ctx: CheckContext) -> Check:
    const = nama_constant(ctx.params)
    worst = max(
        abs(nama_residual(sample_potential(ctx.params, ctx.sol, x1, x2), ctx.params)) / const
        for x1, x2 in _potential_grid(ctx.params)
    )
    return _check("nama_relative_residual", worst, 1e-6)


def check_kahler(ctx: CheckContext) -> Check:
    failures = 0
    for x1, x2 in _potential_grid(ctx.params):
        flags = kahler_flags(sample_potential(ctx.params, ctx.sol, x1, x2), ctx.params)
        failures += not all(flags)
    if not ctx.sol.kahler_ok():
        failures += 1
    return _check("kahler_positivity", failures, 0, "count of points failing")


def check_swap_symmetry(ctx: CheckContext) -> Check:
    swapped = ctx.params.swapped()
    reflected = symmetry_reflect(ctx.sol)
    const, const_swapped = nama_constant(ctx.params), nama_constant(swapped)
    worst = 0.0
    for x1, x2 in _potential_grid(ctx.params):
        rel = nama_residual(sample_potential(ctx.params, ctx.sol, x1, x2), ctx.params) / const
        rel_swapped = (
            nama_residual(sample_potential(swapped, reflected, x2, x1), swapped) / const_swapped
        )
        worst = max(worst, abs(rel - rel_swapped))
    return _check("swap_symmetry", worst, 1e-9)


def check_hessian_fd(ctx: CheckContext) -> Check:
    params, sol = ctx.params, ctx.sol
    worst = 0.0
    for x1, x2 in ((100.0, 50.0), (100.0, 100.0), (100.0, 300.0)):
        x2 = x2 * params.d2 / params.d1
        h = 1e-4 * x1

        def u(a: float, b: float) -> float:
            return sample_potential(params, sol, a, b).u

        fd = np.array(
            [
                [
                    (u(x1 + h, x2) - 2 * u(x1, x2) + u(x1 - h, x2)) / h**2,
                    (u(x1 + h, x2 + h) - u(x1 + h, x2 - h) - u(x1 - h, x2 + h) + u(x1 - h, x2 - h))
                    / (4 * h**2),
                ],
                [0.0, (u(x1, x2 + h) - 2 * u(x1, x2) + u(x1, x2 - h)) / h**2],
            ]
        )
        fd[1, 0] = fd[0, 1]
        hess = sample_potential(params, sol, x1, x2).hess
        worst = max(worst, float(np.max(np.abs(fd - hess)) / np.max(np.abs(hess))))
    return _check("hessian_finite_difference", worst, 1e-5)


def check_profile_quadrature(ctx: CheckContext) -> Check:
    worst = max(
        abs(f_profile(x, n) - f_profile_quadrature(x, n))
        for x in PROFILE_POINTS
        for n in PROFILE_DIMENSIONS
    )
    return _check("profile_closed_form_vs_quadrature", worst, 1e-10)


def check_legendre_ode(ctx: CheckContext) -> Check:
    n, w0 = ctx.n, ctx.w0
    worst = 0.0
    for y in np.linspace(0.1, 0.9, 9):
        g = legendre_g(y, n, w0)
        g_prime = (legendre_g(y + FD_STEP, n, w0) - legendre_g(y - FD_STEP, n, w0)) / (2 * FD_STEP)
        worst = max(worst, abs((y * g_prime - g) ** 2 * (1 - y**n) - 1))
    return _check("legendre_ode_residual", worst, 1e-7)


def check_g_at_one(ctx: CheckContext) -> Check:
    n, w0 = ctx.n, ctx.w0
    expected = p_star(n, w0) / w0 - gamma_fn(1 - 1 / n) * math.sqrt(math.pi) / gamma_fn(0.5 - 1 / n)
    return _check("g_at_one_gamma_ratio", abs(legendre_g(1.0, n, w0) - expected), 1e-10)


def check_v0_a(ctx: CheckContext) -> Check:
    v0, a = v0_a(ctx.n, ctx.w0)
    return _check("v0_a_identity", abs(v0 * a ** (ctx.n - 1) - (ctx.n / (ctx.n + 2)) ** 3), 1e-12)


def check_series_slope(ctx: CheckContext) -> Check:
    """Order-1 truncation error of the series should scale as delta^(2n/(n-1))."""
    n, w0 = ctx.n, ctx.w0
    series = series_near_one(n, w0, 2)
    errors = [
        abs(series.frak_w(d, order=1) - frak_implicit(1.0 + d, n, w0).frak_w) for d in SERIES_DELTAS
    ]
    slope = float(np.polyfit(np.log(SERIES_DELTAS), np.log(errors), 1)[0])
    expected = 2 * n / (n - 1)
    return _check(
        "series_truncation_slope",
        abs(slope / expected - 1),
        0.05,
        f"slope {slope:.4f}, expected {expected:.4f}",
    )


def check_boundary_expansion(ctx: CheckContext) -> Check:
    params = ctx.params
    x1 = ctx.config.x1
    x2 = 0.01 * params.d2 * x1 / params.d1
    series = series_near_one(ctx.n, ctx.w0, max(2, ctx.config.order))
    exact = sample_potential(params, ctx.sol, x1, x2).u
    approx = boundary_expansion_u(params, series, x1, x2, 2)
    return _check("boundary_expansion", abs(approx - exact) / abs(exact), 1e-5, "t=0.01, order 2")


def check_scaling_laws(ctx: CheckContext) -> Check:
    params, n = ctx.params, ctx.n
    lambdas = np.array([1.0, 10.0, 100.0])
    base = (100.0, 100.0 * ctx.config.ray_t * params.d2 / params.d1)
    grad, hess, torus, fiber = [], [], [], []
    for lam in lambdas:
        x1, x2 = lam * base[0], lam * base[1]
        sample = sample_potential(params, ctx.sol, x1, x2)
        scales = length_scales(params, ctx.sol, x1, x2)
        grad.append(np.hypot(*sample.du))
        hess.append(np.linalg.norm(sample.hess, 2))
        torus.append(scales.torus_diam)
        fiber.append(scales.fiber_diam)
    expected = {
        "grad": 2 / n,
        "hess": (2 - n) / n,
        "torus": (2 - n) / (2 * n),
        "fiber": 1 / n,
    }
    measured = {
        name: float(np.polyfit(np.log(lambdas), np.log(values), 1)[0])
        for name, values in (("grad", grad), ("hess", hess), ("torus", torus), ("fiber", fiber))
    }
    worst = max(abs(measured[k] / expected[k] - 1) for k in expected)
    detail = ", ".join(f"{k} {measured[k]:.4f}" for k in expected)
    return _check("scaling_exponents", worst, 0.02, detail)


def check_calabi(ctx: CheckContext) -> Check:
    worst = max(abs(calabi_ansatz_m1_residual(ctx.n, x)) for x in (0.1, 1.0, 10.0))
    return _check("calabi_ansatz_constant", worst, 1e-12)


CHECKS: list[Callable[[CheckContext], Check]] = [
    check_route_agreement,
    check_matching_condition,
    check_w_at_one,
    check_first_integral,
    check_implicit_solution,
    check_reflection,
    check_ode_residual,
    check_nama_residual,
    check_kahler,
    check_swap_symmetry,
    check_hessian_fd,
    check_profile_quadrature,
    check_legendre_ode,
    check_g_at_one,
    check_v0_a,
    check_series_slope,
    check_boundary_expansion,
    check_scaling_laws,
    check_calabi,
]


def build_context(config: RunConfig) -> CheckContext:
    """Shoot, then build the matched solution; raises NoRootError for n=2."""
    match = shoot_w0(config.n, config.bracket, config.tol, t_start=config.t_start)
    params = ModelParams(n=config.n, d1=config.d1, d2=config.d2)
    sol = matched_solution(config.n, config.t_min, config.tol, match=match)
    return CheckContext(config=config, params=params, match=match, sol=sol)


def run_checks(config: RunConfig) -> list[Check]:
    ctx = build_context(config)
    results = []
    for check in CHECKS:
        result = check(ctx)
        status = "pass" if result.passed else "FAIL"
        logger.debug("%s: %s (%.3e)", result.name, status, result.value)
        results.append(result)
    return results
