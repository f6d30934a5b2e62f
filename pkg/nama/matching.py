"""The matching condition w'(1) = w(1)/2: closed form, shooting and the global solution."""

from __future__ import annotations

import logging
import math
from functools import partial

import numpy as np
from scipy.optimize import brentq

from nama.errors import ConvergenceError, DomainError, NoRootError
from nama.models import HypParams, LegendreProfile, MatchResult, RadialSolution
from nama.ode import integrate_w, symmetry_reflect
from nama.specfun import gamma_fn, gauss_at_one, hyp2f1

logger = logging.getLogger(__name__)

DEFAULT_BRACKET = (0.2, 5.0)
DEFAULT_T_START = 1e-4
# Integration runs this much tighter than the requested matching tolerance
INTEGRATION_SAFETY = 1e-2
REFLECT_LOG_SPACING = 1e-3
NO_SOLUTION_MESSAGE = "the matching condition has no positive solution for n=2"


def p_star(n: int, w0: float) -> float:
    """Right end of the slope range of frak_w: (n / (2(n-1) w0^2))^(1/n)."""
    if not w0 > 0:
        raise DomainError(f"w0 must be positive, got w0={w0}")
    return (n / (2.0 * (n - 1) * w0**2)) ** (1.0 / n)


def legendre_g(y: float, n: int, w0: float) -> float:
    """g(y) = -2F1[1/2, -1/n; (n-1)/n; y^n] + (p_star/w0) y on [0, 1]."""
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"legendre_g is defined on [0, 1], got y={y}")
    a, b, c = 0.5, -1.0 / n, (n - 1) / n
    if y == 1.0:
        hyp = gauss_at_one(a, b, c)
    else:
        hyp = hyp2f1(HypParams(a, b, c, y**n))
    return -hyp + p_star(n, w0) / w0 * y


def legendre_profile(n: int, w0: float) -> LegendreProfile:
    return LegendreProfile(n=n, w0=w0, p_star=p_star(n, w0), g=partial(legendre_g, n=n, w0=w0))


def frak_from_legendre(profile: LegendreProfile, y: float, h: float = 1e-5) -> tuple[float, float]:
    """Invert the Legendre transform at slope p = p_star y.

    With frak_w*(p) = w0 g(p/p_star): s = d frak_w*/dp and frak_w = p s - frak_w*(p).
    g' is a central difference, so y must keep a distance h from the ends of [0, 1].
    """
    if not h <= y <= 1.0 - h:
        raise DomainError(f"y={y} too close to the ends of [0, 1] for step h={h}")
    g_prime = (profile.g(y + h) - profile.g(y - h)) / (2.0 * h)
    s = profile.w0 / profile.p_star * g_prime
    frak_w = profile.p_star * y * s - profile.w0 * profile.g(y)
    return s, frak_w


def w_boundary_values(n: int, w0: float) -> tuple[float, float]:
    """(w(1), w'(1)) read off the Legendre transform: (p_star, w0 g(1))."""
    return p_star(n, w0), w0 * legendre_g(1.0, n, w0)


def closed_form_w0(n: int) -> float:
    """The w0 solving w'(1) = w(1)/2, as a Gamma ratio. Tends to 1/2 as n grows."""
    if n <= 2:
        raise DomainError(f"closed_form_w0 needs n >= 3 ({NO_SOLUTION_MESSAGE})")
    ratio = gamma_fn(0.5 - 1.0 / n) / (math.sqrt(math.pi) * gamma_fn(1.0 - 1.0 / n))
    return 0.5 ** ((n + 1) / (n + 2)) * (n / (n - 1)) ** (1.0 / (n + 2)) * ratio ** (n / (n + 2))


def shooting_function(
    n: int, w0: float, t_start: float = DEFAULT_T_START, tol: float = 1e-9
) -> float:
    """phi(w0) = w'(1) - w(1)/2 for the solution seeded with boundary value w0."""
    sol = integrate_w(n, w0, t_start, 1.0, tol * INTEGRATION_SAFETY)
    phi = float(sol.wp[-1] - 0.5 * sol.w[-1])
    logger.debug("n=%d w0=%.15g phi=%.6e (%d steps)", n, w0, phi, len(sol))
    return phi


def shoot_w0(
    n: int,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
    tol: float = 1e-9,
    *,
    t_start: float = DEFAULT_T_START,
) -> MatchResult:
    """Find w0 with w'(1) = w(1)/2 by Brent's method on the shooting function."""
    if n < 2:
        raise DomainError(f"shooting needs n >= 2, got n={n}")
    lo, hi = bracket
    if not 0 < lo < hi:
        raise DomainError(f"bracket must satisfy 0 < lo < hi, got {bracket}")

    phi_lo = shooting_function(n, lo, t_start, tol)
    phi_hi = shooting_function(n, hi, t_start, tol)
    if phi_lo * phi_hi > 0:
        reason = NO_SOLUTION_MESSAGE if n == 2 else f"no sign change for n={n}"
        raise NoRootError(
            f"shooting bracket {bracket} has {reason} "
            f"(phi={phi_lo:.6g} at w0={lo}, phi={phi_hi:.6g} at w0={hi})",
            phi_lo,
            phi_hi,
        )

    root = brentq(
        lambda w0: shooting_function(n, w0, t_start, tol), lo, hi, xtol=0.1 * tol, rtol=1e-15
    )
    sol = integrate_w(n, root, t_start, 1.0, tol * INTEGRATION_SAFETY)
    w1, wp1 = float(sol.w[-1]), float(sol.wp[-1])
    residual = wp1 - 0.5 * w1
    if abs(residual) > 10 * tol:
        raise ConvergenceError(f"shooting for n={n} stopped at |phi|={abs(residual):.3g} > {tol}")
    logger.info("n=%d: shot w0=%.15g (phi=%.3e)", n, root, residual)

    return MatchResult(
        n=n,
        w0_closed=closed_form_w0(n) if n >= 3 else float("nan"),
        w0_shot=root,
        w_at_one=w1,
        wp_at_one=wp1,
        residual=residual,
    )


def matched_solution(
    n: int,
    t_min: float = 1e-3,
    tol: float = 1e-9,
    *,
    match: MatchResult | None = None,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
) -> RadialSolution:
    """The global solution on [t_min, 1/t_min], symmetric under t -> 1/t."""
    if n < 3:
        raise DomainError(f"matched_solution needs n >= 3 ({NO_SOLUTION_MESSAGE})")
    if not 0 < t_min < 1:
        raise DomainError(f"t_min must lie in (0, 1), got t_min={t_min}")
    if match is None:
        match = shoot_w0(n, bracket, tol)

    seed_t = min(DEFAULT_T_START, 0.1 * t_min)
    full = integrate_w(n, match.w0_shot, seed_t, 1.0, tol * INTEGRATION_SAFETY)
    # log-spaced grid: relative spacing dt/t is preserved by t -> 1/t
    overlay = np.geomspace(t_min, 1.0, int(np.ceil(-np.log(t_min) / REFLECT_LOG_SPACING)) + 1)
    left = full.resample(overlay)
    right = symmetry_reflect(left)

    # right.t[0] == 1 duplicates the last left sample
    return RadialSolution(
        n=n,
        w0=match.w0_shot,
        t=np.concatenate((left.t, right.t[1:])),
        w=np.concatenate((left.w, right.w[1:])),
        wp=np.concatenate((left.wp, right.wp[1:])),
        wpp=np.concatenate((left.wpp, right.wpp[1:])),
        tol=tol,
    )
