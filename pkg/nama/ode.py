"""The reduced ODE in its equivalent forms, its exact solution near s = 1, and integration."""

from __future__ import annotations

import logging
import warnings

import numpy as np
from gvar.powerseries import PowerSeries
from scipy.optimize import brentq

from nama.errors import ConvergenceError, DomainError
from nama.integrator import integrate
from nama.models import BoundaryData, FrakSample, RadialSolution, SeriesExpansion
from nama.specfun import f_profile

logger = logging.getLogger(__name__)

SEED_ORDER = 8
SEED_WARN_T = 1e-3
DEFAULT_MAX_STEP = 0.02
_MAX_BRACKET_DOUBLINGS = 200


def _check_n(n: int) -> None:
    if n < 2:
        raise DomainError(f"the reduced ODE needs n >= 2, got n={n}")


def _check_w0(w0: float) -> None:
    if not w0 > 0:
        raise DomainError(f"w0 must be positive, got w0={w0}")


def boundary_data(n: int, w0: float) -> BoundaryData:
    """Boundary triple at t -> 0 under the normalization b1^(n-1) w0^3 = 1."""
    _check_n(n)
    _check_w0(w0)
    return BoundaryData(n=n, w0=w0, b1=w0 ** (-3.0 / (n - 1)), beta=1.0 / (n - 1))


def ode_residual_w(t, w, wp, wpp, n: int):
    """w'' w^3 (w + (1-t) w')^(n-2) - 1/(n-1). Accepts scalars or arrays."""
    return wpp * w**3 * (w + (1.0 - t) * wp) ** (n - 2) - 1.0 / (n - 1)


def wpp_from_ode(t, w, wp, n: int):
    """w'' solved from the ODE given (t, w, w')."""
    return 1.0 / ((n - 1) * w**3 * (w + (1.0 - t) * wp) ** (n - 2))


def potential_constant(n: int) -> float:
    """Right-hand side of the ODE written for v: (1/(n-1)) (n/(n+2))^3."""
    return (n / (n + 2)) ** 3 / (n - 1)


def ode_residual_v(t, v, vp, vpp, n: int):
    """(v v'' - 2/(n+2) v'^2) ((n+2)/n v + (1-t) v')^(n-2) - C_v."""
    return (v * vpp - 2.0 / (n + 2) * vp**2) * ((n + 2) / n * v + (1.0 - t) * vp) ** (
        n - 2
    ) - potential_constant(n)


def w_from_v(v, n: int):
    if np.any(np.asarray(v) <= 0):
        raise DomainError(f"v must be positive, got v={v}")
    return (n + 2) / n * v ** (n / (n + 2))


def v_from_w(w, n: int):
    if np.any(np.asarray(w) <= 0):
        raise DomainError(f"w must be positive, got w={w}")
    return (n * w / (n + 2)) ** ((n + 2) / n)


def v_derivatives(w, wp, wpp, n: int):
    """(v, v', v'') from (w, w', w'') under w = (n+2)/n v^(n/(n+2))."""
    v = v_from_w(w, n)
    vp = wp * v ** (2.0 / (n + 2))
    vpp = wpp * v ** (2.0 / (n + 2)) + 2.0 / (n + 2) * vp**2 / v
    return v, vp, vpp


def w_derivatives(v, vp, vpp, n: int):
    """Inverse of v_derivatives."""
    w = w_from_v(v, n)
    wp = vp * v ** (-2.0 / (n + 2))
    wpp = (vpp - 2.0 / (n + 2) * vp**2 / v) * v ** (-2.0 / (n + 2))
    return w, wp, wpp


def frak_from_w(t, w, wp):
    """(s, frak_w, d frak_w/ds) from (t, w, w') with s = 1/(1-t)."""
    s = 1.0 / (1.0 - t)
    return s, w * s, (1.0 - t) * wp + w


def w_from_frak(s, frak_w, frak_wp):
    """(t, w, w') from (s, frak_w, d frak_w/ds)."""
    return 1.0 - 1.0 / s, frak_w / s, s * frak_wp - frak_w


def slope_from_first_integral(frak_w: float, n: int, w0: float) -> float:
    rhs = n / (n - 1) * (0.5 / w0**2 - 0.5 / frak_w**2)
    return max(rhs, 0.0) ** (1.0 / n)


def first_integral_residual(sample: FrakSample, n: int, w0: float) -> float:
    return (
        (n - 1) / n * sample.frak_wp**n + 0.5 / sample.frak_w**2 - 0.5 / w0**2
    )


def frak_implicit(s: float, n: int, w0: float) -> FrakSample:
    """Exact frak_w(s) from F(frak_w/w0) = (2(n-1)/n w0^(n+2))^(-1/n) (s-1)."""
    _check_n(n)
    _check_w0(w0)
    if s < 1:
        raise DomainError(f"frak_implicit needs s >= 1, got s={s}")
    if s == 1:
        return FrakSample(s=1.0, frak_w=w0, frak_wp=0.0)

    target = (2.0 * (n - 1) / n * w0 ** (n + 2)) ** (-1.0 / n) * (s - 1.0)
    p_star = (n / (2.0 * (n - 1) * w0**2)) ** (1.0 / n)
    hi = (w0 + p_star * (s - 1.0) + 1.0) / w0
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        if f_profile(hi, n) >= target:
            break
        logger.debug("expanding implicit-solution bracket past x=%g", hi)
        hi = 1.0 + 2.0 * (hi - 1.0)
    else:
        raise ConvergenceError(f"could not bracket the implicit solution at s={s}")

    x = brentq(
        lambda x: f_profile(x, n) - target,
        1.0,
        hi,
        xtol=1e-15,
        rtol=4 * np.finfo(float).eps,
    )
    frak_w = w0 * x
    return FrakSample(s=s, frak_w=frak_w, frak_wp=slope_from_first_integral(frak_w, n, w0))


def implicit_w(t: float, n: int, w0: float) -> tuple[float, float]:
    """(w, w') at 0 <= t < 1 from the exact implicit solution."""
    sample = frak_implicit(1.0 / (1.0 - t), n, w0)
    _, w, wp = w_from_frak(sample.s, sample.frak_w, sample.frak_wp)
    return w, wp


def series_near_one(n: int, w0: float, order: int) -> SeriesExpansion:
    """Coefficients of frak_w = sum c_k q^k, q = (s-1)^(n/(n-1)).

    Substituting into the first integral gives, with P(q) = sum (j+1) m c_(j+1) q^j,

        (n-1)/n q P(q)^n = 1/(2 w0^2) - 1/(2 frak_w^2).

    At w0 = 1 the q^k coefficient of the mismatch is c_k (nk - 1) plus terms in
    c_0 .. c_(k-1), so each coefficient is one division. The scaling
    frak_w(s) = w0 f(w0^(-(n+2)/n) (s-1)) then gives c_k = c_k(1) w0^(1-(n+2)k/(n-1)).
    """
    _check_n(n)
    _check_w0(w0)
    if order < 2:
        raise DomainError(f"series_near_one needs order >= 2, got order={order}")
    m = n / (n - 1)
    unit = [1.0, (n - 1) / n]

    def mismatch(k: int) -> float:
        trial_coeffs = unit + [0.0]
        w_series = PowerSeries(trial_coeffs, order=k)
        slopes = [(j + 1) * m * trial_coeffs[j + 1] for j in range(k)]
        slope_series = PowerSeries(slopes, order=k - 1)
        lhs = (n - 1) / n * (slope_series**n).c[k - 1]
        rhs = -0.5 * (1.0 / (w_series * w_series)).c[k]
        return lhs - rhs

    for k in range(2, order + 1):
        unit.append(-mismatch(k) / (n * k - 1))

    coeffs = tuple(float(c * w0 ** (1 - (n + 2) * k / (n - 1))) for k, c in enumerate(unit))
    return SeriesExpansion(n=n, w0=w0, coeffs=coeffs, order=order)


def seed_state(n: int, w0: float, t: float, order: int = SEED_ORDER) -> np.ndarray:
    """(w, w') at small t > 0 from the series transported through s = 1/(1-t)."""
    series = series_near_one(n, w0, order)
    sigma = t / (1.0 - t)
    s = 1.0 + sigma
    _, w, wp = w_from_frak(s, series.frak_w(sigma), series.frak_wp(sigma))
    return np.array([w, wp])


def integrate_w(
    n: int,
    w0: float,
    t_start: float,
    t_end: float,
    tol: float,
    *,
    order: int = SEED_ORDER,
    max_step: float = DEFAULT_MAX_STEP,
) -> RadialSolution:
    """Integrate w'' = 1 / ((n-1) w^3 (w + (1-t) w')^(n-2)) from a series seed.

    The singular point t = 0 is never stepped through. Loss of positivity of
    w or of w + (1-t) w' raises BlowUpError carrying the failure abscissa.
    """
    _check_n(n)
    _check_w0(w0)
    if not 0 < t_start < 1:
        raise DomainError(f"t_start must lie in (0, 1), got t_start={t_start}")
    if not t_end > t_start:
        raise DomainError(f"t_end={t_end} must exceed t_start={t_start}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got tol={tol}")
    if t_start > SEED_WARN_T:
        warnings.warn(
            f"t_start={t_start} > {SEED_WARN_T}: the series seed may be inaccurate",
            stacklevel=2,
        )

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        w, wp = y
        base = w + (1.0 - t) * wp
        if w <= 0 or base <= 0:
            return np.array([np.nan, np.nan])
        return np.array([wp, wpp_from_ode(t, w, wp, n)])

    def guard(t: float, y: np.ndarray) -> str | None:
        w, wp = y
        if w <= 0:
            return "w lost positivity"
        if w + (1.0 - t) * wp <= 0:
            return "w + (1-t)w' lost positivity"
        return None

    traj = integrate(
        rhs,
        t_start,
        seed_state(n, w0, t_start, order),
        t_end,
        rtol=tol,
        atol=tol,
        h0=0.01 * t_start,
        max_step=max_step,
        guard=guard,
    )
    return RadialSolution(
        n=n,
        w0=w0,
        t=traj.t,
        w=traj.y[:, 0],
        wp=traj.y[:, 1],
        wpp=traj.dy[:, 1],
        tol=tol,
    )


def integrate_frak(
    n: int,
    w0: float,
    s_start: float,
    s_end: float,
    tol: float,
    *,
    order: int = SEED_ORDER,
) -> list[FrakSample]:
    """Integrate frak_w'' = 1 / ((n-1) frak_w^3 frak_w'^(n-2)) directly in s."""
    _check_n(n)
    _check_w0(w0)
    if not 1 < s_start < s_end:
        raise DomainError(f"need 1 < s_start < s_end, got s_start={s_start}, s_end={s_end}")
    series = series_near_one(n, w0, order)
    sigma = s_start - 1.0

    def rhs(s: float, y: np.ndarray) -> np.ndarray:
        fw, fwp = y
        if fw <= 0 or fwp <= 0:
            return np.array([np.nan, np.nan])
        return np.array([fwp, 1.0 / ((n - 1) * fw**3 * fwp ** (n - 2))])

    traj = integrate(
        rhs,
        s_start,
        np.array([series.frak_w(sigma), series.frak_wp(sigma)]),
        s_end,
        rtol=tol,
        atol=tol,
        h0=0.01 * sigma,
        max_step=max(1.0, 0.01 * s_end),
        guard=lambda s, y: "frak_w' lost positivity" if y[1] <= 0 else None,
    )
    return [
        FrakSample(s=float(s), frak_w=float(y[0]), frak_wp=float(y[1]))
        for s, y in zip(traj.t, traj.y)
    ]


def symmetry_reflect(sol: RadialSolution) -> RadialSolution:
    """The solution t w(1/t), sampled at the reciprocals of the input grid.

    Values and derivatives map exactly at every sample:
    w~ = w/t, w~' = w - t w', w~'' = t^3 w''.
    """
    t = sol.t[::-1]
    w = sol.w[::-1]
    wp = sol.wp[::-1]
    wpp = sol.wpp[::-1]
    return RadialSolution(
        n=sol.n,
        w0=sol.w0,
        t=1.0 / t,
        w=w / t,
        wp=w - t * wp,
        wpp=t**3 * wpp,
        tol=sol.tol,
    )
