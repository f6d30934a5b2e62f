"""The homogeneous potential u(x1, x2) = x1^((n+2)/n) v(t) and its metric diagnostics."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from gvar.powerseries import PowerSeries

from nama.errors import DomainError
from nama.models import (
    ModelParams,
    NormalizationConstants,
    PotentialSample,
    RadialSolution,
    SeriesExpansion,
)
from nama.ode import frak_implicit, v_derivatives


class LengthScales(NamedTuple):
    torus_diam: float
    fiber_diam: float
    dist: float
    vol_exponent: float


def _check_point(x1: float, x2: float) -> None:
    if not (x1 > 0 and x2 > 0):
        raise DomainError(f"base coordinates must be positive, got (x1, x2)=({x1}, {x2})")


def ratio_t(params: ModelParams, x1: float, x2: float) -> float:
    return params.d1 * x2 / (params.d2 * x1)


def nama_constant(params: ModelParams) -> float:
    n, d1, d2 = params.n, params.d1, params.d2
    return 2.0 * n / ((n + 2) ** 2 * (n - 1)) * (d1 / d2) ** 2 * d1 ** (n - 2)


def v0_a(n: int, w0: float) -> tuple[float, float]:
    """Leading coefficients of v near t = 0: v = v0 + ..., (n+2)/n v + (1-t)v' ~ a t^(1/(n-1))."""
    if not w0 > 0:
        raise DomainError(f"w0 must be positive, got w0={w0}")
    v0 = (n * w0 / (n + 2)) ** ((n + 2) / n)
    a = (n / (n + 2)) ** (2.0 / n) * w0 ** (-(n + 2) / (n * (n - 1)))
    return v0, a


def normalization_constants(params: ModelParams, w0: float) -> NormalizationConstants:
    n, d1, d2 = params.n, params.d1, params.d2
    v0, a = v0_a(n, w0)
    k0_reduced = (
        1.0 / (4.0 * math.pi) ** 2 * 2.0 * n**2 / (n + 2) ** 2 * (d1 / d2) ** 2 * d1 ** (n - 2)
    )
    return NormalizationConstants(
        nama_const=nama_constant(params), k0_reduced=k0_reduced, v0=v0, a=a
    )


def potential_from_v(
    params: ModelParams, x1: float, x2: float, v: float, vp: float, vpp: float
) -> PotentialSample:
    """Assemble u, du and D^2u at (x1, x2) from v, v', v'' at t = d1 x2 / (d2 x1)."""
    n = params.n
    r = params.d1 / params.d2
    t = ratio_t(params, x1, x2)
    grad_scale = x1 ** (2.0 / n)
    hess_scale = x1 ** (2.0 / n - 1.0)

    u = x1 ** ((n + 2) / n) * v
    du = (((n + 2) / n * v - t * vp) * grad_scale, r * vp * grad_scale)
    h11 = hess_scale * (2.0 * (n + 2) / n**2 * v - 4.0 * t / n * vp + t * t * vpp)
    h12 = r * hess_scale * (2.0 / n * vp - t * vpp)
    h22 = r * r * hess_scale * vpp
    return PotentialSample(
        x1=x1, x2=x2, t=t, u=u, du=du, hess=np.array([[h11, h12], [h12, h22]])
    )


def sample_potential(
    params: ModelParams, sol: RadialSolution, x1: float, x2: float
) -> PotentialSample:
    """Evaluate u and its derivatives from a radial solution; raises RangeError off its grid."""
    _check_point(x1, x2)
    w, wp, wpp = sol.evaluate(ratio_t(params, x1, x2))
    v, vp, vpp = v_derivatives(w, wp, wpp, params.n)
    return potential_from_v(params, x1, x2, v, vp, vpp)


def class_coefficient(sample: PotentialSample, params: ModelParams) -> float:
    """d1 du/dx1 + d2 du/dx2."""
    return params.d1 * sample.du[0] + params.d2 * sample.du[1]


def nama_residual(sample: PotentialSample, params: ModelParams) -> float:
    """det(D^2u) (d1 du/dx1 + d2 du/dx2)^(n-2) minus the model constant."""
    det = float(np.linalg.det(sample.hess))
    return det * class_coefficient(sample, params) ** (params.n - 2) - nama_constant(params)


def kahler_flags(sample: PotentialSample, params: ModelParams) -> tuple[bool, bool]:
    hess = sample.hess
    hess_positive = bool(np.trace(hess) > 0 and np.linalg.det(hess) > 0)
    return hess_positive, bool(class_coefficient(sample, params) > 0)


def hessian_metric(sample: PotentialSample) -> np.ndarray:
    """Tangent-cone metric g = D^2u at the sample point."""
    return 0.5 * (sample.hess + sample.hess.T)


def boundary_coefficients(series: SeriesExpansion, n: int) -> tuple[float, ...]:
    """a_k with v = sum a_k sigma^(kn/(n-1)) (1-t)^((n+2)/n).

    Follows from v = (n frak_w/(n+2))^((n+2)/n).
    """
    alpha = (n + 2) / n
    composed = PowerSeries(list(series.coeffs), order=series.order) ** alpha
    return tuple(float(c) * (n / (n + 2)) ** alpha for c in composed.c)


def boundary_expansion_u(
    params: ModelParams, series: SeriesExpansion, x1: float, x2: float, order: int
) -> float:
    """Truncated expansion of u for 1 << x2 << x1 in powers of (d1 x2 / (d2 x1~))^(n/(n-1)).

    x1~ = x1 - (d1/d2) x2 is the shifted coordinate; order 0 is the leading v0 x1~^((n+2)/n).
    """
    _check_point(x1, x2)
    n = params.n
    if not 0 <= order <= series.order:
        raise DomainError(f"order must lie in [0, {series.order}], got order={order}")
    shifted = x1 - params.d1 / params.d2 * x2
    if not shifted > 0:
        raise DomainError(f"x2={x2} is outside the boundary region of x1={x1}")
    tau = params.d1 * x2 / (params.d2 * shifted)
    m = n / (n - 1)
    coeffs = boundary_coefficients(series, n)[: order + 1]
    return shifted ** ((n + 2) / n) * sum(a * tau ** (k * m) for k, a in enumerate(coeffs))


def implicit_potential(params: ModelParams, w0: float, x1: float, x2: float) -> float:
    """u below the diagonal from the exact implicit solution, free of integration error."""
    _check_point(x1, x2)
    n = params.n
    shifted = x1 - params.d1 / params.d2 * x2
    if not shifted > 0:
        raise DomainError(f"x2={x2} is outside the boundary region of x1={x1}")
    sample = frak_implicit(1.0 + params.d1 * x2 / (params.d2 * shifted), n, w0)
    return (n / (n + 2) * shifted * sample.frak_w) ** ((n + 2) / n)


def length_scales(
    params: ModelParams, sol: RadialSolution, x1: float, x2: float
) -> LengthScales:
    sample = sample_potential(params, sol, x1, x2)
    n = params.n
    return LengthScales(
        torus_diam=float(np.sqrt(np.linalg.norm(sample.hess, 2))),
        fiber_diam=float(np.sqrt(class_coefficient(sample, params))),
        dist=float(np.hypot(x1, x2) ** ((n + 2) / (2.0 * n))),
        vol_exponent=4.0 * n / (n + 2),
    )


def calabi_ansatz_m1_residual(n: int, x: float) -> float:
    """u'' u'^(n-1) - (n+1)^n / n^(n+1) for u = x^((n+1)/n)."""
    if not x > 0:
        raise DomainError(f"x must be positive, got x={x}")
    du = (n + 1) / n * x ** (1.0 / n)
    d2u = (n + 1) / n**2 * x ** (1.0 / n - 1.0)
    return d2u * du ** (n - 1) - (n + 1) ** n / n ** (n + 1)
