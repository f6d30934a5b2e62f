"""Core data models."""

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np
from scipy.interpolate import BPoly

from nama.errors import DomainError, RangeError

# Relative slack when deciding whether a query abscissa lies on a solution's grid
_RANGE_SLACK = 1e-12


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HypParams:
    """Parameters of a Gauss hypergeometric evaluation 2F1[a, b; c; z]."""

    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.c):
            raise DomainError(f"2F1 is undefined for c={self.c} (non-positive integer)")
        if not 0.0 <= self.z <= 1.0:
            raise DomainError(f"2F1 argument must lie in [0, 1], got z={self.z}")
        if self.z == 1.0 and self.c - self.a - self.b <= 0:
            raise DomainError(
                f"2F1 diverges at z=1 when c-a-b <= 0 (c-a-b={self.c - self.a - self.b})"
            )

    @property
    def excess(self) -> float:
        """c - a - b, which controls convergence at z = 1."""
        return self.c - self.a - self.b


@dataclass(frozen=True)
class BoundaryData:
    """Boundary triple (w0, b1, beta) of the normalized ODE at t -> 0."""

    n: int
    w0: float
    b1: float
    beta: float


@dataclass(frozen=True)
class FrakSample:
    """One point of the second reformulation: s, frak_w(s) and its s-derivative."""

    s: float
    frak_w: float
    frak_wp: float


@dataclass(frozen=True)
class SeriesExpansion:
    """frak_w(s) as a power series in q = (s-1)^(n/(n-1)) near s = 1."""

    n: int
    w0: float
    coeffs: tuple[float, ...]
    order: int

    @property
    def exponent(self) -> float:
        return self.n / (self.n - 1)

    def frak_w(self, sigma: float, order: int | None = None) -> float:
        """Evaluate the truncated series at s = 1 + sigma."""
        order = self.order if order is None else order
        q = sigma**self.exponent
        return float(np.polynomial.polynomial.polyval(q, self.coeffs[: order + 1]))

    def frak_wp(self, sigma: float, order: int | None = None) -> float:
        """d frak_w / ds of the truncated series at s = 1 + sigma (sigma > 0)."""
        order = self.order if order is None else order
        m = self.exponent
        terms = enumerate(self.coeffs[: order + 1])
        return float(sum(k * m * c * sigma ** (k * m - 1) for k, c in terms if k))


@dataclass(frozen=True, eq=False)
class RadialSolution:
    """A validated numerical solution w(t) of the normalized ODE on a t-grid.

    Samples are stored column-wise. Dense output takes (w, w') from the piecewise
    quintic Hermite interpolant through (w, w', w'') and w'' from the ODE at
    the interpolated state.
    """

    n: int
    w0: float
    t: np.ndarray
    w: np.ndarray
    wp: np.ndarray
    wpp: np.ndarray
    tol: float

    def __post_init__(self):
        t = self.t
        if t.ndim != 1 or len(t) < 2:
            raise DomainError("a radial solution needs at least two samples")
        if not (t[0] > 0 and np.all(np.diff(t) > 0)):
            raise DomainError("radial solution abscissae must be positive and strictly increasing")
        if not np.all(self.w > 0):
            raise DomainError("radial solution has w <= 0 (Kahler condition violated)")
        if not np.all(self.wpp > 0):
            raise DomainError("radial solution has w'' <= 0 (Kahler condition violated)")
        if not np.all(self.w + (1.0 - t) * self.wp > 0):
            raise DomainError("radial solution has w + (1-t)w' <= 0 (Kahler condition violated)")

    @property
    def t_min(self) -> float:
        return float(self.t[0])

    @property
    def t_max(self) -> float:
        return float(self.t[-1])

    def __len__(self) -> int:
        return len(self.t)

    def samples(self) -> Iterator[tuple[float, float, float, float]]:
        for row in zip(self.t, self.w, self.wp, self.wpp):
            yield tuple(float(x) for x in row)

    def residuals(self) -> np.ndarray:
        """ODE residual at every stored sample."""
        from nama.ode import ode_residual_w

        return ode_residual_w(self.t, self.w, self.wp, self.wpp, self.n)

    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals())))

    def kahler_ok(self) -> bool:
        """w > 0, w'' > 0 and w + (1-t)w' > 0 at every sample."""
        return bool(
            np.all(self.w > 0)
            and np.all(self.wpp > 0)
            and np.all(self.w + (1.0 - self.t) * self.wp > 0)
        )

    @cached_property
    def _interpolant(self) -> BPoly:
        return BPoly.from_derivatives(self.t, np.column_stack([self.w, self.wp, self.wpp]))

    @cached_property
    def _interpolant_d1(self) -> BPoly:
        return self._interpolant.derivative(1)

    def covers(self, t: float) -> bool:
        lo, hi = self.t_min, self.t_max
        return lo * (1 - _RANGE_SLACK) <= t <= hi * (1 + _RANGE_SLACK)

    def _dense(self, t):
        from nama.ode import wpp_from_ode

        w, wp = self._interpolant(t), self._interpolant_d1(t)
        return w, wp, wpp_from_ode(t, w, wp, self.n)

    def evaluate(self, t: float) -> tuple[float, float, float]:
        """Dense output (w, w', w'') at t."""
        if not self.covers(t):
            raise RangeError(f"t={t} lies outside the solution grid [{self.t_min}, {self.t_max}]")
        t = min(max(t, self.t_min), self.t_max)
        return tuple(float(x) for x in self._dense(t))

    def dense_residuals(self, ts: np.ndarray) -> np.ndarray:
        """ODE residual of the dense output at caller-chosen abscissae."""
        from nama.ode import ode_residual_w

        ts = np.clip(np.asarray(ts, dtype=float), self.t_min, self.t_max)
        return ode_residual_w(ts, *self._dense(ts), self.n)

    def resample(self, ts: np.ndarray) -> RadialSolution:
        """Dense output on a caller-chosen increasing grid inside the solution range."""
        ts = np.asarray(ts, dtype=float)
        if not (self.covers(float(ts[0])) and self.covers(float(ts[-1]))):
            raise RangeError(
                f"resample grid [{ts[0]}, {ts[-1]}] leaves [{self.t_min}, {self.t_max}]"
            )
        ts = np.clip(ts, self.t_min, self.t_max)
        w, wp, wpp = self._dense(ts)
        return RadialSolution(n=self.n, w0=self.w0, t=ts, w=w, wp=wp, wpp=wpp, tol=self.tol)


@dataclass(frozen=True)
class LegendreProfile:
    """Rescaled Legendre transform g(y) = frak_w*(p_star * y) / w0 on [0, 1]."""

    n: int
    w0: float
    p_star: float
    g: Callable[[float], float]


@dataclass(frozen=True)
class MatchResult:
    n: int
    w0_closed: float
    w0_shot: float
    w_at_one: float
    wp_at_one: float
    residual: float  # w'(1) - w(1)/2 at w0_shot

    @property
    def route_gap(self) -> float:
        return abs(self.w0_closed - self.w0_shot)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "w0_closed": self.w0_closed,
            "w0_shot": self.w0_shot,
            "w0_difference": self.route_gap,
            "w_at_one": self.w_at_one,
            "wp_at_one": self.wp_at_one,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class ModelParams:
    """Dimension and divisor degrees; fixes every constant of the model."""

    n: int
    d1: int = 1
    d2: int = 1

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(
                f"the generalized Calabi ansatz needs n >= 3 (got n={self.n}); "
                "for n=2 the matching condition has no positive solution"
            )
        if self.d1 < 1 or self.d2 < 1:
            raise DomainError(f"divisor degrees must be positive (d1={self.d1}, d2={self.d2})")

    def swapped(self) -> ModelParams:
        return ModelParams(n=self.n, d1=self.d2, d2=self.d1)


@dataclass(frozen=True)
class NormalizationConstants:
    nama_const: float
    k0_reduced: float  # K0 without the intersection number on Y
    v0: float
    a: float

    def to_dict(self) -> dict[str, float]:
        return {
            "nama_const": self.nama_const,
            "k0_reduced": self.k0_reduced,
            "v0": self.v0,
            "a": self.a,
        }


@dataclass(frozen=True, eq=False)
class PotentialSample:
    """u, its gradient and Hessian at one point (x1, x2) of the logarithmic base."""

    x1: float
    x2: float
    t: float
    u: float
    du: tuple[float, float]
    hess: np.ndarray

    @property
    def radius(self) -> float:
        return float(np.hypot(self.x1, self.x2))


@dataclass
class Check:
    """One row of the verification report."""

    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        d = {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "threshold": self.threshold,
        }
        if self.detail:
            d["detail"] = self.detail
        return d
