"""Real special functions: Gamma, Gauss 2F1 on [0, 1] and the integral profile F(x)."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import digamma

from nama.errors import ConvergenceError, DomainError
from nama.models import HypParams

logger = logging.getLogger(__name__)

# Lanczos approximation, g = 7, nine terms
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

SERIES_MAX_TERMS = 100_000
SERIES_REL_TOL = 1e-16
_SERIES_CHUNK = 256

# Above this argument the 1-z connection formula replaces the direct series
CONNECTION_THRESHOLD = 0.9
QUADRATURE_ABS_TOL = 1e-11
INTEGER_EXCESS_TERMS = 400


def _is_pole(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def _lanczos(x: float) -> float:
    x -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += coeff / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (x + 0.5) * math.exp(-t) * acc


def _gamma_any(x: float) -> float:
    """Gamma on the whole real line except the poles 0, -1, -2, ..."""
    if _is_pole(x):
        raise DomainError(f"Gamma has a pole at x={x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    return _lanczos(x)


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0, relative error around 1e-15."""
    if not x > 0:
        raise DomainError(f"gamma_fn needs a positive argument, got x={x}")
    return _gamma_any(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma, an entire function: zero at the poles of Gamma."""
    if _is_pole(x):
        return 0.0
    if x < 0.5:
        return math.sin(math.pi * x) * _lanczos(1.0 - x) / math.pi
    return 1.0 / _lanczos(x)


def pochhammer(alpha: float, k: int) -> float:
    """Rising factorial (alpha)_k = alpha (alpha+1) ... (alpha+k-1)."""
    if k < 0:
        raise DomainError(f"Pochhammer index must be non-negative, got k={k}")
    return float(np.prod(alpha + np.arange(k, dtype=float)))


def _direct_series(a: float, b: float, c: float, z: float) -> float:
    """Sum the Gauss series in chunks of consecutive term ratios.

    Stops at the first term that is exactly zero, or that is below
    SERIES_REL_TOL of the partial sum while term magnitudes decrease.
    """
    total = 1.0
    term = 1.0
    k = 0
    while k < SERIES_MAX_TERMS:
        ks = np.arange(k, k + _SERIES_CHUNK, dtype=float)
        ratios = (a + ks) * (b + ks) / ((c + ks) * (ks + 1.0)) * z
        terms = term * np.cumprod(ratios)
        partial = total + np.cumsum(terms)
        mags = np.abs(terms)
        previous = np.concatenate(([abs(term)], mags[:-1]))
        done = (terms == 0.0) | ((mags < SERIES_REL_TOL * np.abs(partial)) & (mags <= previous))
        if done.any():
            idx = int(np.argmax(done))
            used = k + idx + 1
            logger.debug("2F1(%g, %g; %g; %g) series stopped after %d terms", a, b, c, z, used)
            return float(partial[idx])
        total = float(partial[-1])
        term = float(terms[-1])
        k += _SERIES_CHUNK
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) series did not converge within {SERIES_MAX_TERMS} terms"
    )


def _connection(a: float, b: float, c: float, z: float) -> float:
    """2F1 through the linear transformation z -> 1 - z (c - a - b not an integer)."""
    s = c - a - b
    w = 1.0 - z
    gc = _gamma_any(c)
    first = gc * _gamma_any(s) * rgamma(c - a) * rgamma(c - b)
    second = gc * _gamma_any(-s) * rgamma(a) * rgamma(b)
    value = first * _direct_series(a, b, 1.0 - s, w)
    if second != 0.0:
        value += second * w**s * _direct_series(c - a, c - b, 1.0 + s, w)
    return value


def _integer_excess(a: float, b: float, m: int, z: float) -> float:
    """2F1[a, b; a+b+m; z] for integer m >= 0 through the logarithmic z -> 1 - z expansion."""
    w = 1.0 - z
    gc = _gamma_any(a + b + m)
    finite = 0.0
    if m > 0:
        term, total = 1.0, 0.0
        for k in range(m):
            total += term
            if k < m - 1:
                term *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k)) * w
        finite = _gamma_any(m) * gc * rgamma(a + m) * rgamma(b + m) * total

    ks = np.arange(INTEGER_EXCESS_TERMS, dtype=float)
    ratios = (a + m + ks[:-1]) * (b + m + ks[:-1]) / ((ks[:-1] + 1.0) * (ks[:-1] + m + 1.0)) * w
    terms = np.concatenate(([1.0], np.cumprod(ratios))) / math.factorial(m)
    psi = math.log(w) - digamma(ks + 1.0) - digamma(ks + m + 1.0)
    psi += digamma(a + ks + m) + digamma(b + ks + m)
    parts = terms * psi
    total = float(np.sum(parts))
    if abs(parts[-1]) > SERIES_REL_TOL * max(abs(total), 1.0):
        raise ConvergenceError(
            f"2F1({a}, {b}; {a + b + m}; {z}) logarithmic series did not converge "
            f"within {INTEGER_EXCESS_TERMS} terms"
        )
    return finite - (-w) ** m * gc * rgamma(a) * rgamma(b) * total


def hyp2f1(p: HypParams) -> float:
    """Gauss hypergeometric function 2F1[a, b; c; z] for real parameters, z in [0, 1]."""
    a, b, c, z = p.a, p.b, p.c, p.z
    if z == 0.0:
        return 1.0
    if z == 1.0:
        return gauss_at_one(a, b, c)
    terminating = _is_pole(a) or _is_pole(b)
    s = p.excess
    if z > CONNECTION_THRESHOLD and not terminating:
        if abs(s - round(s)) > 1e-9:
            return _connection(a, b, c, z)
        m = round(s)
        if m >= 0:
            return _integer_excess(a, b, m, z)
        # Euler: 2F1[a, b; c; z] = (1-z)^s 2F1[c-a, c-b; c; z]
        return (1.0 - z) ** s * hyp2f1(HypParams(c - a, c - b, c, z))
    return _direct_series(a, b, c, z)


def gauss_at_one(a: float, b: float, c: float) -> float:
    """Gauss's theorem: 2F1[a, b; c; 1] = G(c) G(c-a-b) / (G(c-a) G(c-b))."""
    if _is_pole(c):
        raise DomainError(f"2F1 is undefined for c={c} (non-positive integer)")
    if not c - a - b > 0:
        raise DomainError(f"2F1 diverges at z=1 when c-a-b <= 0 (c-a-b={c - a - b})")
    return _gamma_any(c) * _gamma_any(c - a - b) * rgamma(c - a) * rgamma(c - b)


def _check_profile_args(x: float, n: int) -> None:
    if x < 1:
        raise DomainError(f"the profile F(x) is defined for x >= 1, got x={x}")
    if n < 2:
        raise DomainError(f"the profile F(x) needs n >= 2, got n={n}")


def f_profile(x: float, n: int) -> float:
    """F(x) = integral from 1 to x of (1 - y^-2)^(-1/n) dy, in closed hypergeometric form."""
    _check_profile_args(x, n)
    if x == 1:
        return 0.0
    inner = hyp2f1(HypParams(-0.5, 1.0 / n, 0.5, 1.0 / (x * x)))
    return x * inner - gauss_at_one(-0.5, 1.0 / n, 0.5)


def f_profile_quadrature(x: float, n: int) -> float:
    """F(x) by adaptive quadrature after y = 1 + tau^(n/(n-1)).

    The substitution removes the (y-1)^(-1/n) endpoint singularity, leaving
    the smooth integrand m (y^2 / (y+1))^(1/n) with m = n/(n-1).
    """
    _check_profile_args(x, n)
    if x == 1:
        return 0.0
    m = n / (n - 1)

    def integrand(tau: float) -> float:
        y = 1.0 + tau**m
        return m * (y * y / (y + 1.0)) ** (1.0 / n)

    upper = (x - 1.0) ** (1.0 / m)
    value, abserr = quad(integrand, 0.0, upper, epsabs=1e-12, epsrel=1e-13, limit=200)
    if abserr > max(QUADRATURE_ABS_TOL, 1e-13 * abs(value)):
        raise ConvergenceError(
            f"quadrature of F({x}) for n={n} reached error estimate {abserr:.3g}"
        )
    return value


@dataclass(frozen=True)
class SpecialFunction:
    """A named entry point for command-line evaluation."""

    name: str
    func: Callable[..., float]
    arg_types: tuple[type, ...]
    description: str

    def call(self, raw_args: list[str]) -> float:
        if len(raw_args) != len(self.arg_types):
            raise DomainError(
                f"{self.name} takes {len(self.arg_types)} argument(s), got {len(raw_args)}"
            )
        try:
            args = [kind(raw) for kind, raw in zip(self.arg_types, raw_args)]
        except ValueError as e:
            raise DomainError(f"bad argument for {self.name}: {e}") from e
        return self.func(*args)


def _hyp2f1_args(a: float, b: float, c: float, z: float) -> float:
    return hyp2f1(HypParams(a, b, c, z))


SPECIAL_FUNCTIONS: dict[str, SpecialFunction] = {
    fn.name: fn
    for fn in (
        SpecialFunction("gamma", gamma_fn, (float,), "Gamma(x) for x > 0"),
        SpecialFunction("rgamma", rgamma, (float,), "1/Gamma(x) for any real x"),
        SpecialFunction("pochhammer", pochhammer, (float, int), "rising factorial (alpha)_k"),
        SpecialFunction("hyp2f1", _hyp2f1_args, (float, float, float, float), "2F1[a, b; c; z]"),
        SpecialFunction("gauss_at_one", gauss_at_one, (float, float, float), "2F1[a, b; c; 1]"),
        SpecialFunction("f_profile", f_profile, (float, int), "F(x), closed form"),
        SpecialFunction(
            "f_profile_quadrature", f_profile_quadrature, (float, int), "F(x), by quadrature"
        ),
    )
}
