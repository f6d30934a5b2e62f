"""Tests for Gamma, 2F1 and the profile F(x)."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import special

from nama import specfun
from nama.errors import ConvergenceError, DomainError
from nama.models import HypParams
from nama.specfun import (
    SPECIAL_FUNCTIONS,
    f_profile,
    f_profile_quadrature,
    gamma_fn,
    gauss_at_one,
    hyp2f1,
    pochhammer,
    rgamma,
)


class TestGamma:
    def test_unit(self):
        assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_half_is_sqrt_pi(self):
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_golden_values(self, golden):
        for x, expected in golden["gamma"]:
            assert gamma_fn(x) == pytest.approx(expected, rel=1e-13)

    def test_matches_scipy(self):
        for x in np.linspace(0.05, 50.0, 137):
            assert gamma_fn(float(x)) == pytest.approx(special.gamma(x), rel=1e-12)

    def test_recurrence(self):
        for x in np.linspace(0.1, 49.0, 100):
            x = float(x)
            assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -1.5])
    def test_nonpositive_raises(self, x):
        with pytest.raises(DomainError):
            gamma_fn(x)


class TestRgamma:
    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0])
    def test_zero_at_poles(self, x):
        assert rgamma(x) == 0.0

    def test_negative_half(self, golden):
        assert rgamma(-0.5) == pytest.approx(golden["rgamma_minus_half"], rel=1e-13)

    def test_inverse_of_gamma(self):
        for x in (0.3, 1.7, 4.2, 11.5):
            assert rgamma(x) * gamma_fn(x) == pytest.approx(1.0, rel=1e-14)


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(0.37, 0) == 1.0

    def test_factorial(self):
        assert pochhammer(1.0, 5) == 120.0

    def test_consistency(self):
        for alpha in (0.5, -1 / 3, 2 / 3, 2.25):
            for k in range(12):
                assert pochhammer(alpha, k + 1) == pytest.approx(
                    pochhammer(alpha, k) * (alpha + k), rel=1e-14, abs=1e-300
                )

    def test_negative_index_raises(self):
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)


class TestHyp2f1:
    def test_zero_argument(self):
        assert hyp2f1(HypParams(0.5, -1 / 3, 2 / 3, 0.0)) == 1.0

    def test_log_identity(self):
        assert hyp2f1(HypParams(1.0, 1.0, 2.0, 0.5)) == pytest.approx(2 * math.log(2), rel=1e-14)

    def test_gauss_value_at_one(self):
        expected = gamma_fn(2 / 3) * math.sqrt(math.pi) / gamma_fn(1 / 6)
        assert hyp2f1(HypParams(0.5, -1 / 3, 2 / 3, 1.0)) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize(
        "a,b,c",
        [
            (0.5, -1 / 3, 2 / 3),
            (0.5, -0.25, 0.75),
            (-0.5, 0.25, 0.5),
            (-0.5, 1 / 3, 0.5),
            (1.5, 0.3, 2.7),
        ],
    )
    @pytest.mark.parametrize("z", [0.1, 0.5, 0.85, 0.9, 0.95, 0.99, 0.999])
    def test_matches_scipy(self, a, b, c, z):
        assert hyp2f1(HypParams(a, b, c, z)) == pytest.approx(special.hyp2f1(a, b, c, z), rel=1e-11)

    def test_terminating_series(self):
        b, c, z = 0.7, 1.3, 0.95
        expected = 1 - 2 * b * z / c + b * (b + 1) * z**2 / (c * (c + 1))
        assert hyp2f1(HypParams(-2.0, b, c, z)) == pytest.approx(expected, rel=1e-14)

    def test_agrees_with_gauss_near_one(self):
        a, b, c = 0.5, -0.25, 0.75
        near = hyp2f1(HypParams(a, b, c, 1 - 1e-14))
        assert near == pytest.approx(gauss_at_one(a, b, c), rel=1e-6)

    @pytest.mark.parametrize(
        "a,b,c", [(0.5, 0.5, 1.0), (0.5, 0.5, 2.0), (0.3, 0.4, 2.7), (0.7, 0.8, 0.5)]
    )
    @pytest.mark.parametrize("z", [0.95, 0.999, 0.99999, 1 - 1e-8])
    def test_integer_excess_near_one(self, a, b, c, z):
        assert hyp2f1(HypParams(a, b, c, z)) == pytest.approx(special.hyp2f1(a, b, c, z), rel=1e-9)

    def test_integer_excess_tends_to_gauss_value(self):
        near = hyp2f1(HypParams(0.5, 0.5, 2.0, 1 - 1e-12))
        assert near == pytest.approx(4 / math.pi, abs=1e-9)

    def test_integer_excess_with_terminating_transform(self):
        # 2F1[a, b; a; z] = (1-z)^(-b)
        z = 0.99999
        assert hyp2f1(HypParams(1.5, 1.0, 1.5, z)) == pytest.approx(1 / (1 - z), rel=1e-12)

    def test_invalid_c(self):
        with pytest.raises(DomainError):
            HypParams(0.5, 0.5, -2.0, 0.5)

    def test_divergent_at_one(self):
        with pytest.raises(DomainError):
            HypParams(1.0, 1.0, 2.0, 1.0)

    def test_argument_outside_unit_interval(self):
        with pytest.raises(DomainError):
            HypParams(0.5, 0.5, 1.5, 1.2)

    def test_series_cap(self, monkeypatch):
        monkeypatch.setattr(specfun, "_SERIES_CHUNK", 4)
        monkeypatch.setattr(specfun, "SERIES_MAX_TERMS", 8)
        with pytest.raises(ConvergenceError):
            hyp2f1(HypParams(0.5, 0.5, 1.5, 0.8))


class TestGaussAtOne:
    def test_a_zero(self):
        assert gauss_at_one(0.0, 0.3, 1.7) == pytest.approx(1.0, rel=1e-14)

    def test_n3_member(self, golden):
        assert gauss_at_one(0.5, -1 / 3, 2 / 3) == pytest.approx(golden["gauss_n3"], abs=1e-5)

    def test_n4_member(self):
        expected = special.gamma(0.75) * special.gamma(0.5) / special.gamma(0.25)
        assert gauss_at_one(0.5, -0.25, 0.75) == pytest.approx(expected, rel=1e-13)

    def test_pole_in_denominator_gives_zero(self):
        # n=2 member of the family: c - a = 0
        assert gauss_at_one(0.5, -0.5, 0.5) == 0.0

    def test_divergent(self):
        with pytest.raises(DomainError):
            gauss_at_one(1.0, 1.0, 2.0)


class TestProfile:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_zero_at_one(self, n):
        assert f_profile(1.0, n) == 0.0
        assert f_profile_quadrature(1.0, n) == 0.0

    def test_below_one_raises(self):
        with pytest.raises(DomainError):
            f_profile(0.99, 3)
        with pytest.raises(DomainError):
            f_profile_quadrature(0.5, 3)

    def test_linear_growth(self):
        assert f_profile(1e6, 3) / 1e6 == pytest.approx(1.0, abs=1e-4)

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("x", [1.001, 1.1, 2.0, 10.0, 50.0])
    def test_closed_form_matches_quadrature(self, x, n):
        assert abs(f_profile(x, n) - f_profile_quadrature(x, n)) <= 1e-10

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_leading_behaviour_near_one(self, n):
        eps = 1e-6
        leading = n / (n - 1) * 2 ** (-1 / n) * eps ** ((n - 1) / n)
        assert f_profile(1 + eps, n) == pytest.approx(leading, rel=1e-3)

    def test_monotone_and_above_chord(self):
        xs = np.geomspace(1.0001, 100.0, 60)
        values = [f_profile(float(x), 4) for x in xs]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(v >= x - 1 for v, x in zip(values, xs))


class TestRegistry:
    def test_call_parses_arguments(self):
        value = SPECIAL_FUNCTIONS["hyp2f1"].call(["1", "1", "2", "0.5"])
        assert value == pytest.approx(2 * math.log(2), rel=1e-14)

    def test_integer_arguments(self):
        value = SPECIAL_FUNCTIONS["f_profile"].call(["2", "3"])
        assert value == pytest.approx(f_profile(2.0, 3), rel=1e-15)

    def test_wrong_arity(self):
        with pytest.raises(DomainError):
            SPECIAL_FUNCTIONS["gamma"].call(["1", "2"])

    def test_bad_number(self):
        with pytest.raises(DomainError):
            SPECIAL_FUNCTIONS["gamma"].call(["one"])
