"""Tests for data models."""

from __future__ import annotations

import numpy as np
import pytest

from nama.errors import DomainError, RangeError
from nama.models import (
    Check,
    HypParams,
    MatchResult,
    ModelParams,
    RadialSolution,
    SeriesExpansion,
)


def _quadratic_solution(ts=None) -> RadialSolution:
    """w = 1 + t^2: not an ODE solution, but inside the Kahler cone on [0.1, 2]."""
    t = np.linspace(0.1, 2.0, 20) if ts is None else np.asarray(ts)
    return RadialSolution(
        n=3, w0=1.0, t=t, w=1 + t**2, wp=2 * t, wpp=np.full_like(t, 2.0), tol=1e-9
    )


class TestHypParams:
    def test_excess(self):
        assert HypParams(0.5, -0.25, 0.75, 0.3).excess == pytest.approx(0.5)

    def test_valid_at_one(self):
        HypParams(0.5, -1 / 3, 2 / 3, 1.0)

    @pytest.mark.parametrize("c", [0.0, -1.0, -3.0])
    def test_c_at_pole(self, c):
        with pytest.raises(DomainError, match="non-positive integer"):
            HypParams(0.5, 0.5, c, 0.5)

    def test_negative_noninteger_c_allowed(self):
        assert HypParams(0.5, 0.5, -1.5, 0.5).c == -1.5

    @pytest.mark.parametrize("z", [-0.1, 1.5])
    def test_z_range(self, z):
        with pytest.raises(DomainError):
            HypParams(0.5, 0.5, 1.5, z)


class TestSeriesExpansion:
    def test_evaluation(self):
        series = SeriesExpansion(n=3, w0=1.0, coeffs=(1.0, 2.0, 3.0), order=2)
        q = 0.04**1.5
        assert series.frak_w(0.04) == pytest.approx(1 + 2 * q + 3 * q * q, rel=1e-15)
        assert series.frak_w(0.04, order=1) == pytest.approx(1 + 2 * q, rel=1e-15)

    def test_derivative(self):
        series = SeriesExpansion(n=3, w0=1.0, coeffs=(1.0, 2.0, 3.0), order=2)
        sigma = 0.04
        expected = 2 * 1.5 * sigma**0.5 + 3 * 3.0 * sigma**2
        assert series.frak_wp(sigma) == pytest.approx(expected, rel=1e-14)


class TestRadialSolution:
    def test_length_and_bounds(self):
        sol = _quadratic_solution()
        assert len(sol) == 20
        assert sol.t_min == pytest.approx(0.1)
        assert sol.t_max == pytest.approx(2.0)

    def test_dense_output_reproduces_polynomial(self):
        sol = _quadratic_solution()
        w, wp, _ = sol.evaluate(0.55)
        assert (w, wp) == pytest.approx((1 + 0.55**2, 1.1), rel=1e-12)

    def test_dense_second_derivative_solves_the_ode(self):
        sol = _quadratic_solution()
        w, wp, wpp = sol.evaluate(0.55)
        assert wpp == pytest.approx(1 / (2 * w**3 * (w + 0.45 * wp)), rel=1e-14)
        assert sol.resample([0.3, 0.55]).wpp[1] == pytest.approx(wpp, rel=1e-14)

    def test_dense_residuals_vanish_between_samples(self):
        sol = _quadratic_solution()
        midpoints = 0.5 * (sol.t[:-1] + sol.t[1:])
        assert np.max(np.abs(sol.dense_residuals(midpoints))) < 1e-14
        # stored w'' = 2 is not an ODE solution
        assert sol.max_residual() > 0.1

    def test_evaluate_outside_range(self):
        with pytest.raises(RangeError):
            _quadratic_solution().evaluate(2.5)

    def test_range_error_is_domain_error(self):
        with pytest.raises(DomainError):
            _quadratic_solution().evaluate(0.01)

    def test_covers_endpoints_with_slack(self):
        sol = _quadratic_solution()
        assert sol.covers(2.0 * (1 + 1e-14))
        assert not sol.covers(2.0 * (1 + 1e-9))

    def test_resample(self):
        ts = np.geomspace(0.2, 1.5, 7)
        resampled = _quadratic_solution().resample(ts)
        np.testing.assert_allclose(resampled.t, ts)
        np.testing.assert_allclose(resampled.w, 1 + ts**2, rtol=1e-12)

    def test_resample_outside(self):
        with pytest.raises(RangeError):
            _quadratic_solution().resample([0.05, 1.0])

    def test_samples(self):
        rows = list(_quadratic_solution([0.5, 1.0]).samples())
        assert rows == [(0.5, 1.25, 1.0, 2.0), (1.0, 2.0, 2.0, 2.0)]

    def test_residuals(self):
        sol = _quadratic_solution([0.5, 1.0])
        # n=3: w'' w^3 (w + (1-t) w') - 1/2
        expected = [2 * 1.25**3 * (1.25 + 0.5) - 0.5, 2 * 8.0 * 2.0 - 0.5]
        np.testing.assert_allclose(sol.residuals(), expected)
        assert sol.max_residual() == pytest.approx(31.5)
        assert sol.kahler_ok()

    def test_single_sample_rejected(self):
        with pytest.raises(DomainError, match="two samples"):
            _quadratic_solution([0.5])

    def test_unsorted_rejected(self):
        with pytest.raises(DomainError, match="strictly increasing"):
            _quadratic_solution([0.5, 0.4])

    def test_nonpositive_w_rejected(self):
        t = np.array([0.5, 1.0])
        with pytest.raises(DomainError, match="w <= 0"):
            RadialSolution(n=3, w0=1.0, t=t, w=np.array([1.0, -1.0]), wp=t, wpp=t, tol=1e-9)

    def test_concave_rejected(self):
        t = np.array([0.5, 1.0])
        with pytest.raises(DomainError, match="w'' <= 0"):
            RadialSolution(n=3, w0=1.0, t=t, w=t, wp=t, wpp=-t, tol=1e-9)

    def test_degenerate_base_rejected(self):
        t = np.array([0.5, 0.75])
        with pytest.raises(DomainError, match="Kahler"):
            RadialSolution(n=3, w0=1.0, t=t, w=t, wp=np.array([-5.0, -5.0]), wpp=t, tol=1e-9)


class TestMatchResult:
    def test_to_dict(self):
        match = MatchResult(
            n=3, w0_closed=1.25, w0_shot=1.0, w_at_one=0.9, wp_at_one=0.45, residual=0.0
        )
        d = match.to_dict()
        assert d["w0_difference"] == pytest.approx(0.25)
        assert list(d) == [
            "n",
            "w0_closed",
            "w0_shot",
            "w0_difference",
            "w_at_one",
            "wp_at_one",
            "residual",
        ]


class TestModelParams:
    def test_defaults(self):
        params = ModelParams(n=4)
        assert (params.d1, params.d2) == (1, 1)

    def test_swapped(self):
        assert ModelParams(3, d1=1, d2=2).swapped() == ModelParams(3, d1=2, d2=1)

    def test_n2_rejected(self):
        with pytest.raises(DomainError, match="no positive solution"):
            ModelParams(n=2)

    def test_nonpositive_degree(self):
        with pytest.raises(DomainError):
            ModelParams(n=3, d1=0)


class TestCheck:
    def test_to_dict_without_detail(self):
        assert Check("a", True, 1e-12, 1e-10).to_dict() == {
            "name": "a",
            "passed": True,
            "value": 1e-12,
            "threshold": 1e-10,
        }

    def test_to_dict_with_detail(self):
        assert Check("a", False, 1.0, 0.1, detail="why").to_dict()["detail"] == "why"
