import math

import numpy as np
import pytest

from isingff.errors import BudgetError
from isingff.formfactor import (correlation_series, form_factor,
                                small_t_coeffs)
from isingff.model import ModelPoint, szego_prefactor
from isingff.specfun import elliptic_complete
from isingff.toeplitz_bops import toeplitz_correlation


def _extract_leading(n, p, phase, ts, q=16):
    """Fit f / t^leading to a quadratic in t; returns (c0, c1)."""
    expo = (p * (n + p) if phase == "low"
            else n * (p + 0.5) + p * (p + 1))
    vals = [form_factor(ModelPoint(phase, t, 1.0, n), p, q=q,
                        with_error=False).value / t ** expo for t in ts]
    c2, c1, c0 = np.polyfit(ts, vals, 2)
    return c0, c1


class TestFormFactor:
    def test_vanishes_at_t0(self):
        for n, p in [(0, 1), (2, 1), (1, 2)]:
            ff = form_factor(ModelPoint("low", 0.0, 1.0, n), p, with_error=False)
            assert ff.value == 0.0

    def test_single_particle_is_elliptic(self):
        # f^(1)_{0,0} = (2/pi) K(t)
        t = 0.3
        K, _ = elliptic_complete(t)
        ff = form_factor(ModelPoint("high", t, 1.0, 0), 0)
        assert ff.value == pytest.approx(2 / math.pi * K, rel=1e-13)
        assert ff.est_error < 1e-13

    def test_low_leading_coeffs_at_small_t(self):
        # f^(2)_{0,0} = (t/4)(1 + (5/8) t + ...)
        c0, c1 = _extract_leading(0, 1, "low", [1e-3, 2e-3, 3e-3])
        assert c0 == pytest.approx(0.25, rel=1e-7)
        assert c1 / c0 == pytest.approx(5.0 / 8.0, rel=1e-4)

    def test_positivity(self):
        for t in (0.1, 0.5, 0.8):
            for p in (1, 2):
                ff = form_factor(ModelPoint("low", t, 1.0, 1), p,
                                 with_error=False)
                assert ff.value > 0.0

    def test_leading_power_law(self):
        # log f^(2p) / log t -> p(n+p)
        for n, p in [(0, 1), (1, 1), (0, 2)]:
            f3 = form_factor(ModelPoint("low", 1e-3, 1.0, n), p,
                             with_error=False).value
            f4 = form_factor(ModelPoint("low", 1e-4, 1.0, n), p,
                             with_error=False).value
            slope = (math.log(f3) - math.log(f4)) / (math.log(1e-3) - math.log(1e-4))
            assert slope == pytest.approx(p * (n + p), abs=0.02)

    def test_budget(self):
        with pytest.raises(BudgetError):
            form_factor(ModelPoint("low", 0.3, 1.0, 0), 4)

    def test_doubling_error_estimate(self):
        ff = form_factor(ModelPoint("low", 0.4, 1.0, 0), 2, q=16)
        assert ff.est_error < 1e-10


class TestSmallTCoeffs:
    def test_anchor_low_case(self):
        c0, c1 = small_t_coeffs(0, 1, "low")
        assert c0 == pytest.approx(0.25, rel=1e-14)
        assert c1 / c0 == pytest.approx(5.0 / 8.0, rel=1e-14)

    def test_general_n_p1_closed_form(self):
        # c0(n, p=1) = (1/2)_n (3/2)_n / (4 ((n+1)!)^2)
        from isingff.specfun import pochhammer
        for n in range(5):
            c0, _ = small_t_coeffs(n, 1, "low")
            ref = (pochhammer(0.5, n) * pochhammer(1.5, n)
                   / (4.0 * math.factorial(n + 1) ** 2))
            assert c0 == pytest.approx(ref, rel=1e-13)

    @pytest.mark.parametrize("n,p", [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2)])
    def test_low_against_quadrature(self, n, p):
        c0, c1 = small_t_coeffs(n, p, "low")
        c0_fit, c1_fit = _extract_leading(n, p, "low", [1e-3, 2e-3, 3e-3])
        assert c0_fit == pytest.approx(c0, rel=1e-3)
        assert c1_fit == pytest.approx(c1, rel=1e-3)

    @pytest.mark.parametrize("n,p", [(0, 0), (1, 0), (0, 1), (1, 1)])
    def test_high_against_quadrature(self, n, p):
        c0, c1 = small_t_coeffs(n, p, "high")
        c0_fit, c1_fit = _extract_leading(n, p, "high", [1e-3, 2e-3, 3e-3])
        assert c0_fit == pytest.approx(c0, rel=1e-3)
        assert c1_fit == pytest.approx(c1, rel=1e-3)

    def test_selberg_consistency(self):
        # quadrature / t^leading reproduces c0 to 0.1% at t = 1e-4
        for n in range(3):
            for p in (1, 2):
                c0, _ = small_t_coeffs(n, p, "low")
                val = form_factor(ModelPoint("low", 1e-4, 1.0, n), p, q=16,
                                  with_error=False).value
                assert val / 1e-4 ** (p * (n + p)) == pytest.approx(c0, rel=1e-3)


class TestCorrelationSeries:
    def test_lambda_zero_collapse(self):
        cs = correlation_series(ModelPoint("low", 0.37, 0.0, 3), p_max=2)
        assert cs.value == pytest.approx(szego_prefactor(0.37), rel=1e-15)

    def test_same_site(self):
        cs = correlation_series(ModelPoint("low", 0.0, 0.6, 0), p_max=2)
        assert cs.value == 1.0

    def test_matches_toeplitz(self):
        point = ModelPoint("low", 0.2, 1.0, 1)
        cs = correlation_series(point, p_max=3)
        ref = toeplitz_correlation(point)
        assert abs(cs.value - ref) < max(1e-10, cs.tail_estimate)

    def test_high_matches_toeplitz(self):
        point = ModelPoint("high", 0.25, 1.0, 2)
        cs = correlation_series(point, p_max=3)
        ref = toeplitz_correlation(point)
        assert cs.value == pytest.approx(ref, abs=1e-9)

    def test_terms_decreasing(self):
        cs = correlation_series(ModelPoint("low", 0.5, 1.0, 0), p_max=3,
                                with_error=False)
        vals = [term.value for term in cs.terms]
        ratios = [vals[i + 1] / vals[i] for i in range(len(vals) - 1)]
        assert all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))
