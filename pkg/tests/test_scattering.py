import math

import numpy as np
import pytest

from isingff.errors import BranchCutError, DomainError
from isingff.formfactor import form_factor
from isingff.model import ModelPoint, low_weight, szego_prefactor
from isingff.scattering import (first_lambda_zero, fourier_coeffs,
                                fredholm_disc, g_entry, g_entry_series,
                                g_matrix, jost_minus, jost_plus,
                                marchenko_solve, marchenko_solve_at,
                                scattering_function, toeplitz_from_g,
                                truncation_size)
from isingff.specfun import elliptic_complete
from isingff.toeplitz_bops import ising_bops, toeplitz_correlation


class TestFourierCoeffs:
    def test_elliptic_examples(self):
        t = 0.36
        K, E = elliptic_complete(t)
        data = fourier_coeffs(t, 8)
        assert data.f(0) == pytest.approx(2 / math.pi * K, rel=1e-13)
        assert data.f(1) == pytest.approx(2 / math.pi / math.sqrt(t) * (K - E),
                                          rel=1e-13)
        assert data.f(-1) == data.f(1)
        assert data.fbar(0) == pytest.approx(
            2 / math.pi * ((t - 1) * K + 2 * E), rel=1e-13)
        assert data.fbar(1) == pytest.approx(
            -2 / (3 * math.pi) / math.sqrt(t) * ((t - 1) * K + (t + 1) * E),
            rel=1e-13)

    def test_t0_trivial(self):
        data = fourier_coeffs(0.0, 4)
        assert data.fbar(0) == 1.0
        assert data.f(0) == 1.0
        assert data.f(2) == 0.0

    def test_closed_vs_quadrature(self):
        # fourier_coeffs itself raises if the two routes drift past 1e-9;
        # assert the tighter 1e-10 agreement directly here
        from isingff.scattering import _coeff_quadrature
        for t in (0.2, 0.5):
            data = fourier_coeffs(t, 12)
            Fq, Fbq = _coeff_quadrature(t, 12)
            assert np.max(np.abs(data.F[:13] - Fq)) < 1e-10
            assert np.max(np.abs(data.Fbar[:13] - Fbq)) < 1e-10

    def test_decay_rate(self):
        t = 0.4
        data = fourier_coeffs(t, 40)
        # F_m ~ (pi (1-t))^(-1/2) m^(-1/2) t^(m/2)
        for m in (20, 30):
            ref = (math.pi * (1 - t)) ** -0.5 * m ** -0.5 * t ** (m / 2.0)
            assert data.f(m) == pytest.approx(ref, rel=0.05)


class TestJost:
    def test_special_values(self):
        assert jost_plus(0.0, 0.4) == pytest.approx(1.0)
        assert jost_minus(1e9, 0.4) == pytest.approx(1.0, abs=1e-9)

    def test_side_selector(self):
        from isingff.scattering import jost
        assert jost(0.3j, 0.4, "interior") == jost_plus(0.3j, 0.4)
        assert jost(2.0 + 1j, 0.4, "exterior") == jost_minus(2.0 + 1j, 0.4)
        with pytest.raises(DomainError):
            jost(0.3, 0.4, "above")

    def test_factorization_on_circle(self):
        t = 0.4
        for theta in 2 * math.pi * (np.arange(64) + 0.31) / 64:
            z = complex(math.cos(theta), math.sin(theta))
            val = low_weight(z, t) * jost_plus(z, t) * jost_minus(z, t)
            assert abs(val - 1.0) < 1e-12

    def test_scattering_function_positive_on_circle(self):
        t = 0.3
        z = complex(math.cos(1.1), math.sin(1.1))
        S = scattering_function(z, t)
        assert abs(S.imag) < 1e-14
        assert S.real == pytest.approx(1.0 / abs(1 - math.sqrt(t) * z), rel=1e-13)

    def test_branch_cut_errors(self):
        with pytest.raises(BranchCutError):
            jost_plus(1.0 / math.sqrt(0.4) + 0.5, 0.4)
        with pytest.raises(BranchCutError):
            jost_minus(0.5 * math.sqrt(0.4), 0.4)


class TestGEntry:
    def test_t0(self):
        assert g_entry(0, 0, 0.0) == 0.0
        assert g_entry(3, 1, 0.0) == 0.0
        assert g_entry(-1, -1, 0.0) == -1.0

    def test_elliptic_examples(self):
        t = 0.3
        K, E = elliptic_complete(t)
        pi2 = math.pi ** 2
        assert g_entry(0, 0, t) == pytest.approx(
            (-pi2 + 4 * (t - 1) * K ** 2 + 8 * K * E) / (2 * pi2), abs=1e-13)
        assert g_entry(-1, -1, t) == pytest.approx(
            -(pi2 + 8 * E * K + 4 * (t - 1) * K ** 2) / (2 * pi2), abs=1e-13)
        assert g_entry(-1, 0, t) == pytest.approx(
            (2 * E ** 2 - 4 * E * K - 2 * (t - 1) * K ** 2) / (pi2 * math.sqrt(t)),
            abs=1e-13)
        assert g_entry(1, 1, t) == pytest.approx(
            (-3 * pi2 * t + 4 * (t - 1) * (3 * t - 2) * K ** 2
             + 8 * (3 * t - 2) * K * E + 8 * (t + 1) * E ** 2) / (6 * pi2 * t),
            abs=1e-12)
        assert g_entry(0, 1, t) == pytest.approx(3 * g_entry(1, 0, t), rel=1e-12)
        assert g_entry(-1, 1, t) == pytest.approx(-3 * g_entry(1, -1, t), rel=1e-12)

    def test_anchor_identity(self):
        for t in np.arange(0.1, 0.75, 0.1):
            assert abs(g_entry(0, 0, t) + g_entry(-1, -1, t) + 1.0) < 1e-10

    @pytest.mark.parametrize("l,m", [(2, 1), (0, 5), (6, 0), (-1, 2), (3, 3)])
    def test_closed_form_vs_series(self, l, m):
        for t in (0.2, 0.5):
            assert g_entry(l, m, t) == pytest.approx(g_entry_series(l, m, t),
                                                     abs=1e-11)

    @pytest.mark.parametrize("t", [0.2, 0.5])
    def test_hypergeometric_kernel_block(self, t):
        # the whole 0..6 window agrees with the direct scattering sums
        for l in range(7):
            for m in range(7):
                assert abs(g_entry(l, m, t) - g_entry_series(l, m, t)) < 1e-11

    def test_transpose_symmetry_via_independent_sum(self):
        # Gbar_{l,m} := -sum F_{l+m'} Fbar_{m+m'} must equal G_{m,l}
        t = 0.35
        data = fourier_coeffs(t, 90)
        rng = np.random.default_rng(7)
        for _ in range(10):
            l, m = rng.integers(-1, 7, size=2)
            gbar = -sum(data.f(int(l) + mp) * data.fbar(int(m) + mp)
                        for mp in range(1, 70))
            assert gbar == pytest.approx(g_entry(int(m), int(l), t), abs=1e-11)


class TestFredholmDisc:
    def test_lambda_zero(self):
        assert fredholm_disc(ModelPoint("low", 0.3, 0.0, 2)) == pytest.approx(1.0)

    def test_borodin_okounkov(self):
        # Toeplitz determinant = (1-t)^(1/4) det[1+G]_n at lambda = 1
        n, t = 2, 0.3
        point = ModelPoint("low", t, 1.0, n)
        lhs = toeplitz_correlation(point)
        rhs = szego_prefactor(t) * fredholm_disc(point)
        assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_neumann_coefficient_is_f2(self):
        # d/d(lam^2) det at 0 = sum_{l>=n} G_{l,l} = f^(2)
        n, t = 0, 0.2
        N = truncation_size(t, n)
        G = g_matrix(n, N, t).entries
        f2 = form_factor(ModelPoint("low", t, 1.0, n), 1, with_error=False).value
        assert np.trace(G) == pytest.approx(f2, rel=1e-11)

    def test_truncation_stability(self):
        point = ModelPoint("low", 0.4, 1.0, 1)
        base = fredholm_disc(point)
        doubled = fredholm_disc(point, N=2 * truncation_size(0.4, 1))
        assert abs(base - doubled) < 1e-12
        fredholm_disc(point, check_doubling=True)   # must not raise

    def test_high_phase_rejected(self):
        with pytest.raises(DomainError):
            fredholm_disc(ModelPoint("high", 0.3, 1.0, 1))

    def test_no_real_zero_for_ising(self):
        assert first_lambda_zero(0.3, 0) is None

    def test_doubling_failure_raises(self):
        from isingff.errors import TruncationError
        with pytest.raises(TruncationError):
            fredholm_disc(ModelPoint("low", 0.5, 1.0, 0), N=4,
                          check_doubling=True)

    def test_singular_determinant_guard(self, monkeypatch):
        import isingff.scattering as sc
        from isingff.errors import SingularDeterminantError
        monkeypatch.setattr(sc, "first_lambda_zero", lambda *a, **k: 0.5)
        with pytest.raises(SingularDeterminantError):
            sc._fredholm_disc_at(0.3, 0.7, 0)
        with pytest.raises(SingularDeterminantError):
            sc.marchenko_solve_at(0.3, 0.7, 0)


class TestMarchenko:
    def test_lambda_small_expansions(self):
        # kappa ratio = 1 - lam^2 G_nn + O(lam^4); r_{n+1} = lam F_{n+1} + O(lam^3)
        t, n = 0.3, 0
        data = fourier_coeffs(t, 12)
        h = 1e-3
        vals = marchenko_solve_at(t, h, n)
        assert (vals.kappa_ratio - 1.0) / h ** 2 == pytest.approx(
            -g_entry(n, n, t), abs=1e-5)
        assert vals.r_next / h == pytest.approx(data.f(n + 1), abs=1e-5)
        assert vals.rbar_next / h == pytest.approx(data.fbar(n + 1), abs=1e-5)

    def test_kappa0_vs_toeplitz(self):
        # 1/kappa_0^2 = I_1/I_0 at lambda = 1
        t = 0.3
        st = ising_bops(t, 4)
        vals = marchenko_solve(ModelPoint("low", t, 1.0, 0))
        assert vals.kappa_ratio == pytest.approx(st.I[1] / st.I[0], abs=1e-12)
        assert vals.r_next == pytest.approx(st.r[1], abs=1e-11)
        assert vals.rbar_next == pytest.approx(st.rbar[1], abs=1e-11)

    def test_kappa_ratio_vs_exact_across_lambda(self):
        from isingff.elliptic_exact import exact_values
        t = 0.4
        for lam in (0.3, 0.6, 0.9):
            vals = marchenko_solve(ModelPoint("low", t, lam, 0))
            assert vals.kappa_ratio == pytest.approx(
                exact_values(t, lam).I1_over_I0, abs=1e-11)

    def test_start_at_minus_one(self):
        from isingff.elliptic_exact import exact_values
        t, lam = 0.4, 0.7
        vals = marchenko_solve_at(t, lam, -1)
        ref = exact_values(t, lam)
        assert vals.kappa_ratio == pytest.approx(ref.I0_over_Iminus1, abs=1e-10)
        assert vals.r_next == pytest.approx(ref.r0, abs=1e-10)
        assert vals.rbar_next == pytest.approx(ref.rbar0, abs=1e-10)


class TestToeplitzFromG:
    def test_n0_is_prefactor_times_det(self):
        point = ModelPoint("low", 0.3, 0.8, 0)
        assert toeplitz_from_g(point) == pytest.approx(
            szego_prefactor(0.3) * fredholm_disc(point), rel=1e-15)

    def test_matches_moment_route(self):
        point = ModelPoint("low", 0.25, 1.0, 3)
        assert toeplitz_from_g(point) == pytest.approx(
            toeplitz_correlation(point), abs=1e-9)

    def test_szego_limit(self):
        t = 0.3
        val = toeplitz_from_g(ModelPoint("low", t, 1.0, 24))
        assert abs(val - szego_prefactor(t)) < 1e-10
