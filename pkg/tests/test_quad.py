import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import beta as beta_fn

from isingff.errors import AccuracyError, DomainError
from isingff.model import log_moment, low_weight
from isingff.quad import circle_moments, gauss_jacobi_rule


class TestGaussJacobi:
    def test_midpoint(self):
        rule = gauss_jacobi_rule(1, 0.0, 0.0)
        assert rule.nodes[0] == pytest.approx(0.5)
        assert rule.weights[0] == pytest.approx(1.0)

    def test_two_point_legendre(self):
        rule = gauss_jacobi_rule(2, 0.0, 0.0)
        ref = [0.5 - 0.5 / math.sqrt(3), 0.5 + 0.5 / math.sqrt(3)]
        assert rule.nodes == pytest.approx(ref)

    def test_beta_mass(self):
        # sum of weights reproduces int_0^1 x^(-1/2) (1-x)^(1/2) dx = pi/2
        rule = gauss_jacobi_rule(8, 0.5, -0.5)
        assert rule.weights.sum() == pytest.approx(math.pi / 2, rel=1e-13)

    @pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (-0.5, 0.5),
                                            (0.5, -0.5), (1.5, 2.5)])
    def test_exactness(self, alpha, beta):
        q = 6
        rule = gauss_jacobi_rule(q, alpha, beta)
        for deg in range(2 * q):
            val = float(np.sum(rule.weights * rule.nodes ** deg))
            ref = beta_fn(beta + deg + 1.0, alpha + 1.0)
            assert val == pytest.approx(ref, rel=1e-12), deg

    @settings(max_examples=30, deadline=None)
    @given(q=st.integers(2, 10), alpha=st.floats(-0.9, 2.0),
           beta=st.floats(-0.9, 2.0))
    def test_exactness_property(self, q, alpha, beta):
        rule = gauss_jacobi_rule(q, alpha, beta)
        deg = 2 * q - 1
        val = float(np.sum(rule.weights * rule.nodes ** deg))
        ref = beta_fn(beta + deg + 1.0, alpha + 1.0)
        assert abs(val / ref - 1.0) < 1e-11

    def test_parameter_errors(self):
        with pytest.raises(DomainError):
            gauss_jacobi_rule(4, -1.0, 0.0)
        with pytest.raises(DomainError):
            gauss_jacobi_rule(0, 0.0, 0.0)


class TestCircleMoments:
    def test_unit_symbol(self):
        tab = circle_moments(lambda z: np.ones_like(z), 6)
        assert tab[0] == pytest.approx(1.0, abs=1e-14)
        for k in range(1, 7):
            assert abs(tab[k]) < 1e-14 and abs(tab[-k]) < 1e-14

    def test_ising_symbol_vs_fine_grid(self):
        t = 0.25
        tab = circle_moments(lambda z: low_weight(z, t), 12)
        fine = circle_moments(lambda z: low_weight(z, t), 12, M=8192)
        for k in range(-12, 13):
            assert tab[k] == pytest.approx(fine[k], abs=1e-12)

    def test_non_hermitian_and_small_t(self):
        tab = circle_moments(lambda z: low_weight(z, 0.4), 8)
        assert abs(tab[1] - tab[-1]) > 1e-3           # w_k != w_{-k}
        tiny = circle_moments(lambda z: low_weight(z, 1e-10), 4)
        assert tiny[0] == pytest.approx(1.0, abs=1e-9)
        assert abs(tiny[2]) < 1e-9

    def test_log_moment_identity(self):
        # Fourier coefficients of log of the symbol: c_p = t^(p/2)/(2p)
        t = 0.36
        tab = circle_moments(lambda z: np.log(low_weight(z, t)), 8)
        for p in range(1, 9):
            assert tab[p] == pytest.approx(log_moment(p, t), abs=1e-13)
            assert tab[-p] == pytest.approx(log_moment(-p, t), abs=1e-13)

    def test_szego_sum(self):
        # exp(sum p c_p c_-p) = (1-t)^(1/4)
        t = 0.5
        s = sum(p * log_moment(p, t) * log_moment(-p, t) for p in range(1, 200))
        assert math.exp(s) == pytest.approx((1 - t) ** 0.25, rel=1e-13)

    def test_doubling_guard(self):
        # a symbol with a jump cannot pass the doubling test
        with pytest.raises(AccuracyError):
            circle_moments(lambda z: np.sign(z.real) + 0.0j, 4, M=64)

    def test_high_symbol_winding_structure(self):
        # the high-phase symbol is -z^{-1} w~(z) with w~ the
        # reversed-moment low symbol: its moments are -w~_{k+1}
        from isingff.model import high_weight
        t = 0.4
        high = circle_moments(lambda z: high_weight(z, t), 6)
        wtil = circle_moments(lambda z: low_weight(z, t), 8).reversed()
        for k in range(-6, 7):
            assert high[k] == pytest.approx(-wtil[k + 1], abs=1e-13)
