import pytest

from isingff.errors import DomainError
from isingff.model import ModelPoint
from isingff.painleve import sigma_residual


class TestSigmaResidual:
    def test_lambda_zero_trivial(self):
        # det route at lam = 0 is identically 1: sigma = 0, residual = 0
        s = sigma_residual(ModelPoint("low", 0.3, 0.0, 1), route="fredholm-disc")
        assert s.sigma == pytest.approx(0.0, abs=1e-12)
        assert s.residual == pytest.approx(0.0, abs=1e-12)

    def test_proven_case_small_residual(self):
        s = sigma_residual(ModelPoint("low", 0.3, 1.0, 1), route="toeplitz",
                           h=1e-3)
        assert abs(s.residual) < 1e-5
        assert not s.conjecture_level

    def test_routes_agree_at_lambda_one(self):
        # the shift -t/4 exactly absorbs the (1-t)^(1/4) prefactor
        a = sigma_residual(ModelPoint("low", 0.4, 1.0, 2), route="toeplitz")
        b = sigma_residual(ModelPoint("low", 0.4, 1.0, 2), route="fredholm-disc")
        assert a.sigma == pytest.approx(b.sigma, abs=1e-11)

    def test_high_phase_shift(self):
        s = sigma_residual(ModelPoint("high", 0.4, 1.0, 2), route="toeplitz")
        assert abs(s.residual) < 1e-5

    def test_conjecture_level_diagnostic(self):
        s = sigma_residual(ModelPoint("low", 0.4, 0.7, 2),
                           route="fredholm-disc", h=1e-3)
        assert s.conjecture_level
        # reported, not gated; for the record the residual is in fact small
        assert abs(s.residual) < 1e-4

    def test_stencil_order(self):
        # truncation-dominated regime: residual scales at least O(h^2)
        point = ModelPoint("low", 0.35, 1.0, 1)
        r_big = sigma_residual(point, route="fredholm-disc", h=4e-2).residual
        r_half = sigma_residual(point, route="fredholm-disc", h=2e-2).residual
        assert abs(r_half) < 0.35 * abs(r_big) + 1e-9

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            sigma_residual(ModelPoint("low", 0.002, 1.0, 1))
        with pytest.raises(DomainError):
            sigma_residual(ModelPoint("low", 0.3, 0.5, 1), route="toeplitz")
        with pytest.raises(DomainError):
            sigma_residual(ModelPoint("high", 0.3, 1.0, 1),
                           route="fredholm-disc")
        with pytest.raises(DomainError):
            sigma_residual(ModelPoint("low", 0.3, 1.0, 1), route="nope")
