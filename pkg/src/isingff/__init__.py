"""Diagonal Ising correlations by four cross-validated numerical routes.

The same quantity C(n,n;lambda) is computed from trigonometric-moment
Toeplitz determinants, direct multiple-integral form factors, a
continuous Appell-kernel Fredholm determinant and a discrete
hypergeometric-kernel determinant, plus closed-form elliptic/theta
evaluations at n = 0 and a Painleve VI sigma-form residual check.
"""

from .crosscheck import (CrosscheckReport, correlate, crosscheck_point,
                         parse_grid, run_crosscheck)
from .elliptic_exact import (ExactValues, LambdaCoordinates, exact_values,
                             lambda_series)
from .formfactor import (CorrelationSeries, FormFactorValue,
                         correlation_series, form_factor, small_t_coeffs)
from .fredholm_cont import (ContinuousFredholm, fredholm_cont, kernel_high,
                            kernel_low)
from .model import ModelPoint, high_weight, low_weight, szego_prefactor
from .painleve import SigmaSample, sigma_residual
from .quad import MomentTable, QuadRule, circle_moments, gauss_jacobi_rule
from .scattering import (KernelMatrix, MarchenkoValues, ScatteringData,
                         first_lambda_zero, fourier_coeffs, fredholm_disc,
                         g_entry, g_entry_series, g_matrix, jost, jost_minus,
                         jost_plus, marchenko_solve, marchenko_solve_at,
                         scattering_function, toeplitz_from_g,
                         truncation_size)
from .specfun import (JacobiSuite, appell_f1, appell_f1_quadrature,
                      elliptic_complete, gauss_2f1, jacobi_suite, nome,
                      pochhammer, theta_nome)
from .toeplitz_bops import (BopsEval, BopsState, bops_eval, bops_ladder,
                            cug_transform, ising_bops, ising_moments,
                            jump_residual, toeplitz_correlation, toeplitz_det)

__version__ = "0.1.0"

__all__ = [
    "BopsEval", "BopsState", "ContinuousFredholm", "CorrelationSeries",
    "CrosscheckReport", "ExactValues", "FormFactorValue", "JacobiSuite",
    "KernelMatrix", "LambdaCoordinates", "MarchenkoValues", "ModelPoint",
    "MomentTable", "QuadRule", "ScatteringData", "SigmaSample",
    "appell_f1", "appell_f1_quadrature", "bops_eval", "bops_ladder",
    "circle_moments", "correlate", "correlation_series", "crosscheck_point",
    "cug_transform", "elliptic_complete", "exact_values", "first_lambda_zero",
    "form_factor", "fourier_coeffs", "fredholm_cont", "fredholm_disc",
    "g_entry", "g_entry_series", "g_matrix", "gauss_2f1", "gauss_jacobi_rule",
    "high_weight", "ising_bops", "ising_moments", "jacobi_suite",
    "jost", "jost_minus", "jost_plus", "jump_residual", "kernel_high", "kernel_low",
    "lambda_series", "low_weight", "marchenko_solve", "marchenko_solve_at",
    "nome", "parse_grid", "pochhammer", "run_crosscheck",
    "scattering_function", "sigma_residual", "small_t_coeffs",
    "szego_prefactor", "theta_nome", "toeplitz_correlation", "toeplitz_det",
    "toeplitz_from_g", "truncation_size",
]
