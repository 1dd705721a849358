"""Quadrature rules: Gauss-Jacobi on (0,1) and trapezoid moments on the circle.

The canonical Jacobi domain here is (0,1), matching the form-factor
integrals; a rule with exponents (alpha, beta) integrates against
x^beta (1-x)^alpha and is exact for polynomials up to degree 2q-1.
Circle moments use the periodic trapezoid rule, which is spectrally
accurate for symbols analytic in an annulus around |z|=1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .errors import AccuracyError, DomainError


@dataclass(frozen=True)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    family: str                 # "jacobi" or "circle"
    alpha: float = float("nan")
    beta: float = float("nan")

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise AccuracyError("quadrature produced non-positive weights")
        if np.any(np.diff(self.nodes) <= 0):
            raise AccuracyError("quadrature nodes not strictly increasing")


def gauss_jacobi_rule(q, alpha, beta):
    """q-point Gauss-Jacobi rule on (0,1) for the weight x^beta (1-x)^alpha.

    Built from the Jacobi three-term recurrence (Golub-Welsch) on (-1,1)
    and mapped affinely; exactness up to degree 2q-1 is property-tested.
    """
    if q < 1:
        raise DomainError(f"rule size must be >= 1, got {q}")
    if alpha <= -1.0 or beta <= -1.0:
        raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha}, {beta})")
    x, w = roots_jacobi(q, alpha, beta)
    return QuadRule(nodes=(x + 1.0) / 2.0,
                    weights=w / 2.0 ** (alpha + beta + 1.0),
                    family="jacobi", alpha=alpha, beta=beta)


@dataclass(frozen=True)
class MomentTable:
    """Trigonometric moments w_k = (1/2pi) int w(e^{i th}) e^{-ik th} dth."""

    k_max: int
    values: np.ndarray = field(repr=False)   # index offset by k_max
    grid_size: int = 0

    def __getitem__(self, k):
        if abs(k) > self.k_max:
            raise DomainError(f"moment index {k} outside |k| <= {self.k_max}")
        return float(self.values[k + self.k_max])

    def shifted(self, offset):
        """Moments of z^offset * w(z): w_k -> w_{k-offset}."""
        kk = self.k_max - abs(offset)
        vals = np.array([self.values[k - offset + self.k_max]
                         for k in range(-kk, kk + 1)])
        return MomentTable(k_max=kk, values=vals, grid_size=self.grid_size)

    def reversed(self):
        """Moments of w(1/z): w_k -> w_{-k}."""
        return MomentTable(k_max=self.k_max, values=self.values[::-1].copy(),
                           grid_size=self.grid_size)


def _trapezoid_moments(symbol, k_max, M):
    theta = 2.0 * np.pi * (np.arange(M) + 0.5) / M   # offset avoids z=1 exactly
    z = np.exp(1j * theta)
    wz = np.asarray(symbol(z), dtype=complex)
    ks = np.arange(-k_max, k_max + 1)
    vals = (wz[None, :] * np.exp(-1j * np.outer(ks, theta))).mean(axis=1)
    return vals


def circle_moments(symbol, k_max, M=None, tol=1e-12):
    """Moment table of a circle symbol via the periodic trapezoid rule.

    M defaults to a power of two >= max(256, 8*k_max); the rule is then
    doubled and the requested moments must agree to `tol`, otherwise an
    AccuracyError is raised (non-smooth symbol or M forced too small).
    """
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    if M is None:
        M = 256
        while M < 8 * max(k_max, 1):
            M *= 2
    if M < 4 * k_max:
        raise DomainError(f"need M >= 4*k_max, got M={M}, k_max={k_max}")
    coarse = _trapezoid_moments(symbol, k_max, M)
    fine = _trapezoid_moments(symbol, k_max, 2 * M)
    if np.max(np.abs(coarse - fine)) > tol:
        raise AccuracyError("trapezoid moments failed the doubling test; "
                            "symbol not resolved at this grid size")
    if np.max(np.abs(fine.imag)) > 1e-12:
        raise AccuracyError("moment table has a non-negligible imaginary part")
    return MomentTable(k_max=k_max, values=fine.real.copy(), grid_size=2 * M)
