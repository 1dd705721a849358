"""Model coordinates and the diagonal-correlation symbol.

Everything in this package is evaluated at a ModelPoint: a temperature
phase, the elliptic parameter t (always strictly below the critical
value 1), the series-weight parameter lambda, and the diagonal index n.

Conventions: in the low phase t = k^-2 with k > 1, in the high phase
t = k^2 with k < 1, so that sqrt(t) < 1 is the natural expansion
variable in both regimes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

PHASES = ("low", "high")


@dataclass(frozen=True)
class ModelPoint:
    """Coordinates at which every route is evaluated."""

    phase: str
    t: float
    lam: float = 1.0
    n: int = 0

    def __post_init__(self):
        if self.phase not in PHASES:
            raise DomainError(f"phase must be one of {PHASES}, got {self.phase!r}")
        if not 0.0 <= self.t < 1.0:
            raise DomainError(f"t must lie in [0,1), got {self.t}")
        if self.lam < 0.0:
            raise DomainError(f"lambda must be >= 0, got {self.lam}")
        if self.n < 0 or self.n != int(self.n):
            raise DomainError(f"n must be a non-negative integer, got {self.n}")


def szego_prefactor(t):
    """(1-t)^(1/4), the large-n limit of the low-phase Toeplitz determinant."""
    return (1.0 - t) ** 0.25


def low_weight(z, t):
    """Zero-winding symbol [(1 - s/z)/(1 - s z)]^(1/2), s = sqrt(t).

    Valid on the unit circle and throughout the annulus s < |z| < 1/s;
    both factors keep positive real part there, so per-factor principal
    square roots never cross a cut.
    """
    s = np.sqrt(t)
    z = np.asarray(z, dtype=complex)
    return np.sqrt(1.0 - s / z) / np.sqrt(1.0 - s * z)


def reduced_high_weight(z, t):
    """The zero-winding part w~ of the high-phase symbol, w~ = 1/low_weight."""
    s = np.sqrt(t)
    z = np.asarray(z, dtype=complex)
    return np.sqrt(1.0 - s * z) / np.sqrt(1.0 - s / z)


def high_weight(z, t):
    """High-phase symbol -z^-1 * w~(z); winding number -1 on the circle."""
    z = np.asarray(z, dtype=complex)
    return -reduced_high_weight(z, t) / z


def weight(z, point: ModelPoint):
    """Symbol of the given phase evaluated at z."""
    if point.phase == "low":
        return low_weight(z, point.t)
    return high_weight(z, point.t)


def log_moment(p, t):
    """Fourier coefficient c_p of log of the low-phase symbol.

    c_0 = 0 and c_p = s^|p| / (2p) with s = sqrt(t); checked against
    quadrature in the tests.  Plugging into the strong Szego limit
    reproduces (1-t)^(1/4).
    """
    if p == 0:
        return 0.0
    return np.sqrt(t) ** abs(p) / (2.0 * p)
