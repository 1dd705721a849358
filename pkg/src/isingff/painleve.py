"""Sigma-form differential-equation residual for the determinant routes.

With L(t) the log of a route value, define

  sigma(t) = t(t-1) L'(t) - shift,   shift = t/4 (low) or 1/4 (high)
             for the moment-determinant route at lambda = 1, and no
             shift for the discrete determinant det[1 + lambda^2 G].

The residual is LHS - RHS of

  (t(t-1) sigma'')^2 = n^2 ((t-1) sigma' - sigma)^2
      - 4 sigma' ((t-1) sigma' - sigma - 1/4) (t sigma' - sigma),

with all derivatives taken by 5-point central stencils (L on a 9-point
grid, sigma on the inner 5 points).  At lambda = 1 this equation is a
proven property of the correlation; for lambda != 1 the discrete
route's residual probes a conjectured extension and is labeled as such
rather than gated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import ModelPoint
from .scattering import _fredholm_disc_at
from .toeplitz_bops import toeplitz_correlation

ROUTES = ("toeplitz", "fredholm-disc")


@dataclass(frozen=True)
class SigmaSample:
    t: float
    n: int
    lam: float
    route: str
    sigma: float
    sigma_p: float
    sigma_pp: float
    residual: float
    conjecture_level: bool   # True when lambda != 1 (equation unproven there)


def _log_value(point: ModelPoint, route):
    if route == "toeplitz":
        return math.log(toeplitz_correlation(point))
    return math.log(_fredholm_disc_at(point.t, point.lam, point.n))


def sigma_residual(point: ModelPoint, route="toeplitz", h=1e-3):
    """Sigma-form residual at the given point by nested 5-point stencils.

    Requires t +- 4h inside (0,1).  route="toeplitz" needs lambda = 1
    (and applies the phase shift); route="fredholm-disc" accepts any
    lambda but exists for the low phase only.
    """
    if route not in ROUTES:
        raise DomainError(f"route must be one of {ROUTES}, got {route!r}")
    t0, n, lam = point.t, point.n, point.lam
    if not (0.0 < t0 - 4 * h and t0 + 4 * h < 1.0):
        raise DomainError(f"stencil leaves (0,1): t={t0}, h={h}")
    if route == "toeplitz":
        if lam != 1.0:
            raise DomainError("moment route is defined at lambda = 1 only")
        shift = (lambda tt: tt / 4.0) if point.phase == "low" else (lambda tt: 0.25)
    else:
        if point.phase != "low":
            raise DomainError("discrete route exists for the low phase only")
        shift = lambda tt: 0.0

    ts = t0 + h * np.arange(-4, 5)
    Ls = np.array([_log_value(ModelPoint(point.phase, float(tt), lam, n), route)
                   for tt in ts])

    def d1(vals, j):
        return (-vals[j + 2] + 8 * vals[j + 1] - 8 * vals[j - 1] + vals[j - 2]) / (12 * h)

    sig = np.array([ts[j] * (ts[j] - 1.0) * d1(Ls, j) - shift(ts[j])
                    for j in range(2, 7)])
    sp = (-sig[4] + 8 * sig[3] - 8 * sig[1] + sig[0]) / (12 * h)
    spp = (-sig[4] + 16 * sig[3] - 30 * sig[2] + 16 * sig[1] - sig[0]) / (12 * h * h)
    s = float(sig[2])
    lhs = (t0 * (t0 - 1.0) * spp) ** 2
    rhs = (n * n * ((t0 - 1.0) * sp - s) ** 2
           - 4.0 * sp * ((t0 - 1.0) * sp - s - 0.25) * (t0 * sp - s))
    return SigmaSample(t=t0, n=n, lam=lam, route=route,
                       sigma=s, sigma_p=float(sp), sigma_pp=float(spp),
                       residual=float(lhs - rhs),
                       conjecture_level=(lam != 1.0))
