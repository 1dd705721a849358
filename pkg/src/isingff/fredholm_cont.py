"""Continuous-kernel route: Appell-function kernels on (0,1).

Low phase: det(I - lambda^2 K) of an integrable-type kernel

  K(x,y) = g(x) g(y) S(x,y),      g(x) = x^(n/2+1/4) [(1-x)(1-tx)]^(-1/4),
  S(x,y) = -c_n t^(n+1) [x F1(tx) - y F1(ty)] / (x-y),

with F1(u) shorthand for the first Appell function F1(n+1/2; -1/2, 1; n+2; t, u)
and c_n = Gamma(n+1/2) Gamma(1/2) / (2 pi^2 (n+1)!).  The separable
endpoint factors g are absorbed into a Gauss-Jacobi rule so the Nystrom
matrix is built from the smooth part only.

High phase: a Fredholm minor.  The p-th expansion coefficient is the
p-fold integral of a bordered determinant with scalar corner K0,
border K1 and body K2; summed over all p it equals

  (lambda/pi) det(I + lambda^2 K2) [K0 - lambda^2 <K1, (I + lambda^2 K2)^{-1} K1>].

The body K2 carries t^n and the corner K0 carries t^(n/2); consistency
of the bordered expansion with the (2p+1)-fold integrals forces the
border K1 to carry t^(3n/4) (all three coincide at n=0).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivergenceWarning, DomainError
from .formfactor import DEFAULT_Q, P_BUDGET
from .model import ModelPoint
from .quad import gauss_jacobi_rule
from .specfun import appell_f1, appell_f1_dy, gauss_2f1


def _smooth_part(x, y, n, t, low):
    """Difference quotient [x F1(tx) - y F1(ty)]/(x-y), analytic at x=y."""
    if low:
        a, b1, c = n + 0.5, -0.5, n + 2.0
    else:
        a, b1, c = n + 0.5, 0.5, n + 1.0
    if abs(x - y) < 1e-9:
        return (appell_f1(a, b1, 1.0, c, t, t * x)
                + x * t * appell_f1_dy(a, b1, 1.0, c, t, t * x))
    fx = appell_f1(a, b1, 1.0, c, t, t * x)
    fy = appell_f1(a, b1, 1.0, c, t, t * y)
    return (x * fx - y * fy) / (x - y)


def kernel_low(x, y, n, t):
    """Low-phase integrable kernel at a point of (0,1)^2; x=y uses the
    analytic diagonal limit."""
    if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
        raise DomainError("kernel has integrable endpoint singularities; "
                          f"evaluate strictly inside (0,1), got ({x}, {y})")
    if t == 0.0:
        return 0.0
    cn = math.gamma(n + 0.5) * math.gamma(0.5) / (2.0 * math.pi ** 2
                                                  * math.gamma(n + 2))
    g = ((x * y) ** (n / 2.0 + 0.25)
         * ((1.0 - x) * (1.0 - y) * (1.0 - t * x) * (1.0 - t * y)) ** -0.25)
    return -cn * t ** (n + 1) * g * _smooth_part(x, y, n, t, low=True)


def kernel_high(x, y, n, t):
    """High-phase bordered kernel components (K0, K1(x), K2(x,y)).

    K0 = Gamma(n+1/2) Gamma(1/2)/n! * t^(n/2) 2F1(n+1/2, 1/2; n+1; t); the
    border K1 carries t^(3n/4) (see module docstring), the body K2 t^n.
    Diverges logarithmically as t -> 1.
    """
    if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
        raise DomainError("kernel has endpoint singularities; evaluate "
                          f"strictly inside (0,1), got ({x}, {y})")
    if t >= 0.9:
        warnings.warn(f"high-phase kernels diverge logarithmically as t -> 1 "
                      f"(t={t})", DivergenceWarning, stacklevel=2)
    gstar = math.gamma(n + 0.5) * math.gamma(0.5) / math.gamma(n + 1)
    K0 = gstar * t ** (n / 2.0) * (gauss_2f1(n + 0.5, 0.5, n + 1.0, t)
                                   if t > 0 else 1.0)
    gx = x ** (n / 2.0 - 0.75) * ((1.0 - x) * (1.0 - t * x)) ** 0.25
    gy = y ** (n / 2.0 - 0.75) * ((1.0 - y) * (1.0 - t * y)) ** 0.25
    K1 = -(gstar / math.pi) * t ** (0.75 * n) * gx * appell_f1(
        n + 0.5, 0.5, 1.0, n + 1.0, t, t * x)
    K2 = (gstar / math.pi ** 2) * t ** n * gx * gy * _smooth_part(
        x, y, n, t, low=False)
    return K0, K1, K2


@lru_cache(maxsize=64)
def _nystrom_low(n, t, q):
    """Symmetrized Nystrom matrix for the low kernel on Jacobi nodes.

    Measure x^(n+1/2) (1-x)^(-1/2) absorbed by the rule, the smooth
    leftover (1-tx)^(-1/2) folded into the node weights.
    """
    rule = gauss_jacobi_rule(q, -0.5, n + 0.5)
    x = rule.nodes
    d = np.sqrt(rule.weights * (1.0 - t * x) ** -0.5)
    cn = math.gamma(n + 0.5) * math.gamma(0.5) / (2.0 * math.pi ** 2
                                                  * math.gamma(n + 2))
    S = np.empty((q, q))
    for i in range(q):
        for j in range(i, q):
            S[i, j] = S[j, i] = _smooth_part(x[i], x[j], n, t, low=True)
    M = -cn * t ** (n + 1) * S * np.outer(d, d)
    return np.linalg.eigvalsh(M)


@lru_cache(maxsize=64)
def _nystrom_high(n, t, q):
    """Spectral data (K0, projections, eigenvalues) of the high-phase body.

    Outer measure per variable is x^(n-3/2) (1-x)^(1/2) (1-tx)^(1/2); for
    n = 0 the x^(-3/2) power is split as x^(-1/2) times an explicit 1/x
    (the bordered determinant vanishes linearly at x -> 0, so the
    discretized combination stays finite).
    """
    if n == 0:
        rule = gauss_jacobi_rule(q, 0.5, -0.5)
        extra = 1.0 / rule.nodes
    else:
        rule = gauss_jacobi_rule(q, 0.5, n - 1.5)
        extra = np.ones(q)
    x = rule.nodes
    d = np.sqrt(rule.weights * (1.0 - t * x) ** 0.5 * extra)
    gstar = math.gamma(n + 0.5) * math.gamma(0.5) / math.gamma(n + 1)
    K0 = gstar * t ** (n / 2.0) * (gauss_2f1(n + 0.5, 0.5, n + 1.0, t)
                                   if t > 0 else 1.0)
    s1 = np.array([appell_f1(n + 0.5, 0.5, 1.0, n + 1.0, t, t * xi) for xi in x])
    k1 = -(gstar / math.pi) * t ** (0.75 * n) * s1 * d
    S = np.empty((q, q))
    for i in range(q):
        for j in range(i, q):
            S[i, j] = S[j, i] = _smooth_part(x[i], x[j], n, t, low=False)
    M2 = (gstar / math.pi ** 2) * t ** n * S * np.outer(d, d)
    nu, Q = np.linalg.eigh(M2)
    return K0, Q.T @ k1, nu


def _elementary_symmetric(eigs, p_max):
    """e_0..e_{p_max} of the eigenvalue multiset, by Newton's identities."""
    power_sums = [np.sum(eigs ** k) for k in range(1, p_max + 1)]
    e = [1.0]
    for p in range(1, p_max + 1):
        s = 0.0
        for k in range(1, p + 1):
            s += (-1) ** (k - 1) * e[p - k] * power_sums[k - 1]
        e.append(s / p)
    return e


@dataclass(frozen=True)
class ContinuousFredholm:
    value: float          # full lambda sum: determinant (low) / minor (high)
    neumann: tuple        # f^(2p) for p=1.. (low) or f^(2p+1) for p=0.. (high)


def fredholm_cont(point: ModelPoint, p_max=P_BUDGET, q=DEFAULT_Q):
    """Continuous-kernel evaluation of the lambda-generalized expansion.

    Low phase returns det(I - lambda^2 K) (all orders; equals the
    correlation divided by (1-t)^(1/4)), plus the first p_max Neumann
    coefficients for cross-checks.  High phase returns the minor sum
    sum_p lambda^(2p+1) f^(2p+1) in closed resolvent form plus the
    coefficients.
    """
    if point.t >= 0.9:
        warnings.warn(f"continuous route untrustworthy as t -> 1 (t={point.t})",
                      DivergenceWarning, stacklevel=2)
    mu = point.lam ** 2
    if point.phase == "low":
        if point.t == 0.0:
            return ContinuousFredholm(1.0, tuple(0.0 for _ in range(p_max)))
        eigs = _nystrom_low(point.n, point.t, q)
        e = _elementary_symmetric(eigs, p_max)
        neumann = tuple((-1.0) ** p * e[p] for p in range(1, p_max + 1))
        value = float(np.prod(1.0 - mu * eigs))
        return ContinuousFredholm(value, neumann)
    K0, c, nu = _nystrom_high(point.n, point.t, q)
    e = _elementary_symmetric(nu, p_max)
    c2 = c ** 2
    # e_{p-1} of the spectrum with one eigenvalue removed, per eigenvalue
    e_minus = [np.ones_like(nu)]
    for p in range(1, p_max):
        e_minus.append(e[p] - nu * e_minus[p - 1])
    neumann = []
    for p in range(0, p_max + 1):
        quad = float(c2 @ e_minus[p - 1]) if p >= 1 else 0.0
        neumann.append((K0 * e[p] - quad) / math.pi)
    denom = 1.0 + mu * nu
    value = (point.lam / math.pi * float(np.prod(denom))
             * (K0 - mu * float(np.sum(c2 / denom))))
    return ContinuousFredholm(value, tuple(neumann))
