"""Direct evaluation of the multiple-integral form factors.

The 2p-fold (low phase) and (2p+1)-fold (high phase) integrals over
(0,1) are evaluated on tensor Gauss-Jacobi grids.  Per integration
variable the endpoint-singular factors are exactly Jacobi weights:

  low phase   odd slots  x^(n+1/2) (1-x)^(-1/2),  even slots x^(n-1/2) (1-x)^(+1/2)
  high phase  odd slots  x^(n-1/2) (1-x)^(-1/2),  even slots x^(n+1/2) (1-x)^(+1/2)

with smooth leftovers (1-t x)^(-/+1/2) kept in the integrand.  The
squared Vandermonde factors vanish on coinciding nodes, so the tensor
sum collapses to strictly increasing node subsets; the 1/(p!)^2 (resp.
1/(p!(p+1)!)) symmetry prefactor cancels against the subset
multiplicities.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import BudgetError, DivergenceWarning, DomainError
from .model import ModelPoint, szego_prefactor
from .quad import gauss_jacobi_rule

P_BUDGET = 3          # tensor grids up to 2*P_BUDGET (low) / 2*P_BUDGET+1 (high) dims
DEFAULT_Q = 24
_CHUNK = 2048         # subset-block size for the coupling reduction


@dataclass(frozen=True)
class FormFactorValue:
    p: int
    value: float
    est_error: float


@dataclass(frozen=True)
class CorrelationSeries:
    value: float
    tail_estimate: float
    terms: tuple          # form-factor values entering the partial sum


@lru_cache(maxsize=256)
def _subsets(q, p):
    """Strictly increasing index p-subsets of range(q), as an (nsub, p) array."""
    return np.array(list(combinations(range(q), p)), dtype=np.intp)


def _subset_weights(x, w, subs):
    """prod of node weights times squared Vandermonde over each subset."""
    W = np.prod(w[subs], axis=1)
    p = subs.shape[1]
    for i in range(p):
        for j in range(i + 1, p):
            W *= (x[subs[:, i]] - x[subs[:, j]]) ** 2
    return W


def _coupled_sum(WU, subs_u, WV, subs_v, L):
    """sum_{U,V} WU WV exp(-2 sum_{i in U, j in V} L[i,j]), blocked over U."""
    q = L.shape[0]
    BV = np.zeros((len(subs_v), q))
    rows = np.repeat(np.arange(len(subs_v)), subs_v.shape[1])
    BV[rows, subs_v.ravel()] = 1.0
    LV = L @ BV.T                                   # (q, nsub_v)
    total = 0.0
    for lo in range(0, len(subs_u), _CHUNK):
        block = subs_u[lo:lo + _CHUNK]
        S = LV[block[:, 0]]
        for col in range(1, block.shape[1]):
            S = S + LV[block[:, col]]
        total += WU[lo:lo + _CHUNK] @ np.exp(-2.0 * S) @ WV
    return total


def _f_even_raw(n, p, t, q):
    """f^(2p) for the low phase at grid size q (no error estimate)."""
    if p == 0:
        return 1.0
    if t == 0.0:
        return 0.0
    ru = gauss_jacobi_rule(q, -0.5, n + 0.5)
    rv = gauss_jacobi_rule(q, +0.5, n - 0.5)
    su = ru.weights * (1.0 - t * ru.nodes) ** -0.5
    sv = rv.weights * (1.0 - t * rv.nodes) ** +0.5
    subs = _subsets(q, p)
    WU = _subset_weights(ru.nodes, su, subs)
    WV = _subset_weights(rv.nodes, sv, subs)
    L = np.log(1.0 - t * np.outer(ru.nodes, rv.nodes))
    val = _coupled_sum(WU, subs, WV, subs, L)
    return t ** (p * (n + p)) / math.pi ** (2 * p) * val


def _f_odd_raw(n, p, t, q):
    """f^(2p+1) for the high phase at grid size q."""
    exponent = n * (p + 0.5) + p * (p + 1)
    if t == 0.0 and exponent > 0:
        return 0.0
    ru = gauss_jacobi_rule(q, -0.5, n - 0.5)
    su = ru.weights * (1.0 - t * ru.nodes) ** -0.5
    pref = t ** exponent / math.pi ** (2 * p + 1)
    if p == 0:
        return pref * float(su.sum())
    rv = gauss_jacobi_rule(q, +0.5, n + 0.5)
    sv = rv.weights * (1.0 - t * rv.nodes) ** +0.5
    subs_u = _subsets(q, p + 1)
    subs_v = _subsets(q, p)
    WU = _subset_weights(ru.nodes, su, subs_u)
    WV = _subset_weights(rv.nodes, sv, subs_v)
    L = np.log(1.0 - t * np.outer(ru.nodes, rv.nodes))
    return pref * _coupled_sum(WU, subs_u, WV, subs_v, L)


def form_factor(point: ModelPoint, p, q=DEFAULT_Q, with_error=True):
    """j-particle form factor f^(j)_{n,n}, j = 2p (low) or 2p+1 (high).

    The grid has q nodes per integration variable; with_error re-runs at
    2q and reports the difference (for p = 3 this costs a few seconds).
    """
    if p < 0:
        raise DomainError(f"order p must be >= 0, got {p}")
    if p > P_BUDGET:
        raise BudgetError(f"p={p} exceeds the direct-product budget p <= {P_BUDGET}; "
                          "use the discrete determinant route instead")
    if point.t > 0.9:
        warnings.warn(f"form factors diverge as t -> 1 (t={point.t})",
                      DivergenceWarning, stacklevel=2)
    raw = _f_even_raw if point.phase == "low" else _f_odd_raw
    coarse = float(raw(point.n, p, point.t, q))
    if not with_error:
        return FormFactorValue(p=p, value=coarse, est_error=float("nan"))
    fine = float(raw(point.n, p, point.t, 2 * q))
    return FormFactorValue(p=p, value=fine, est_error=abs(fine - coarse))


def small_t_coeffs(n, p, phase="low"):
    """Leading small-t coefficients (c0, c1) of the form factor.

    f^(2p)   = t^(p(n+p))          * (c0 + c1 t + ...)   [low]
    f^(2p+1) = t^(n(p+1/2)+p(p+1)) * (c0 + c1 t + ...)   [high]

    c0 is a ratio of Gamma functions (a Selberg integral evaluated twice);
    c1/c0 is a rational multiple obtained from the mean of
    sum t_j under the Selberg density.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    lg = math.lgamma
    if phase == "low":
        if p < 1:
            raise DomainError("low phase needs p >= 1")
        log_c0 = (-2.0 * lg(p + 1) - 2 * p * math.log(math.pi)
                  + lg(n + p + 0.5) + lg(p + 0.5) - lg(n + 0.5) - lg(0.5))
        for j in range(p):
            log_c0 += 2.0 * (lg(n + j + 0.5) + lg(j + 0.5) + lg(j + 2)
                             - lg(n + p + j + 1))
        c0 = math.exp(log_c0)
        ratio = p * (n + p) / (2.0 * (n + 2 * p) ** 2) * (4 * p * (n + p) + 1)
        return c0, c0 * ratio
    if phase == "high":
        if p < 0:
            raise DomainError("high phase needs p >= 0")
        log_c0 = (-lg(p + 1) - (2 * p + 1) * math.log(math.pi)
                  + lg(n + 0.5) + lg(0.5) - lg(n + p + 1))
        for j in range(p):
            log_c0 += 2.0 * (lg(n + j + 1.5) + lg(j + 1.5) + lg(j + 2)
                             - lg(n + p + j + 2))
        c0 = math.exp(log_c0)
        ratio = ((n + p + 0.5) / (2.0 * (n + 2 * p + 1) ** 2)
                 * (4 * p * (p + 1) * (n + p + 0.5) + n + 2 * p + 1))
        return c0, c0 * ratio
    raise DomainError(f"unknown phase {phase!r}")


def _tail_estimate(point: ModelPoint, p_max):
    """Size of the first dropped term of the lambda series."""
    p = p_max + 1
    if point.phase == "low":
        c0, _ = small_t_coeffs(point.n, p, "low")
        return c0 * point.lam ** (2 * p) * point.t ** (p * (point.n + p))
    c0, _ = small_t_coeffs(point.n, p, "high")
    return (c0 * point.lam ** (2 * p + 1)
            * point.t ** (point.n * (p + 0.5) + p * (p + 1)))


def correlation_series(point: ModelPoint, p_max=P_BUDGET, q=DEFAULT_Q,
                       with_error=True):
    """lambda-weighted partial sum of the form-factor expansion.

    low:  (1-t)^(1/4) (1 + sum_{p=1..p_max} lambda^(2p)   f^(2p))
    high: (1-t)^(1/4)      sum_{p=0..p_max} lambda^(2p+1) f^(2p+1)

    The p = p_max term always skips the 2q error re-run (its tail bound
    dominates); lower orders honor with_error.
    """
    pref = szego_prefactor(point.t)
    terms = []
    if point.phase == "low":
        total = 1.0
        for p in range(1, p_max + 1):
            ff = form_factor(point, p, q=q, with_error=with_error and p < P_BUDGET)
            terms.append(ff)
            total += point.lam ** (2 * p) * ff.value
    else:
        total = 0.0
        for p in range(0, p_max + 1):
            ff = form_factor(point, p, q=q, with_error=with_error and p < P_BUDGET)
            terms.append(ff)
            total += point.lam ** (2 * p + 1) * ff.value
    return CorrelationSeries(value=float(pref * total),
                             tail_estimate=float(pref * _tail_estimate(point, p_max)),
                             terms=tuple(terms))
