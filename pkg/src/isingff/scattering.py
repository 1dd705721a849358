"""Discrete route: Jost factorization, scattering coefficients, the G
kernel matrix, truncated determinants and the linear-system solutions.

The low-phase symbol factors as w = 1/(f+ f-) with Jost functions
f+(z) = (1 - sqrt(t) z)^(1/2) and f-(z) = (1 - sqrt(t)/z)^(-1/2); the
scattering function S = f-/f+ equals |1 - sqrt(t) z|^(-1) on the circle.
Its Fourier coefficients F_m, and those of 1/S, build the kernel

    G_{l,m} = - sum_{m' >= 1} Fbar_{l+m'} F_{m+m'},

which has a hypergeometric closed form (regularized below c = 0, so
negative indices are meaningful) and a diagonal fixed by a downward
recurrence anchored at G_{0,0} + G_{-1,-1} = -1.  All determinant
objects here are truncations of det[1 + lambda^2 G] over index windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _sgamma
from scipy.special import gammaln, poch

from .errors import (AccuracyError, BranchCutError, DomainError,
                     SingularDeterminantError, TruncationError)
from .model import ModelPoint, szego_prefactor
from .specfun import gauss_2f1, reg_2f1_vec

N_MIN, N_MAX = 8, 512
_TAIL = 1e-16
_DIAG_TAIL = 1e-18


def truncation_size(t, n):
    """Window size N with dropped diagonal tail below 1e-16 (geometric in t)."""
    if t <= 0.0:
        return N_MIN
    return int(np.clip(math.ceil(math.log(_TAIL) / math.log(t)) - n, N_MIN, N_MAX))


# ---------------------------------------------------------------------------
# Jost functions and scattering Fourier coefficients
# ---------------------------------------------------------------------------

def jost_plus(z, t):
    """Interior Jost factor (1 - sqrt(t) z)^(1/2); cut on [1/sqrt(t), inf)."""
    s = math.sqrt(t)
    z = complex(z)
    if s > 0 and z.imag == 0.0 and z.real >= 1.0 / s:
        raise BranchCutError(f"z={z} lies on the cut of the interior factor")
    return complex(np.sqrt(1.0 - s * z))


def jost_minus(z, t):
    """Exterior Jost factor (1 - sqrt(t)/z)^(-1/2); cut on (0, sqrt(t)]."""
    s = math.sqrt(t)
    z = complex(z)
    if z == 0:
        raise DomainError("exterior factor undefined at z=0")
    if s > 0 and z.imag == 0.0 and 0.0 < z.real <= s:
        raise BranchCutError(f"z={z} lies on the cut of the exterior factor")
    return complex(1.0 / np.sqrt(1.0 - s / z))


def jost(z, t, side):
    """Jost factor of the requested side: "interior" -> f+, "exterior" -> f-.

    On |z| = 1 the factorization w(z) f+(z) f-(z) = 1 holds to machine
    precision; f+(0) = f-(inf) = 1 for this symbol.
    """
    if side == "interior":
        return jost_plus(z, t)
    if side == "exterior":
        return jost_minus(z, t)
    raise DomainError(f"side must be 'interior' or 'exterior', got {side!r}")


def scattering_function(z, t):
    """S(z) = f-(z)/f+(z); equals 1/|1 - sqrt(t) z| on the unit circle."""
    return jost_minus(z, t) / jost_plus(z, t)


def _coeff_closed(m, t, bar):
    m = abs(m)
    lg = math.lgamma
    if bar:
        # (-1/2)_m / m! = Gamma(m-1/2)/(Gamma(-1/2) m!), negative for m >= 1
        if m == 0:
            pre = 1.0
        else:
            pre = -math.exp(lg(m - 0.5) - math.log(2 * math.sqrt(math.pi))
                            - lg(m + 1))
        return pre * t ** (m / 2.0) * (gauss_2f1(-0.5, m - 0.5, m + 1.0, t)
                                       if t > 0 else 1.0)
    pre = math.exp(lg(m + 0.5) - lg(0.5) - lg(m + 1))
    return pre * t ** (m / 2.0) * (gauss_2f1(0.5, m + 0.5, m + 1.0, t)
                                   if t > 0 else 1.0)


def _coeff_quadrature(t, m_max, M=8192):
    theta = 2.0 * np.pi * (np.arange(M) + 0.5) / M
    z = np.exp(1j * theta)
    s = math.sqrt(t)
    S = 1.0 / np.abs(1.0 - s * z)
    ms = np.arange(0, m_max + 1)
    F = (S[None, :] * np.exp(1j * np.outer(ms, theta))).mean(axis=1).real
    Fbar = ((1.0 / S)[None, :] * np.exp(-1j * np.outer(ms, theta))).mean(axis=1).real
    return F, Fbar


@dataclass(frozen=True)
class ScatteringData:
    """Fourier coefficients of S and 1/S on a symmetric index window.

    Both families depend on |m| only; values decay like t^(|m|/2), so
    the large-|m| tail is geometric.
    """

    t: float
    m_max: int
    F: np.ndarray = field(repr=False)      # index m + m_max
    Fbar: np.ndarray = field(repr=False)

    def f(self, m):
        return float(self.F[abs(m)])

    def fbar(self, m):
        return float(self.Fbar[abs(m)])


@lru_cache(maxsize=64)
def fourier_coeffs(t, m_max, check=True):
    """Scattering Fourier coefficients by the hypergeometric closed forms.

    With check=True the first coefficients are compared against circle
    quadrature of S = f-/f+; disagreement beyond 1e-9 raises.
    """
    if not 0.0 <= t < 1.0:
        raise DomainError(f"t must lie in [0,1), got {t}")
    F = np.array([_coeff_closed(m, t, bar=False) for m in range(m_max + 1)])
    Fbar = np.array([_coeff_closed(m, t, bar=True) for m in range(m_max + 1)])
    if check and t > 0.0:
        k = min(m_max, 12)
        Fq, Fbq = _coeff_quadrature(t, k)
        err = max(np.max(np.abs(F[:k + 1] - Fq)), np.max(np.abs(Fbar[:k + 1] - Fbq)))
        if err > 1e-9:
            raise AccuracyError(f"closed-form and quadrature scattering "
                                f"coefficients disagree by {err:.2e}")
    return ScatteringData(t=t, m_max=m_max, F=F, Fbar=Fbar)


# ---------------------------------------------------------------------------
# Kernel matrix G
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelMatrix:
    """Finite truncation of G over the window [n_start, n_start+N)."""

    n_start: int
    N: int
    t: float
    lam: float
    entries: np.ndarray = field(repr=False)


@lru_cache(maxsize=96)
def _g_block(t, n_start):
    """Dense G block over [n_start, l_max]; l_max set by the diagonal tail.

    Off-diagonal entries come from the closed form: with
    A_l = reg2F1(1/2, l+3/2; l+1; t) and B_l = reg2F1(1/2, l+1/2; l+2; t),

      G_{l,m} = -(-1/2)_{l+1} (1/2)_{m+1} t^((l+m)/2+1) (A_l B_m - A_m B_l)/(l-m)
              = -t (abar_l bbar_m - cbar_l dbar_m)/(l - m),

    where abar_l = (-1/2)_{l+1} t^(l/2) A_l etc. are O(t^(l/2)) and are
    assembled in log space (Pochhammer and 1/Gamma factors separately
    overflow/underflow near l ~ 170 while their combination stays tame).
    The diagonal accumulates the downward recurrence increments from
    l_max where t^(l_max+1) < 1e-18.
    """
    if t == 0.0:
        ls = np.arange(n_start, n_start + N_MIN + 1)
        blk = np.zeros((len(ls), len(ls)))
        if n_start <= -1:
            blk[-1 - n_start, -1 - n_start] = -1.0   # G_{-1,-1}(0) = -1
        return ls, blk
    l_max = max(n_start + N_MIN,
                math.ceil(math.log(_DIAG_TAIL) / math.log(t)))
    ls = np.arange(n_start, l_max + 1)
    nn = len(ls)
    abar = np.empty(nn)
    bbar = np.empty(nn)
    cbar = np.empty(nn)
    dbar = np.empty(nn)
    inc = np.empty(nn)
    pos = ls >= 0
    lp = ls[pos].astype(float)
    lnt = math.log(t)
    # plain-series hypergeometric values, all O(1/(1-t))
    P1 = reg_2f1_vec(0.5, lp + 1.5, lp + 1.0, t, regularized=False)
    P2 = reg_2f1_vec(0.5, lp + 0.5, lp + 2.0, t, regularized=False)
    log_pa = gammaln(lp + 0.5) - math.log(2.0 * math.sqrt(math.pi))
    log_pb = gammaln(lp + 1.5) - 0.5 * math.log(math.pi)
    half = 0.5 * lp * lnt
    # (-1/2)_{l+1} = Gamma(l+1/2)/Gamma(-1/2) is negative for l >= 0
    abar[pos] = -np.exp(log_pa + half - gammaln(lp + 1.0) + np.log(P1))
    bbar[pos] = np.exp(log_pb + half - gammaln(lp + 2.0) + np.log(P2))
    cbar[pos] = -np.exp(log_pa + half - gammaln(lp + 2.0) + np.log(P2))
    dbar[pos] = np.exp(log_pb + half - gammaln(lp + 1.0) + np.log(P1))
    Q1 = reg_2f1_vec(-0.5, lp + 0.5, lp + 2.0, t, regularized=False)
    Q2 = reg_2f1_vec(0.5, lp + 1.5, lp + 2.0, t, regularized=False)
    ratio = np.exp(gammaln(lp + 0.5) + gammaln(lp + 1.5) - 2.0 * gammaln(lp + 2.0))
    inc[pos] = (0.5 / math.pi) * ratio * t ** (lp + 1.0) * Q1 * Q2
    for i in np.flatnonzero(~pos):      # small negative indices, all O(1)
        l = float(ls[i])
        A = gauss_2f1(0.5, l + 1.5, l + 1.0, t, regularized=True)
        B = gauss_2f1(0.5, l + 0.5, l + 2.0, t, regularized=True)
        half_l = t ** (l / 2.0)
        abar[i] = poch(-0.5, l + 1.0) * half_l * A
        bbar[i] = poch(0.5, l + 1.0) * half_l * B
        cbar[i] = poch(-0.5, l + 1.0) * half_l * B
        dbar[i] = poch(0.5, l + 1.0) * half_l * A
        inc[i] = (0.5 / math.pi) * _sgamma(l + 0.5) * _sgamma(l + 1.5) \
            * t ** (l + 1.0) \
            * gauss_2f1(-0.5, l + 0.5, l + 2.0, t, regularized=True) \
            * gauss_2f1(0.5, l + 1.5, l + 2.0, t, regularized=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        blk = -t * (np.outer(abar, bbar) - np.outer(cbar, dbar)) \
            / (ls[:, None] - ls[None, :])
    np.fill_diagonal(blk, np.cumsum(inc[::-1])[::-1])
    return ls, blk


def g_entry(l, m, t):
    """Single kernel entry G_{l,m}; any integer indices, |t| < 1."""
    ls, blk = _g_block(t, min(l, m, -1))
    if max(l, m) > ls[-1]:
        return 0.0          # beyond the resolved tail, below 1e-18
    off = -ls[0]
    return float(blk[l + off, m + off])


def g_entry_series(l, m, t, tail=1e-20):
    """Direct-summation evaluation -sum_{m'>=1} Fbar_{l+m'} F_{m+m'};
    independent oracle for g_entry."""
    if t == 0.0:
        return -1.0 if (l == m == -1) else 0.0
    m_top = max(math.ceil(math.log(tail) / math.log(t)), 8) + max(abs(l), abs(m)) + 2
    data = fourier_coeffs(t, m_top + max(l, m) + 1, check=False)
    total = 0.0
    for mp in range(1, m_top + 1):
        total += data.fbar(l + mp) * data.f(m + mp)
    return -total


def g_matrix(n_start, N, t, lam=1.0):
    """KernelMatrix over [n_start, n_start+N)."""
    ls, blk = _g_block(t, min(n_start, -1))
    off = n_start - ls[0]
    if off + N > len(ls):
        pad = off + N - len(ls)
        blk = np.pad(blk, ((0, pad), (0, pad)))     # tail entries below 1e-18
    return KernelMatrix(n_start=n_start, N=N, t=t, lam=lam,
                        entries=blk[off:off + N, off:off + N].copy())


@lru_cache(maxsize=256)
def _g_eigs(t, n_start, N):
    return np.linalg.eigvals(g_matrix(n_start, N, t).entries)


def first_lambda_zero(t, n, N=None):
    """Smallest lambda > 0 where det[1 + lambda^2 G]_n vanishes, or None."""
    if t == 0.0:
        return None
    N = truncation_size(t, n) if N is None else N
    eigs = _g_eigs(t, n, N)
    real_neg = eigs.real[(np.abs(eigs.imag) < 1e-12) & (eigs.real < -1e-14)]
    if real_neg.size == 0:
        return None
    return float(np.sqrt(-1.0 / real_neg.min()))


def _det_window(t, lam, n_start, N):
    eigs = _g_eigs(t, n_start, N)
    return float(np.prod(1.0 + lam * lam * eigs).real)


def fredholm_disc(point: ModelPoint, N=None, check_doubling=False):
    """Truncated determinant det[1 + lambda^2 G] over [n, n+N).

    Low phase only (the high symbol has non-zero winding).  N defaults
    to the geometric-decay rule; with check_doubling=True the result at
    2N must agree to 1e-12.
    """
    if point.phase != "low":
        raise DomainError("discrete determinant route exists for the low phase only")
    return _fredholm_disc_at(point.t, point.lam, point.n, N, check_doubling)


def _fredholm_disc_at(t, lam, n, N=None, check_doubling=False):
    if t == 0.0:
        return 1.0
    N = truncation_size(t, n) if N is None else N
    zero = first_lambda_zero(t, n, N)
    if zero is not None and lam >= zero - 1e-12:
        raise SingularDeterminantError(
            f"det[1+lambda^2 G] has its first zero at lambda={zero:.6g}; "
            f"requested lambda={lam}")
    val = _det_window(t, lam, n, N)
    if check_doubling:
        val2 = _det_window(t, lam, n, min(2 * N, N_MAX))
        if abs(val - val2) > 1e-12:
            raise TruncationError(f"doubling N changed the determinant by "
                                  f"{abs(val - val2):.2e}")
    return val


# ---------------------------------------------------------------------------
# Linear-system (Marchenko) solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarchenkoValues:
    kappa_ratio: float      # kappa_inf^2 / kappa_n^2
    r_next: float           # r_{n+1}
    rbar_next: float        # rbar_{n+1}


def marchenko_solve(point: ModelPoint, N=None):
    """Norm ratio and reflection coefficients from determinant ratios."""
    if point.phase != "low":
        raise DomainError("scattering solutions exist for the low phase only")
    return marchenko_solve_at(point.t, point.lam, point.n, N)


def marchenko_solve_at(t, lam, n, N=None):
    """Same as marchenko_solve but with plain integers; n may be -1
    (reaching r_0, rbar_0 and the kappa_{-1} ratio)."""
    if n < -1:
        raise DomainError(f"window start n must be >= -1, got {n}")
    if t == 0.0:
        return MarchenkoValues(1.0, 0.0, 0.0)
    N = truncation_size(t, n) if N is None else N
    zero = first_lambda_zero(t, n, N)
    if zero is not None and lam >= zero - 1e-12:
        raise SingularDeterminantError(
            f"determinant vanishes at lambda={zero:.6g} <= {lam}")
    mu = lam * lam
    G = g_matrix(n, N, t).entries
    det_n1 = float(np.linalg.det(np.eye(N - 1) + mu * G[1:, 1:]))
    det_n = float(np.linalg.det(np.eye(N) + mu * G))
    data = fourier_coeffs(t, n + N + 2, check=False)
    frow = lam * np.array([data.f(m + 1) for m in range(n, n + N)])
    fbrow = lam * np.array([data.fbar(m + 1) for m in range(n, n + N)])
    body = np.zeros((N - 1, N))
    body[:, 1:] = np.eye(N - 1)
    num_r = np.vstack([frow, body + mu * G[1:, :]])
    num_rb = np.vstack([fbrow, body + mu * G[:, 1:].T])
    return MarchenkoValues(
        kappa_ratio=det_n1 / det_n,
        r_next=float(np.linalg.det(num_r)) / det_n1,
        rbar_next=float(np.linalg.det(num_rb)) / det_n1,
    )


def toeplitz_from_g(point: ModelPoint, N=None):
    """lambda-extended Toeplitz determinant I_n via the determinant ratio
    I_n = I_0 det_n / det_0, with I_0 = (1-t)^(1/4) det_0 (kappa_inf = 1)."""
    if point.phase != "low":
        raise DomainError("determinant ratio route exists for the low phase only")
    det_n = _fredholm_disc_at(point.t, point.lam, point.n, N)
    return szego_prefactor(point.t) * det_n
