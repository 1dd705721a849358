"""Moment-determinant ground truth and the bi-orthogonal polynomial ladder.

Toeplitz determinants I_n[zeta^eps w] = det[w_{-eps+j-k}] over the
trigonometric moments of a circle symbol are the reference values every
other route is compared against (at lambda = 1).  On top of the
determinant ladders sit the bi-orthogonal polynomials phi_n, phibar_n
with their reflection coefficients r_n = phi_n(0)/kappa_n,
rbar_n = phibar_n(0)/kappa_n, second-kind solutions and associated
functions, all tied together by recurrence and jump identities.

Normalization: I_0 := 1, hence kappa_0^2 = 1/I_1 = 1/w_0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz as _toeplitz_matrix

from .errors import AccuracyError, DomainError, ExistenceError
from .model import ModelPoint, low_weight
from .quad import MomentTable, circle_moments

_COND_LIMIT = 1e13
_GRID_M = 1024


def toeplitz_det(moments: MomentTable, n, eps=0):
    """det[w_{-eps+j-k}]_{0<=j,k<n}; I_0 := 1.  Warns near singularity."""
    if eps not in (-1, 0, 1):
        raise DomainError(f"index shift must be -1, 0 or +1, got {eps}")
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    if n == 0:
        return 1.0
    col = [moments[-eps + j] for j in range(n)]
    row = [moments[-eps - k] for k in range(n)]
    M = _toeplitz_matrix(col, row)
    if n > 1 and np.linalg.cond(M) > _COND_LIMIT:
        warnings.warn(f"Toeplitz matrix nearly singular at n={n} (eps={eps})",
                      RuntimeWarning, stacklevel=2)
    return float(np.linalg.det(M))


@lru_cache(maxsize=64)
def ising_moments(t, k_max=40):
    """Moment table of the zero-winding low-phase symbol."""
    return circle_moments(lambda z: low_weight(z, t), k_max)


def toeplitz_correlation(point: ModelPoint, k_max=None):
    """Diagonal correlation as a plain moment determinant (lambda = 1).

    Low phase: I_n of the symbol itself.  High phase: the symbol has
    winding -1 and factors as -z^{-1} w~(z); its determinant equals
    (-1)^n I_n[zeta^{-1} w~], with w~ the reversed-moment symbol.
    """
    if point.lam != 1.0:
        raise DomainError("moment route is defined at lambda = 1 only")
    k_max = max(40, point.n + 4) if k_max is None else k_max
    tab = ising_moments(point.t, k_max)
    if point.phase == "low":
        return toeplitz_det(tab, point.n)
    return (-1.0) ** point.n * toeplitz_det(tab.reversed(), point.n, eps=-1)


# ---------------------------------------------------------------------------
# Ladder state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BopsState:
    """Determinant ladders and reflection coefficients through n_max.

    kappa_sq may go negative for transformed weights; kappa() refuses to
    take the square root in that case.
    """

    moments: MomentTable
    n_max: int
    I: np.ndarray = field(repr=False)          # I_n[w],        n = 0..n_max+1
    I_plus: np.ndarray = field(repr=False)     # I_n[zeta w]
    I_minus: np.ndarray = field(repr=False)    # I_n[zeta^-1 w]
    kappa_sq: np.ndarray = field(repr=False)   # n = 0..n_max
    r: np.ndarray = field(repr=False)
    rbar: np.ndarray = field(repr=False)
    weight: object = field(default=None, repr=False, compare=False)

    def kappa(self, n):
        ks = self.kappa_sq[n]
        if ks <= 0:
            raise ExistenceError(f"kappa_{n}^2 = {ks} <= 0; no real normalization")
        return math.sqrt(ks)


def bops_ladder(moments: MomentTable, n_max, weight=None):
    """Build the ladder state from a moment table.

    Raises ExistenceError when any I_n[w] vanishes (the polynomial
    system stops existing there, e.g. for non-zero winding symbols).
    """
    if moments.k_max < n_max + 2:
        raise DomainError(f"need moments through |k| <= {n_max + 2}, "
                          f"table has {moments.k_max}")
    ns = range(n_max + 2)
    I = np.array([toeplitz_det(moments, n, 0) for n in ns])
    scale = np.abs(I).max()
    if np.any(np.abs(I) < 1e-13 * scale):
        bad = int(np.argmin(np.abs(I)))
        raise ExistenceError(f"I_{bad}[w] = {I[bad]:.3e} vanishes; "
                             "bi-orthogonal system does not exist")
    I_plus = np.array([toeplitz_det(moments, n, +1) for n in ns])
    I_minus = np.array([toeplitz_det(moments, n, -1) for n in ns])
    sgn = (-1.0) ** np.arange(n_max + 1)
    return BopsState(
        moments=moments, n_max=n_max, I=I, I_plus=I_plus, I_minus=I_minus,
        kappa_sq=I[:-1] / I[1:],
        r=sgn * I_plus[:-1] / I[:-1],
        rbar=sgn * I_minus[:-1] / I[:-1],
        weight=weight,
    )


def ising_bops(t, n_max, k_max=None):
    """Ladder for the low-phase symbol, with its analytic continuation
    attached for quadrature work."""
    k_max = max(n_max + 2, 40) if k_max is None else k_max
    tab = ising_moments(t, k_max)
    return bops_ladder(tab, n_max, weight=lambda z: low_weight(z, t))


# ---------------------------------------------------------------------------
# Polynomial and associated-function evaluation
# ---------------------------------------------------------------------------

def _phi_chain(state: BopsState, n, z):
    """phi_k(z), phi*_k(z) for k = 0..n by the coupled recurrences.

    kappa_n phi_{n+1} = kappa_{n+1} z phi_n + phi_{n+1}(0) phi*_n,
    kappa_n phi*_{n+1} = kappa_{n+1} phi*_n + phibar_{n+1}(0) z phi_n,
    started from phi_0 = phi*_0 = kappa_0.
    """
    z = np.asarray(z, dtype=complex)
    phi = [np.full_like(z, state.kappa(0))]
    phis = [np.full_like(z, state.kappa(0))]
    for k in range(n):
        kk, kk1 = state.kappa(k), state.kappa(k + 1)
        phi0 = kk1 * state.r[k + 1]       # phi_{k+1}(0)
        phib0 = kk1 * state.rbar[k + 1]   # phibar_{k+1}(0)
        phi.append((kk1 * z * phi[k] + phi0 * phis[k]) / kk)
        phis.append((kk1 * phis[k] + phib0 * z * phi[k]) / kk)
    return phi, phis


def _circle_grid(M=_GRID_M):
    theta = 2.0 * np.pi * (np.arange(M) + 0.5) / M
    return np.exp(1j * theta)


def caratheodory(state: BopsState, z):
    """Moment generating function F(z); interior branch for |z|<1,
    exterior for |z|>1."""
    z = complex(z)
    if abs(abs(z) - 1.0) < 1e-12:
        raise DomainError("Caratheodory function is discontinuous across |z|=1")
    tab = state.moments
    ks = np.arange(1, tab.k_max + 1)
    if abs(z) < 1.0:
        tail = abs(tab[tab.k_max] * z ** tab.k_max)
        val = tab[0] + 2.0 * np.sum([tab[k] * z ** k for k in ks])
    else:
        tail = abs(tab[-tab.k_max] * z ** (-tab.k_max))
        val = -tab[0] - 2.0 * np.sum([tab[-k] * z ** (-k) for k in ks])
    if tail > 1e-13:
        raise AccuracyError(f"moment table too short for |z|={abs(z):.3f}")
    return complex(val)


def _cauchy_transform(state, n, z, star, zeta, wz):
    """(2 pi i)^{-1} oint (zeta+z)/(zeta-z) w phi^(*)_n dzeta/zeta.

    Uses singularity subtraction when z lies inside the symbol's
    annulus of analyticity (the subtracted integrand is analytic, so
    the trapezoid rate no longer degrades near |z| = 1).
    """
    phi, phis = _phi_chain(state, n, zeta)
    g = wz * (phis[n] if star else phi[n])
    inside = abs(z) < 1.0
    if state.weight is not None:
        pz, psz = _phi_chain(state, n, np.array([z]))
        gz = complex(state.weight(complex(z)) * ((psz[n] if star else pz[n])[0]))
        core = np.mean((zeta + z) / (zeta - z) * (g - gz))
        return complex(core + gz if inside else core - gz)
    core = np.mean((zeta + z) / (zeta - z) * g)
    return complex(core)


def _assoc_value(state, n, z, star, zeta, wz):
    """Associated function eps_n (star=False) or eps*_n (star=True) at z.

    eps*_n = 1/kappa_n - Cauchy[w phi*_n]; eps_n = Cauchy[w phi_n] with
    the degree-0 case shifted by 1/kappa_0 (its second-kind seed is
    kappa_0 w_0, not zero).
    """
    cau = _cauchy_transform(state, n, z, star, zeta, wz)
    if star:
        return 1.0 / state.kappa(n) - cau
    return cau + (1.0 / state.kappa(0) if n == 0 else 0.0)


@dataclass(frozen=True)
class BopsEval:
    phi: complex
    phi_star: complex
    psi: complex
    psi_star: complex
    eps: complex
    eps_star: complex


def bops_eval(state: BopsState, n, z, M=_GRID_M):
    """Polynomials, second-kind polynomials and associated functions at z.

    phi, phi* by upward recurrence; psi, psi* by their pole-subtracted
    circle integrals; eps, eps* by Cauchy transforms of w phi and
    w phi*.  Evaluation of eps within 0.05 of |z| = 1 is refused (the
    interior/exterior limits are only reachable by the extrapolation
    used in jump_residual).
    """
    if n > state.n_max:
        raise DomainError(f"n={n} beyond the ladder (n_max={state.n_max})")
    if state.weight is None:
        raise DomainError("state carries no analytic symbol; rebuild with weight=")
    z = complex(z)
    zeta = _circle_grid(M)
    wz = np.asarray(state.weight(zeta), dtype=complex)
    phi_g, phis_g = _phi_chain(state, n, zeta)
    phi_z, phis_z = _phi_chain(state, n, np.array([z]))
    phi_n, phis_n = complex(phi_z[n][0]), complex(phis_z[n][0])
    kn = state.kappa(n)
    if n == 0:
        psi = psi_star = complex(1.0 / kn)
    else:
        # (zeta+z)/(zeta-z) times a polynomial difference: analytic integrand
        psi = complex(np.mean((zeta + z) / (zeta - z) * wz * (phi_g[n] - phi_n)))
        num = z ** n * phis_g[n] * zeta ** (-n) - phis_n
        psi_star = complex(-np.mean((zeta + z) / (zeta - z) * wz * num))
    if abs(abs(z) - 1.0) < 0.05:
        raise DomainError("associated functions need |z| at least 0.05 away "
                          "from the unit circle; use jump_residual for limits")
    eps = _assoc_value(state, n, z, False, zeta, wz)
    eps_star = _assoc_value(state, n, z, True, zeta, wz)
    return BopsEval(phi=phi_n, phi_star=phis_n, psi=psi, psi_star=psi_star,
                    eps=eps, eps_star=eps_star)


# ---------------------------------------------------------------------------
# Jump conditions
# ---------------------------------------------------------------------------

def _radial_limit(state, n, z0, star, delta, zeta, wz, inside):
    """Boundary value of the associated function by quadratic Richardson
    extrapolation along the radius, offsets delta, delta/2, delta/4."""
    sgn = 1.0 if inside else -1.0
    vals = [_assoc_value(state, n, z0 * (1.0 - sgn * d), star, zeta, wz)
            for d in (delta, delta / 2.0, delta / 4.0)]
    g1 = 2.0 * vals[1] - vals[0]
    g2 = 2.0 * vals[2] - vals[1]
    return (4.0 * g2 - g1) / 3.0


def jump_residual(state: BopsState, n, circle_points=64, lam=1.0,
                  delta=1e-3, M=_GRID_M):
    """Max residual of the boundary relations linking w phi_n (w phi*_n)
    to the interior/exterior associated-function limits.

    Residuals tested:  w phi_n + eps>/2 - lam^2 eps</2   and
                       w phi*_n - eps*>/2 + lam^2 eps*</2.

    Only lam = 1 is supported: the lam-deformed polynomial data would
    require a lam-dependent weight, which this package does not
    construct; lam != 1 consistency is covered by the scattering and
    closed-form routes.
    """
    if lam != 1.0:
        raise DomainError("jump residual is only defined for lam = 1 here; "
                          "see marchenko_solve for the lam-deformed data")
    if state.weight is None:
        raise DomainError("state carries no analytic symbol")
    zeta = _circle_grid(M)
    wz = np.asarray(state.weight(zeta), dtype=complex)
    pts = np.exp(2j * np.pi * (np.arange(circle_points) + 0.37) / circle_points)
    phi_p, phis_p = _phi_chain(state, n, pts)
    w_p = np.asarray(state.weight(pts), dtype=complex)
    worst = 0.0
    for i, z0 in enumerate(pts):
        e_in = _radial_limit(state, n, z0, False, delta, zeta, wz, True)
        e_out = _radial_limit(state, n, z0, False, delta, zeta, wz, False)
        es_in = _radial_limit(state, n, z0, True, delta, zeta, wz, True)
        es_out = _radial_limit(state, n, z0, True, delta, zeta, wz, False)
        r1 = abs(w_p[i] * phi_p[n][i] + 0.5 * e_out - 0.5 * lam ** 2 * e_in)
        r2 = abs(w_p[i] * phis_p[n][i] - 0.5 * es_out + 0.5 * lam ** 2 * es_in)
        worst = max(worst, r1, r2)
    return worst


# ---------------------------------------------------------------------------
# Christoffel-type weight shifts
# ---------------------------------------------------------------------------

def cug_transform(state: BopsState, direction):
    """Ladder of the shifted weight z^(+1) w (direction +1) or z^(-1) w (-1).

    Maps applied (direction +1; bars swap roles for -1):
      I_n      -> (-1)^n r_n I_n
      kappa_n^2 -> -kappa_n^2 r_n / r_{n+1}
      r_n      -> r_n - (kappa_{n-1}^2/kappa_n^2) r_{n+1} r_{n-1} / r_n
      rbar_n   -> 1 / r_n
    The output window shrinks by one (the r map needs both neighbours);
    degree-0 entries are pinned to 1.  Raises on vanishing reflection
    coefficients anywhere in the window.
    """
    if direction not in (+1, -1):
        raise DomainError(f"direction must be +1 or -1, got {direction}")
    ref = state.r if direction == +1 else state.rbar
    if np.any(np.abs(ref) < 1e-14):
        raise ExistenceError("zero reflection coefficient in the window; "
                             "the shifted weight loses the polynomial system")
    m = state.n_max - 1
    sgn = (-1.0) ** np.arange(m + 2)
    I_new = sgn * ref[:m + 2] * state.I[:m + 2]
    kap_new = -state.kappa_sq[:m + 1] * ref[:m + 1] / ref[1:m + 2]
    same = np.empty(m + 1)   # image of the like-named coefficient family
    same[0] = 1.0
    ns = np.arange(1, m + 1)
    same[1:] = ref[ns] - (state.kappa_sq[ns - 1] / state.kappa_sq[ns]
                          * ref[ns + 1] * ref[ns - 1] / ref[ns])
    recip = np.empty(m + 1)
    recip[0] = 1.0
    recip[1:] = 1.0 / ref[1:m + 1]
    r_new = same if direction == +1 else recip
    rbar_new = recip if direction == +1 else same
    sgn_m = (-1.0) ** np.arange(m + 1)
    return BopsState(
        moments=state.moments.shifted(direction),
        n_max=m, I=I_new,
        I_plus=sgn_m * r_new * I_new[:m + 1],
        I_minus=sgn_m * rbar_new * I_new[:m + 1],
        kappa_sq=kap_new, r=r_new, rbar=rbar_new,
    )
