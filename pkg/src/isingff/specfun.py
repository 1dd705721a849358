"""Special functions in the conventions used throughout the package.

Elliptic quantities use the PARAMETER convention everywhere: K(m), E(m)
with m = t, i.e. K(m) = (pi/2) * 2F1(1/2,1/2;1;m).  There is no
modulus-convention API; the identity (2/pi) K(t) = 2F1(1/2,1/2;1;t) is
asserted in the tests and pins the choice.

The Gauss hypergeometric function is evaluated by direct series for
arguments in [0,1) and by the Pfaff map z -> z/(z-1) for z < 0.  The
regularized variant F(a,b;c;z)/Gamma(c) stays finite for c a
non-positive integer (the series simply starts above the Gamma poles),
which is what the kernel matrices need at negative indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ellipeinc, ellipj

from .errors import AccuracyError, DivergenceError, DomainError

_SERIES_TOL = 1e-17
_SERIES_KMAX = 4000


def pochhammer(a, k):
    """Rising factorial (a)_k for integer k (k may be negative)."""
    if k == int(k):
        k = int(k)
    else:
        raise DomainError("pochhammer order must be an integer")
    if k >= 0:
        out = 1.0
        for j in range(k):
            out *= a + j
        return out
    out = 1.0
    for j in range(1, -k + 1):
        out /= a - j
    return out


def _series_2f1(a, b, c, z, regularized):
    """Power series with Gamma(c) folded per term when regularized."""
    cr = round(c)
    c_is_nonpos_int = abs(c - cr) < 1e-12 and cr <= 0
    if c_is_nonpos_int and not regularized:
        raise DomainError(f"2F1 pole: c={c} is a non-positive integer; "
                          "request the regularized variant")
    if c_is_nonpos_int:
        # 1/Gamma(c+k) vanishes through k = -c; first live term at k0 = 1-c
        k0 = int(1 - cr)
        term = z ** k0 / math.gamma(k0 + 1.0)
        for j in range(k0):
            term *= (a + j) * (b + j)
    else:
        k0 = 0
        term = 1.0 / math.gamma(c) if regularized else 1.0
    if z == 0.0:
        return term if k0 == 0 else 0.0
    total = term
    k = k0
    while k < _SERIES_KMAX:
        term *= (a + k) * (b + k) * z / ((c + k) * (k + 1.0))
        total += term
        k += 1
        if abs(term) <= _SERIES_TOL * max(1.0, abs(total)) and k > k0 + 6:
            return total
    raise AccuracyError(f"2F1 series did not converge: a={a} b={b} c={c} z={z}")


def gauss_2f1(a, b, c, z, regularized=False):
    """Gauss hypergeometric 2F1(a,b;c;z), optionally divided by Gamma(c).

    Supports real parameters with z in (-inf, 1); |z| >= 1 (after the
    Pfaff map for negative arguments) is a domain error.  Relative
    accuracy ~1e-13 for z <= 0.9.
    """
    if z >= 1.0:
        if c - a - b <= -1.0 + 1e-12:
            raise DivergenceError(f"2F1 diverges as z->1 with c-a-b={c - a - b}")
        raise DomainError(f"2F1 argument must satisfy z < 1, got {z}")
    if z < 0.0:
        # Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a,c-b;c;z/(z-1)); the
        # mapped argument lies in (0,1).  Same relation holds regularized.
        zz = z / (z - 1.0)
        return (1.0 - z) ** (-a) * _series_2f1(a, c - b, c, zz, regularized)
    if z > 0.99:
        # ~4000 series terms would still leave a visible tail
        raise DomainError(f"2F1 series unreliable for z={z} > 0.99")
    return _series_2f1(a, b, c, z, regularized)


def reg_2f1_vec(a, b, c, z, regularized=True):
    """2F1 vectorized over parameter arrays b, c (scalar a, z in [0,1)).

    With regularized=True each value is divided by Gamma(c); entries
    whose c is a non-positive integer then fall back to the scalar
    path.  With regularized=False (plain series) every c must be
    positive — the term recurrence never touches a Gamma, so values
    stay O(1) even where Gamma(c) would overflow.
    """
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    out = np.empty(b.shape)
    if regularized:
        ok = ~((np.abs(c - np.round(c)) < 1e-12) & (np.round(c) <= 0))
        for idx in np.argwhere(~ok):
            out[tuple(idx)] = gauss_2f1(a, b[tuple(idx)], c[tuple(idx)], z,
                                        regularized=True)
    else:
        if np.any(c <= 0):
            raise DomainError("plain vectorized 2F1 needs c > 0 throughout")
        ok = np.ones(b.shape, dtype=bool)
    bo, co = b[ok], c[ok]
    if regularized:
        term = np.vectorize(lambda cc: 1.0 / math.gamma(cc))(co) if co.size \
            else np.empty(0)
    else:
        term = np.ones_like(bo)
    total = term.copy()
    if z > 0.0 and co.size:
        for k in range(_SERIES_KMAX):
            term = term * (a + k) * (bo + k) * z / ((co + k) * (k + 1.0))
            total += term
            if k > 6 and np.all(np.abs(term) <= _SERIES_TOL * np.maximum(1.0, np.abs(total))):
                break
        else:
            raise AccuracyError("vectorized 2F1 series did not converge")
    out[ok] = total
    return out


def appell_f1(alpha, beta, beta_p, gamma_, x, y):
    """First Appell function F1 by its double series; max(|x|,|y|) < 1.

    Summed over total degree s with the pair sum collapsed to a
    convolution; truncated when the recent terms drop below 1e-17 of
    the running total.
    """
    if max(abs(x), abs(y)) >= 1.0:
        raise DomainError(f"Appell series needs max(|x|,|y|) < 1, got ({x}, {y})")
    size = 80
    while True:
        u = np.empty(size)
        v = np.empty(size)
        u[0] = v[0] = 1.0
        for m in range(size - 1):
            u[m + 1] = u[m] * (beta + m) * x / (m + 1.0)
            v[m + 1] = v[m] * (beta_p + m) * y / (m + 1.0)
        ratio = np.empty(size)
        ratio[0] = 1.0
        for s in range(size - 1):
            ratio[s + 1] = ratio[s] * (alpha + s) / (gamma_ + s)
        terms = ratio * np.convolve(u, v)[:size]
        total = terms.sum()
        if np.abs(terms[-6:]).max() <= _SERIES_TOL * max(1.0, abs(total)):
            return float(total)
        if size >= 4000:
            raise AccuracyError(f"Appell series did not converge at ({x}, {y})")
        size *= 2


def appell_f1_dy(alpha, beta, beta_p, gamma_, x, y):
    """d/dy F1 = (alpha*beta_p/gamma) F1(alpha+1; beta, beta_p+1; gamma+1; x, y)."""
    return alpha * beta_p / gamma_ * appell_f1(alpha + 1, beta, beta_p + 1,
                                               gamma_ + 1, x, y)


def appell_f1_quadrature(alpha, beta, beta_p, gamma_, x, y, q=64):
    """Euler-integral evaluation of F1; independent oracle for the series.

    Requires alpha > 0 and gamma - alpha > 0.  The algebraic endpoint
    factors u^(alpha-1) (1-u)^(gamma-alpha-1) are absorbed into a
    Gauss-Jacobi rule, leaving a smooth integrand.
    """
    if alpha <= 0 or gamma_ - alpha <= 0:
        raise DomainError("quadrature route needs alpha > 0 and gamma - alpha > 0")
    from .quad import gauss_jacobi_rule  # local import, avoids a cycle

    rule = gauss_jacobi_rule(q, gamma_ - alpha - 1.0, alpha - 1.0)
    u, w = rule.nodes, rule.weights
    val = float(np.sum(w * (1.0 - x * u) ** (-beta) * (1.0 - y * u) ** (-beta_p)))
    return math.gamma(gamma_) / (math.gamma(alpha) * math.gamma(gamma_ - alpha)) * val


def elliptic_complete(m):
    """Complete elliptic integrals (K, E) in the parameter convention, by AGM.

    K = pi/(2 a_N); E = K (1 - sum 2^(j-1) c_j^2) with a,b,c the usual
    arithmetic-geometric mean sequences started from c_0 = sqrt(m).
    """
    if not 0.0 <= m < 1.0:
        if m == 1.0:
            raise DivergenceError("K(m) diverges at m = 1")
        raise DomainError(f"elliptic parameter must lie in [0,1), got m={m}")
    a, b = 1.0, math.sqrt(1.0 - m)
    c = math.sqrt(m)
    csum = 0.5 * c * c
    scale = 0.5
    for _ in range(64):
        if abs(c) < 1e-18 * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        scale *= 2.0
        csum += scale * c * c
    K = math.pi / (2.0 * a)
    return K, K * (1.0 - csum)


@dataclass(frozen=True)
class JacobiSuite:
    sn: float
    cn: float
    dn: float
    am: float
    e_incomplete: float
    zeta: float


def jacobi_suite(z, m):
    """Jacobi elliptic functions, amplitude, incomplete E and Jacobi zeta.

    zeta(z,m) = E(am(z,m),m) - (E(m)/K(m)) z, i.e. the elliptic zeta in
    the scaled variable z = (2K/pi) x.
    """
    if not 0.0 <= m < 1.0:
        raise DomainError(f"parameter must lie in [0,1), got m={m}")
    sn, cn, dn, ph = ellipj(z, m)
    einc = ellipeinc(ph, m)
    K, E = elliptic_complete(m)
    return JacobiSuite(float(sn), float(cn), float(dn), float(ph),
                       float(einc), float(einc - E / K * z))


def nome(m):
    """Elliptic nome q = exp(-pi K(1-m)/K(m)); real in (0,1) for m in (0,1)."""
    if not 0.0 < m < 1.0:
        raise DomainError(f"nome needs m in (0,1), got {m}")
    K, _ = elliptic_complete(m)
    Kc, _ = elliptic_complete(1.0 - m)
    return math.exp(-math.pi * Kc / K)


def theta_nome(nu, x, m):
    """Jacobi theta function theta_nu(x | tau), nu in 1..4, via the q-series.

    tau = i K(1-m)/K(m) so the nome is real; terms are added until they
    fall below 1e-16 of the running value.
    """
    if nu not in (1, 2, 3, 4):
        raise DomainError(f"theta index must be 1..4, got {nu}")
    q = nome(m)
    if nu in (1, 2):
        total = 0.0
        for k in range(60):
            amp = q ** ((k + 0.5) ** 2)
            if nu == 1:
                term = (-1.0) ** k * amp * math.sin((2 * k + 1) * x)
            else:
                term = amp * math.cos((2 * k + 1) * x)
            total += term
            if amp < 1e-16 * max(1.0, abs(total)):
                break
        return 2.0 * total
    sign = -1.0 if nu == 4 else 1.0
    total = 1.0
    for k in range(1, 60):
        amp = q ** (k * k)
        total += 2.0 * sign ** k * amp * math.cos(2 * k * x)
        if amp < 1e-16 * max(1.0, abs(total)):
            break
    return total
