"""Closed-form reference values in Jacobi-elliptic and theta variables.

With x = arcsin(lambda) and z = (2K(t)/pi) x, the first rungs of the
low-phase ladder have exact evaluations:

  I_1/I_0    = sec(x) [cn dn + sn Z]              (= 1/kappa_0^2)
  I_0/I_-1   = sec(x) / [cn dn + sn Z]            (= 1/kappa_-1^2)
  r_0        = sn(z, t)
  rbar_0     = (1/sn) [1 + cn dn + sn Z][1 - cn dn - sn Z]

and the n = 0 lambda-generalized correlation is a theta-function ratio

  I_0 = (1-t)^(1/4) theta4(x)/theta4(0)                       (low)
  I_0 = (1-t)^(1/4) theta3(0) theta1(x)/(theta2(0) theta4(0)) (high)

with nome q = exp(-pi K(1-t)/K(t)).  lambda = 1 corresponds to
x = pi/2 where sec(x) blows up; the surviving limits are taken
analytically (I_1/I_0 -> (2/pi) E(t), I_0 -> 1, r_0 = rbar_0 = 1,
and I_0/I_-1 genuinely diverges).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .specfun import elliptic_complete, jacobi_suite, theta_nome


@dataclass(frozen=True)
class LambdaCoordinates:
    """lambda = sin(x), z = (2K(t)/pi) x; lambda in [0,1] <-> x in [0,pi/2]."""

    t: float
    lam: float
    x: float
    z: float

    @classmethod
    def from_lambda(cls, t, lam):
        if not 0.0 <= lam <= 1.0:
            raise DomainError(f"lambda must lie in [0,1], got {lam}")
        x = math.asin(lam)
        K, _ = elliptic_complete(t)
        return cls(t=t, lam=lam, x=x, z=2.0 * K / math.pi * x)


@dataclass(frozen=True)
class ExactValues:
    I1_over_I0: float
    I0_over_Iminus1: float
    r0: float
    rbar0: float
    I0_low: float
    I0_high: float


def _theta_ratio(t, x, phase):
    if phase == "low":
        return theta_nome(4, x, t) / theta_nome(4, 0.0, t)
    return (theta_nome(3, 0.0, t) * theta_nome(1, x, t)
            / (theta_nome(2, 0.0, t) * theta_nome(4, 0.0, t)))


def exact_values(t, lam):
    """Closed-form ladder values at (t, lambda); t in (0,1), lambda in [0,1]."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0,1), got {t}")
    co = LambdaCoordinates.from_lambda(t, lam)
    pref = (1.0 - t) ** 0.25
    K, E = elliptic_complete(t)
    if lam == 1.0:
        return ExactValues(
            I1_over_I0=2.0 * E / math.pi,
            I0_over_Iminus1=math.inf,
            r0=1.0, rbar0=1.0, I0_low=1.0, I0_high=1.0)
    jac = jacobi_suite(co.z, t)
    core = jac.cn * jac.dn + jac.sn * jac.zeta
    sec = 1.0 / math.cos(co.x)
    if lam == 0.0:
        r0 = rbar0 = 0.0
    else:
        r0 = jac.sn
        rbar0 = (1.0 + core) * (1.0 - core) / jac.sn
    return ExactValues(
        I1_over_I0=sec * core,
        I0_over_Iminus1=sec / core,
        r0=r0, rbar0=rbar0,
        I0_low=pref * _theta_ratio(t, co.x, "low"),
        I0_high=pref * _theta_ratio(t, co.x, "high"))


_EVEN = {"I1_over_I0", "I0_over_Iminus1", "I0_low"}
_ODD = {"r0", "rbar0", "I0_high"}


def lambda_series(which, t, order=4, u_step=0.005):
    """Leading lambda-series coefficients [c_0, ..., c_order] of a
    closed-form quantity, by numerical differentiation at lambda = 0.

    All six quantities have definite parity in lambda, so the series is
    extracted in u = lambda^2: even quantities via g(u) = f(sqrt(u)),
    odd ones via g(u) = f(sqrt(u))/sqrt(u).  A 6-point polynomial fit
    in u at two step sizes plus one Richardson step reaches absolute
    accuracy ~1e-9, far below a plain lambda-stencil whose 4th
    derivative would drown in roundoff.
    """
    if order > 4:
        raise DomainError(f"series extraction supports order <= 4, got {order}")
    if which in _EVEN:
        parity = 0
    elif which in _ODD:
        parity = 1
    else:
        raise DomainError(f"unknown selector {which!r}")

    def g(u):
        lam = math.sqrt(u)
        val = getattr(exact_values(t, lam), which)
        return val / lam if parity else val

    def fit(h):
        import numpy as np
        us = h * np.arange(1, 7)
        vals = np.array([g(u) for u in us])
        return np.polyfit(us, vals, 5)[::-1]   # coefficients of u^0..u^5

    c_h = fit(u_step)
    c_h2 = fit(u_step / 2.0)
    coeffs = [0.0] * (order + 1)
    for k in range(3):                         # u^0, u^1, u^2 suffice for order 4
        extrap = c_h2[k] + (c_h2[k] - c_h[k]) / (2.0 ** (6 - k) - 1.0)
        lam_power = 2 * k + parity
        if lam_power <= order:
            coeffs[lam_power] = float(extrap)
    return coeffs
