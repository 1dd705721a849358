"""Route dispatcher, cross-validation matrix and report assembly.

A report is a deterministic JSON document: one record per grid point
holding every applicable route value, all pairwise gaps judged against
a tolerance, and a block of identity residuals (strong Szego limit,
ladder recurrences, kernel anchor, sigma-form).  Conjecture-level
diagnostics (sigma-form at lambda != 1) are reported but never gate.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib.metadata import version as _pkg_version

import numpy as np

from .elliptic_exact import exact_values
from .errors import DomainError
from .formfactor import DEFAULT_Q, P_BUDGET, correlation_series
from .fredholm_cont import fredholm_cont
from .model import ModelPoint, szego_prefactor
from .painleve import sigma_residual
from .scattering import g_entry, toeplitz_from_g
from .toeplitz_bops import bops_ladder, ising_moments, toeplitz_correlation

METHODS = ("toeplitz", "formfactor", "fredholm-cont", "fredholm-disc", "exact")

GAP_TOL_DEFAULT = 1e-7
IDENTITY_TOLS = {
    "szego_limit": 1e-5,
    "g_anchor": 1e-10,
    "ladder_product": 1e-10,     # I_{n+1} I_{n-1}/I_n^2 = 1 - r_n rbar_n
    "ladder_norm": 1e-10,        # kappa_n^2 = kappa_{n-1}^2 + phi phibar at 0
    "sigma_form": 1e-5,
}


def correlate(point: ModelPoint, method, p_max=P_BUDGET, q=DEFAULT_Q, trunc=None):
    """Diagonal correlation C(n,n;lambda) by the requested route."""
    if method == "toeplitz":
        value = toeplitz_correlation(point)    # rejects lambda != 1 itself
    elif method == "formfactor":
        value = correlation_series(point, p_max=p_max, q=q,
                                   with_error=False).value
    elif method == "fredholm-cont":
        value = szego_prefactor(point.t) * fredholm_cont(point, p_max=p_max,
                                                         q=q).value
    elif method == "fredholm-disc":
        value = toeplitz_from_g(point, N=trunc)
    elif method == "exact":
        if point.n != 0:
            raise DomainError("closed-form theta route exists for n = 0 only")
        if point.t == 0.0:
            value = 1.0 if point.phase == "low" else point.lam
        else:
            vals = exact_values(point.t, point.lam)
            value = vals.I0_low if point.phase == "low" else vals.I0_high
    else:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    return float(value)


def applicable_methods(point: ModelPoint, gap_tol=GAP_TOL_DEFAULT,
                       p_max=P_BUDGET):
    """Routes meaningfully comparable at this point.

    The moment route needs lambda = 1; the discrete routes need the
    zero-winding (low) symbol; the theta route needs n = 0; the direct
    form-factor series must have its dropped tail below a tenth of the
    gap tolerance to take part in the comparison.
    """
    from .formfactor import _tail_estimate

    methods = ["fredholm-cont"]
    if point.lam == 1.0:
        methods.insert(0, "toeplitz")
    if point.phase == "low":
        methods.append("fredholm-disc")
    if point.n == 0 and point.t > 0.0 and point.lam <= 1.0:
        methods.append("exact")
    if point.t == 0.0 or _tail_estimate(point, p_max) < 0.1 * gap_tol:
        methods.insert(0, "formfactor")
    return methods


@lru_cache(maxsize=64)
def _ladder(t):
    return bops_ladder(ising_moments(t, 40), 8)


def identity_block(point: ModelPoint, include_sigma=True):
    """Identity residuals evaluated at the point's t (and lambda for the
    sigma-form).  Returns a list of dicts with name/residual/tol/pass."""
    t = point.t
    out = []

    def add(name, residual, gated=True):
        tol = IDENTITY_TOLS[name.split("[")[0]]
        out.append({"name": name, "residual": float(residual), "tol": tol,
                    "pass": bool(abs(residual) <= tol) if gated else True,
                    "gated": gated})

    if t > 0.0:
        tab = ising_moments(t, 40)
        from .toeplitz_bops import toeplitz_det
        add("szego_limit", toeplitz_det(tab, 24) - szego_prefactor(t))
        add("g_anchor", g_entry(0, 0, t) + g_entry(-1, -1, t) + 1.0)
        st = _ladder(t)
        res_prod = max(abs(st.I[n + 1] * st.I[n - 1] / st.I[n] ** 2
                           - (1.0 - st.r[n] * st.rbar[n]))
                       for n in range(1, 7))
        add("ladder_product", res_prod)
        res_norm = max(abs(st.kappa_sq[n] - st.kappa_sq[n - 1]
                           - st.kappa_sq[n] * st.r[n] * st.rbar[n])
                       for n in range(1, 7))
        add("ladder_norm", res_norm)
    if include_sigma and 0.01 < t < 0.95:
        if point.lam == 1.0:
            res = sigma_residual(point, route="toeplitz").residual
            add("sigma_form", res)
        elif point.phase == "low":
            res = sigma_residual(point, route="fredholm-disc").residual
            add("sigma_form[conjecture]", res, gated=False)
    return out


def crosscheck_point(point: ModelPoint, gap_tol=GAP_TOL_DEFAULT,
                     p_max=P_BUDGET, q=DEFAULT_Q, trunc=None,
                     include_sigma=True):
    """Evaluate every applicable route at one point and judge all gaps."""
    methods = applicable_methods(point, gap_tol, p_max)
    values = {m: correlate(point, m, p_max=p_max, q=q, trunc=trunc)
              for m in methods}
    gaps = []
    names = sorted(values)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            va, vb = values[a], values[b]
            absgap = abs(va - vb)
            scale = max(abs(va), abs(vb))
            rel = absgap / scale if scale > 0 else 0.0
            gaps.append({"a": a, "b": b, "abs": absgap, "rel": rel,
                         "tol": gap_tol,
                         "pass": bool(rel <= gap_tol or absgap <= gap_tol)})
    identities = identity_block(point, include_sigma=include_sigma)
    ok = all(g["pass"] for g in gaps) and all(i["pass"] for i in identities)
    return {
        "point": {"phase": point.phase, "n": point.n, "t": point.t,
                  "lambda": point.lam},
        "values": values,
        "gaps": gaps,
        "identities": identities,
        "pass": bool(ok),
    }


@dataclass
class CrosscheckReport:
    points: list
    gap_tol: float
    p_max: int = P_BUDGET
    q: int = DEFAULT_Q
    records: list = field(default_factory=list)

    @property
    def n_fail(self):
        return sum(not r["pass"] for r in self.records)

    def to_dict(self):
        meta = {
            "package": "isingff",
            "version": _pkg_version("isingff"),
            "numpy": np.__version__,
            "budgets": {"p_max": self.p_max, "q": self.q,
                        "gap_tol": self.gap_tol},
        }
        return {"records": self.records, "meta": meta,
                "summary": {"n_points": len(self.records),
                            "n_fail": self.n_fail}}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def default_threads():
    env = os.environ.get("ISINGFF_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def run_crosscheck(points, gap_tol=GAP_TOL_DEFAULT, p_max=P_BUDGET,
                   q=DEFAULT_Q, trunc=None, threads=None,
                   include_sigma=True):
    """Cross-check a list of points; deterministic ordered report."""
    report = CrosscheckReport(points=list(points), gap_tol=gap_tol,
                              p_max=p_max, q=q)
    threads = default_threads() if threads is None else max(1, threads)

    def one(pt):
        return crosscheck_point(pt, gap_tol=gap_tol, p_max=p_max, q=q,
                                trunc=trunc, include_sigma=include_sigma)

    if threads == 1:
        report.records = [one(pt) for pt in report.points]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            report.records = list(pool.map(one, report.points))
    return report


# ---------------------------------------------------------------------------
# Grid specification parser
# ---------------------------------------------------------------------------

def _parse_values(key, text):
    if ".." in text:
        lo, hi = text.split("..")
        return [int(v) for v in range(int(lo), int(hi) + 1)]
    if ":" in text:
        start, stop, count = text.split(":")
        return [float(v) for v in np.linspace(float(start), float(stop),
                                              int(count))]
    if "|" in text:
        parts = text.split("|")
    else:
        parts = [text]
    if key in ("n",):
        return [int(p) for p in parts]
    if key == "phase":
        if parts == ["both"]:
            return ["low", "high"]
        return parts
    return [float(p) for p in parts]


def parse_grid(spec):
    """Grid strings like "n=0..2,t=0.1:0.5:3,lambda=1,phase=low".

    Ranges: "a..b" inclusive integers, "start:stop:count" linspace,
    "v1|v2" explicit lists.  Missing keys default to n=0..2,
    t=0.1:0.5:3, lambda=1, phase=low.
    """
    table = {"n": [0, 1, 2],
             "t": [float(v) for v in np.linspace(0.1, 0.5, 3)],
             "lambda": [1.0],
             "phase": ["low"]}
    if spec:
        for chunk in spec.split(","):
            if "=" not in chunk:
                raise DomainError(f"bad grid chunk {chunk!r}")
            key, text = chunk.split("=", 1)
            key = key.strip()
            if key not in table:
                raise DomainError(f"unknown grid variable {key!r}")
            table[key] = _parse_values(key, text.strip())
    points = []
    for phase in table["phase"]:
        for n in table["n"]:
            for t in table["t"]:
                for lam in table["lambda"]:
                    points.append(ModelPoint(phase=phase, t=float(t),
                                             lam=float(lam), n=int(n)))
    return points
