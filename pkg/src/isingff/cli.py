"""Command-line interface.

Subcommands
  correlate    one route at one point
  crosscheck   every applicable route on a grid, with pass/fail gaps
  kernel-dump  kernel matrices / tables for external inspection
  sweep        CSV series along t, lambda or n (optionally plotted)

Exit codes: 0 success, 1 any crosscheck FAIL, 2 argument errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .crosscheck import (GAP_TOL_DEFAULT, METHODS, correlate, default_threads,
                         parse_grid, run_crosscheck)
from .errors import IsingffError
from .formfactor import DEFAULT_Q, P_BUDGET
from .model import ModelPoint
from .scattering import g_matrix, truncation_size


def _point_from_args(args):
    return ModelPoint(phase=args.phase, t=args.t, lam=getattr(args, "lam"),
                      n=args.n)


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _cmd_correlate(args):
    point = _point_from_args(args)
    value = correlate(point, args.method, p_max=args.pmax, q=args.q,
                      trunc=args.trunc)
    if args.json:
        doc = {"point": {"phase": point.phase, "n": point.n, "t": point.t,
                         "lambda": point.lam},
               "method": args.method, "value": value}
        _write_text(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    elif args.csv:
        lines = ["phase,n,t,lambda,method,value",
                 f"{point.phase},{point.n},{point.t!r},{point.lam!r},"
                 f"{args.method},{value!r}"]
        _write_text(args.out, "\n".join(lines) + "\n")
    else:
        _write_text(args.out, f"{value!r}\n")
    return 0


def _cmd_crosscheck(args):
    points = parse_grid(args.grid)
    report = run_crosscheck(points, gap_tol=args.tol, p_max=args.pmax,
                            q=args.q, trunc=args.trunc, threads=args.threads)
    text = report.to_json()
    out = args.out or "crosscheck.json"
    _write_text(out, text)
    if args.csv:
        csv_path = Path(out).with_suffix(".csv")
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["phase", "n", "t", "lambda", "worst_rel_gap",
                             "worst_identity_residual", "pass"])
            for rec in report.records:
                pt = rec["point"]
                worst_gap = max((g["rel"] for g in rec["gaps"]), default=0.0)
                worst_id = max((abs(i["residual"]) for i in rec["identities"]
                                if i["gated"]), default=0.0)
                writer.writerow([pt["phase"], pt["n"], repr(pt["t"]),
                                 repr(pt["lambda"]), repr(worst_gap),
                                 repr(worst_id), rec["pass"]])
    if args.plot:
        from .plotting import plot_crosscheck
        plot_crosscheck(report.to_dict(), str(Path(out).with_suffix(".png")))
    n_fail = report.n_fail
    print(f"crosscheck: {len(report.records)} points, {n_fail} FAIL",
          file=sys.stderr)
    return 1 if n_fail else 0


def _cmd_kernel_dump(args):
    out = args.out or f"kernel-{args.which}.json"
    if args.which == "G":
        N = args.trunc or truncation_size(args.t, args.n)
        km = g_matrix(args.n, N, args.t)
        doc = {"which": "G", "n_start": km.n_start, "N": km.N, "t": km.t,
               "entries": km.entries.tolist()}
    else:
        from .fredholm_cont import kernel_high, kernel_low
        from .quad import gauss_jacobi_rule
        n, t, q = args.n, args.t, args.q
        if args.which == "appell-low":
            rule = gauss_jacobi_rule(q, -0.5, n + 0.5)
            x = rule.nodes
            mat = [[kernel_low(xi, xj, n, t) for xj in x] for xi in x]
            doc = {"which": "appell-low", "n": n, "t": t,
                   "nodes": x.tolist(), "kernel": mat}
        else:
            rule = gauss_jacobi_rule(q, 0.5, max(n - 1.5, -0.5))
            x = rule.nodes
            K0 = None
            border = []
            body = []
            for xi in x:
                k0, k1, _ = kernel_high(xi, xi, n, t)
                K0 = k0
                border.append(k1)
                body.append([kernel_high(xi, xj, n, t)[2] for xj in x])
            doc = {"which": "appell-high", "n": n, "t": t,
                   "nodes": x.tolist(), "K0": K0, "K1": border, "K2": body}
    if args.csv and args.which in ("G", "appell-low"):
        key = "entries" if args.which == "G" else "kernel"
        rows = doc[key]
        path = Path(out).with_suffix(".csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            for row in rows:
                writer.writerow([repr(v) for v in row])
    _write_text(out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_sweep(args):
    methods = [m.strip() for m in args.method.split(",")]
    for m in methods:
        if m not in METHODS:
            raise IsingffError(f"unknown method {m!r}")
    if args.vary == "n":
        values = list(range(int(args.start), int(args.stop) + 1))
    else:
        values = [float(v) for v in np.linspace(args.start, args.stop,
                                                args.count)]
    rows = []
    for v in values:
        kw = {"phase": args.phase, "t": args.t, "lam": args.lam, "n": args.n}
        kw["lam" if args.vary == "lambda" else args.vary] = v
        point = ModelPoint(**kw)
        row = {"phase": point.phase, "n": point.n, "t": point.t,
               "lambda": point.lam}
        for m in methods:
            row[m] = correlate(point, m, p_max=args.pmax, q=args.q,
                               trunc=args.trunc)
        rows.append(row)
    out = args.out or "sweep.csv"
    header = ["phase", "n", "t", "lambda"] + methods
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row["phase"]] +
                            [repr(row[k]) for k in header[1:]])
    if args.plot:
        from .plotting import plot_sweep
        x_name = "lambda" if args.vary == "lambda" else args.vary
        plot_sweep(rows, x_name, methods, str(Path(out).with_suffix(".png")))
    return 0


def _add_point_args(p, t_required=True):
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--t", type=float, required=t_required, default=0.3)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--phase", choices=("low", "high"), default="low")


def _add_budget_args(p):
    p.add_argument("--pmax", type=int, default=P_BUDGET)
    p.add_argument("--q", type=int, default=DEFAULT_Q)
    p.add_argument("--trunc", type=int, default=None,
                   help="window size for the discrete determinant")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="isingff",
        description="Diagonal Ising correlations by four cross-validated routes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", help="evaluate one route at one point")
    _add_point_args(p)
    _add_budget_args(p)
    p.add_argument("--method", choices=METHODS, required=True)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("crosscheck", help="run the route matrix on a grid")
    p.add_argument("--grid", default="",
                   help='e.g. "n=0..2,t=0.1:0.5:3,lambda=1,phase=low"')
    p.add_argument("--tol", type=float, default=GAP_TOL_DEFAULT)
    _add_budget_args(p)
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--out", default=None)
    p.add_argument("--csv", action="store_true",
                   help="also write a CSV summary next to the JSON")
    p.add_argument("--plot", action="store_true",
                   help="render a gap plot next to the report")
    p.set_defaults(func=_cmd_crosscheck)

    p = sub.add_parser("kernel-dump", help="write kernel matrices/tables")
    p.add_argument("--which", choices=("G", "appell-low", "appell-high"),
                   required=True)
    _add_point_args(p)
    _add_budget_args(p)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_kernel_dump)

    p = sub.add_parser("sweep", help="CSV series along t, lambda or n")
    p.add_argument("--vary", choices=("t", "lambda", "n"), required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, default=21)
    _add_point_args(p, t_required=False)
    _add_budget_args(p)
    p.add_argument("--method", default="toeplitz",
                   help="comma-separated route list")
    p.add_argument("--out", default=None)
    p.add_argument("--plot", action="store_true",
                   help="render a PNG next to the CSV")
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IsingffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
