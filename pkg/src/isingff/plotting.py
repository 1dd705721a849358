"""Figure rendering for the report paths (opt-in via --plot)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def plot_sweep(rows, x_name, methods, out_png):
    """Line plot of sweep values against the varied coordinate."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xs = [row[x_name] for row in rows]
    for m in methods:
        ax.plot(xs, [row[m] for row in rows], marker=".", label=m)
    ax.set_xlabel(x_name)
    ax.set_ylabel("correlation value")
    ax.legend(frameon=False, fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)


def plot_crosscheck(report_dict, out_png):
    """Scatter of worst pairwise relative gap per grid point."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    records = report_dict["records"]
    tol = report_dict["meta"]["budgets"]["gap_tol"]
    ts, gaps, colors = [], [], []
    for rec in records:
        worst = max((g["rel"] for g in rec["gaps"]), default=0.0)
        ts.append(rec["point"]["t"])
        gaps.append(max(worst, 1e-18))
        colors.append("tab:blue" if rec["pass"] else "tab:red")
    ax.scatter(ts, gaps, c=colors, s=18)
    ax.axhline(tol, color="k", ls="--", lw=0.8, label=f"tolerance {tol:g}")
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("worst pairwise relative gap")
    ax.legend(frameon=False, fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
