"""Figure rendering for scan and bound-table reports.

Written next to the delimited report file when the CLI is given an output
path; everything uses the Agg backend so it works headless.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bounds import BoundRow  # noqa: E402
from .counting import ScanReport  # noqa: E402


def render_scan_figure(report: ScanReport, path: str) -> str:
    """Witnessless counts and per-field timing across the scanned range."""
    qs = [row.q for row in report.rows]
    counts = [row.witnessless_count for row in report.rows]
    millis = [row.millis for row in report.rows]
    exceptional = [row.q for row in report.rows if row.exceptional]

    fig, (ax_top, ax_bot) = plt.subplots(
        2, 1, figsize=(9, 6), sharex=True, gridspec_kw={"height_ratios": [2, 1]})
    ax_top.plot(qs, counts, ".", color="0.55", markersize=4, label="witnessless count")
    if exceptional:
        exc_counts = [row.witnessless_count for row in report.rows if row.exceptional]
        ax_top.plot(exceptional, exc_counts, "o", color="crimson", markersize=6,
                    label="exceptional q")
        for q, c in zip(exceptional, exc_counts):
            ax_top.annotate(str(q), (q, c), textcoords="offset points",
                            xytext=(0, 6), ha="center", fontsize=8)
    ax_top.set_ylabel("witnessless quadratics")
    ax_top.set_title(f"scan k={report.k}, q in [{report.q_lo}, {report.q_hi}]")
    ax_top.legend(loc="upper right", fontsize=8)

    ax_bot.plot(qs, millis, "-", color="steelblue", linewidth=0.8)
    ax_bot.set_xlabel("q")
    ax_bot.set_ylabel("ms per field")
    ax_bot.set_yscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_bounds_figure(rows: list[BoundRow], k: int, path: str) -> str:
    """Computed bounds per s against the primorial floor, with published points."""
    omegas = [row.omega for row in rows]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(omegas, [row.primorial for row in rows], "k-s", markersize=4,
            label="primorial of omega (least possible q-1)")
    colors = {1: "tab:blue", 2: "tab:orange", 3: "tab:green"}
    for s in (1, 2, 3):
        xs, ys, pxs, pys = [], [], [], []
        for row in rows:
            for cell in row.cells:
                if cell.s != s:
                    continue
                if cell.computed is not None:
                    xs.append(row.omega)
                    ys.append(cell.computed)
                if cell.published is not None:
                    pxs.append(row.omega)
                    pys.append(cell.published)
        ax.plot(xs, ys, "-o", color=colors[s], markersize=4, label=f"computed bound, s={s}")
        if pxs:
            ax.plot(pxs, pys, "x", color=colors[s], markersize=7,
                    label=f"published, s={s}")
    ax.set_yscale("log")
    ax.set_xlabel("distinct prime factors of q-1")
    ax.set_ylabel("bound on q")
    ax.set_title(f"sieve bounds vs primorial floor (k={k})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
