"""Report emission: canonical JSON, CSV projections, SVG plots.

JSON is the canonical output; the CSV and SVG writers are projections of
the same payloads. Everything here is deterministic for a fixed input:
JSON keys are sorted, CSV rows follow the curve order, and matplotlib is
pinned (fixed hash salt, no date metadata) so repeated renders of the
same curve are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from short.nsga2 import ComparisonReport
from short.ranking import DecisionOrdering, PrefixCurve

plt.rcParams["svg.hashsalt"] = "short"


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_json(path: Path, payload: Any) -> Path:
    path.write_text(canonical_json(payload))
    return path


def curve_to_csv(curve: PrefixCurve) -> str:
    """One row per prefix length, four columns per objective."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["x", "decision", "polarity"]
    for key in curve.objectives:
        header += [
            f"{key}_median",
            f"{key}_iqr",
            f"{key}_median_smoothed",
            f"{key}_iqr_smoothed",
        ]
    writer.writerow(header)
    for pt in curve.points:
        if pt.x == 0:
            row: list[Any] = [pt.x, "", ""]
        else:
            node, polarity = curve.decisions[pt.x - 1]
            row = [pt.x, node, polarity]
        for key in curve.objectives:
            row.append(_num(pt.median[key]))
            row.append(_num(pt.iqr[key]))
            row.append(_num(pt.median_smoothed[key]) if pt.median_smoothed else "")
            row.append(_num(pt.iqr_smoothed[key]) if pt.iqr_smoothed else "")
        writer.writerow(row)
    return buf.getvalue()


def ordering_to_csv(ordering: DecisionOrdering) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    keys = sorted({k for e in ordering.entries for k in e.support})
    header = ["rank", "node", "polarity", "value"]
    for key in keys:
        header += [f"{key}_support", f"{key}_probability"]
    writer.writerow(header)
    for pos, entry in enumerate(ordering.entries, start=1):
        row: list[Any] = [pos, entry.node, entry.polarity, _num(entry.value)]
        for key in keys:
            row.append(_num(entry.support.get(key, 0.0)))
            row.append(_num(entry.probability.get(key, 0.0)))
        writer.writerow(row)
    return buf.getvalue()


def comparison_to_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "method",
            "f1_median",
            "f1_iqr",
            "f2_median",
            "f2_iqr",
            "wall_clock_median_s",
            "sample_calls_median",
        ]
    )
    for s in (report.short, report.baseline):
        writer.writerow(
            [
                s.name,
                _num(s.f1_median),
                _num(s.f1_iqr),
                _num(s.f2_median),
                _num(s.f2_iqr),
                _num(s.wall_clock_median),
                _num(s.evaluations_median),
            ]
        )
    return buf.getvalue()


def _num(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(round(x, 9))


OBJECTIVE_TITLES = {
    "o1": "o1: total cost",
    "o2": "o2: conflicts ignored",
    "o3": "o3: goals satisfied",
    "o4": "o4: soft goals satisfied",
}


def render_curve_svg(curve: PrefixCurve, path: Path) -> Path:
    """One panel per objective: median line, IQR band, smoothed overlay."""
    if not curve.objectives:
        raise ValueError("curve has no objectives to plot")
    if not curve.points:
        raise ValueError("curve has no points to plot")
    n = len(curve.objectives)
    cols = 2 if n > 1 else 1
    rows = (n + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(5.5 * cols, 3.6 * rows), squeeze=False)
    xs = [pt.x for pt in curve.points]
    for i, key in enumerate(curve.objectives):
        ax = axes[i // cols][i % cols]
        med = [pt.median[key] for pt in curve.points]
        iqr = [pt.iqr[key] for pt in curve.points]
        lo = [m - q / 2 for m, q in zip(med, iqr)]
        hi = [m + q / 2 for m, q in zip(med, iqr)]
        ax.fill_between(xs, lo, hi, alpha=0.25, color="tab:blue", label="IQR band")
        ax.plot(xs, med, color="tab:blue", marker="o", markersize=3, label="median")
        if all(pt.median_smoothed for pt in curve.points):
            smoothed = [pt.median_smoothed[key] for pt in curve.points]
            ax.plot(
                xs,
                smoothed,
                color="tab:orange",
                linestyle="--",
                label="median (smoothed)",
            )
        ax.set_xlabel("decisions pinned (ranked prefix length)")
        ax.set_ylabel(OBJECTIVE_TITLES.get(key, key))
        ax.set_title(OBJECTIVE_TITLES.get(key, key))
        if i == 0:
            ax.legend(loc="best", fontsize=8)
    for j in range(n, rows * cols):
        axes[j // cols][j % cols].axis("off")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def render_ranking_svg(ordering: DecisionOrdering, path: Path, top: int = 20) -> Path:
    """Horizontal bars of ranking values, best at the top."""
    if not ordering.entries:
        raise ValueError("ordering has no entries to plot")
    entries = ordering.entries[:top]
    labels = [f"{e.node} ({e.polarity})" for e in entries]
    values = [e.value for e in entries]
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(entries) + 1.2))
    ypos = range(len(entries) - 1, -1, -1)
    ax.barh(list(ypos), values, color="tab:blue")
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=8)
    ax.set_xlabel("ranking value (sum of support x probability)")
    ax.set_title("decision ranking")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
