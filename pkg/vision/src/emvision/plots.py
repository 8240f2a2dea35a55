"""Metric figures from sweep result CSVs.

One figure per sweep file: register and system precision/recall as lines
over the swept variable (grid exponent m or fill percent, taken from the
fold-averaged rows), with the average register entropy as bars on a second
axis. Output bytes depend only on the input CSV.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

LINES = [("reg_precision", "tab:blue", "register precision"),
         ("reg_recall", "tab:cyan", "register recall"),
         ("sys_precision", "tab:red", "system precision"),
         ("sys_recall", "tab:orange", "system recall")]


def read_sweep_csv(path) -> tuple[str, list[dict]]:
    """Fold-averaged rows plus the swept column name (m or fill_pct)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "entropy" not in reader.fieldnames:
            raise ValueError(f"{path}: not a sweep result table")
        swept = reader.fieldnames[1]
        rows = [r for r in reader if r["fold"] == "avg"]
    if not rows:
        raise ValueError(f"{path}: no fold-averaged rows")
    return swept, rows


def plot_sweep(csv_path, out_path) -> Path:
    swept, rows = read_sweep_csv(csv_path)
    xs = [float(r[swept]) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    bar_ax = ax.twinx()
    bar_ax.bar(xs, [float(r["entropy"]) for r in rows],
               width=(max(xs) - min(xs)) / (2.5 * len(xs)) if len(xs) > 1 else 0.4,
               color="0.8", zorder=0, label="entropy")
    bar_ax.set_ylabel("entropy")
    for column, color, label in LINES:
        ax.plot(xs, [float(r[column]) for r in rows], marker="o",
                color=color, label=label, zorder=3)
    ax.set_xlabel({"m": "grid exponent m (rows = 2^m)",
                   "fill_pct": "remembered corpus %"}.get(swept, swept))
    if swept == "fill_pct":
        ax.set_xscale("log")
        ax.set_xticks(xs)
        ax.get_xaxis().set_major_formatter(matplotlib.ticker.ScalarFormatter())
    ax.set_ylabel("precision / recall")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="center left", fontsize=8)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=120, metadata={"Software": "emvision"})
    plt.close(fig)
    return out_path


def plot_metrics(csv_paths, out_dir) -> list[Path]:
    """One figure per sweep CSV, named after the input file."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [plot_sweep(path, out_dir / (Path(path).stem + ".png"))
            for path in csv_paths]
