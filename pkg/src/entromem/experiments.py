"""Reproducible experiment sweeps over register geometry and memory fill.

Four procedures, all emitting CSV tables plus a JSON sidecar that echoes
every parameter:

* rows_sweep     - grow the value grid (rows = 2^m, m in a range) at full
                   fill and track register/system precision, recall and
                   entropy per fold, with fold-averaged summary rows.
* fill_sweep     - fix the grid, fill registers with growing per-class
                   prefixes of the remembered corpus.
* retrieval_table - retrieve one object per (cue, fill) and dump the
                   dequantized result, or a rejection marker.
* occlusion_table - as retrieval_table but cues come from a separate
                   (occluded) feature file and the recognition tolerance
                   sweeps a list of relaxations.

Fill levels reuse one MemorySystem per fold by registering prefix
differences: storing is monotone and order-independent, so the grid equals
the one a fresh build would produce. Result rows are keyed and sorted
before writing; reruns with identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .dataset import (FILL_PERCENTS, Dataset, format_real,
                      split_for_fold, take_fraction)
from .metrics import eval_register_metrics, eval_system_metrics
from .quantize import Quantizer
from .system import MemorySystem

ROWS_SWEEP_COLUMNS = ["fold", "m", "entropy", "reg_precision", "reg_recall",
                      "sys_precision", "sys_recall", "accepting_avg"]
FILL_SWEEP_COLUMNS = ["fold", "fill_pct", "entropy", "reg_precision",
                      "reg_recall", "sys_precision", "sys_recall",
                      "accepting_avg"]

METRIC_NOTES = {
    "register_metrics_average": "uniform over classes",
    "quantizer_calibration": "train-split column min/max, round half up",
    "undefined_ratios": "zero-denominator ratios reported as 1.0",
}


@dataclass(frozen=True)
class RowsSweepConfig:
    m_min: int = 0
    m_max: int = 9
    folds: tuple[int, ...] = tuple(range(10))
    tolerance: int = 0


@dataclass(frozen=True)
class FillSweepConfig:
    m: int = 6
    fills: tuple[int, ...] = FILL_PERCENTS
    folds: tuple[int, ...] = tuple(range(10))
    tolerance: int = 0


@dataclass(frozen=True)
class RetrievalConfig:
    m: int = 6
    fills: tuple[int, ...] = FILL_PERCENTS
    fold: int = 0
    tolerance: int = 0
    cues_per_class: int = 1
    seed: int = 0


@dataclass(frozen=True)
class OcclusionConfig:
    m: int = 6
    fills: tuple[int, ...] = FILL_PERCENTS
    fold: int = 0
    tolerances: tuple[int, ...] = (0, 1, 2, 3)
    seed: int = 0


class _FoldRun:
    """Quantized corpora plus an incrementally fillable system for one fold."""

    def __init__(self, dataset: Dataset, fold: int, rows: int):
        self.split = split_for_fold(dataset, fold)
        if self.split.train.size == 0:
            raise ValueError(f"fold {fold}: empty train split")
        self.quantizer = Quantizer.fit(dataset.features[self.split.train])
        self.rows = rows
        self.rem_labels = dataset.labels[self.split.remember]
        self.rem_fns = self.quantizer.quantize_many(
            dataset.features[self.split.remember], rows)
        self.test_labels = dataset.labels[self.split.test]
        self.test_fns = self.quantizer.quantize_many(
            dataset.features[self.split.test], rows)
        self.system = MemorySystem(dataset.class_count, dataset.n, rows)
        self._registered = np.zeros(self.rem_labels.size, dtype=bool)

    def fill_to(self, percent: int) -> MemorySystem:
        """Register the per-class prefix for `percent`, reusing prior fills."""
        chosen = take_fraction(self.rem_labels, percent)
        for pos in chosen[~self._registered[chosen]]:
            self.system.register_instance(int(self.rem_labels[pos]),
                                          self.rem_fns[pos])
        self._registered[chosen] = True
        return self.system


def _cell_metrics(system: MemorySystem, test_fns: np.ndarray,
                  test_labels: np.ndarray, tolerance: int) -> dict:
    per_reg = eval_register_metrics(system, test_fns, test_labels, tolerance)
    sysm = eval_system_metrics(system, test_fns, test_labels, tolerance)
    return {
        "entropy": sysm.entropy_avg,
        "reg_precision": float(np.mean([r.precision for r in per_reg])),
        "reg_recall": float(np.mean([r.recall for r in per_reg])),
        "sys_precision": sysm.precision,
        "sys_recall": sysm.recall,
        "accepting_avg": sysm.accepting_avg,
    }


def _fold_average(rows: list[dict], key: str) -> list[dict]:
    metrics = [c for c in rows[0] if c not in ("fold", key)]
    averaged = []
    for value in sorted({r[key] for r in rows}):
        group = [r for r in rows if r[key] == value]
        avg = {"fold": "avg", key: value}
        avg.update({m: float(np.mean([g[m] for g in group])) for m in metrics})
        averaged.append(avg)
    return averaged


def rows_sweep(dataset: Dataset, config: RowsSweepConfig = RowsSweepConfig()) -> list[dict]:
    """Experiment over grid heights rows = 2^m for m in [m_min, m_max]."""
    if not 0 <= config.m_min <= config.m_max:
        raise ValueError(f"bad m range [{config.m_min}, {config.m_max}]")
    if not config.folds:
        raise ValueError("need at least one fold")
    per_fold = []
    for fold in config.folds:
        for m in range(config.m_min, config.m_max + 1):
            run = _FoldRun(dataset, fold, 2 ** m)
            system = run.fill_to(100)
            row = {"fold": fold, "m": m}
            row.update(_cell_metrics(system, run.test_fns, run.test_labels,
                                     config.tolerance))
            per_fold.append(row)
    per_fold.sort(key=lambda r: (r["fold"], r["m"]))
    return per_fold + _fold_average(per_fold, "m")


def fill_sweep(dataset: Dataset, config: FillSweepConfig = FillSweepConfig()) -> list[dict]:
    """Experiment over remembered-corpus fractions at a fixed grid height."""
    for pct in config.fills:
        if pct not in FILL_PERCENTS:
            raise ValueError(f"fill percent must be one of {FILL_PERCENTS}, got {pct}")
    if not config.fills or not config.folds:
        raise ValueError("need at least one fill percent and one fold")
    per_fold = []
    for fold in config.folds:
        run = _FoldRun(dataset, fold, 2 ** config.m)
        for pct in sorted(config.fills):
            system = run.fill_to(pct)
            row = {"fold": fold, "fill_pct": pct}
            row.update(_cell_metrics(system, run.test_fns, run.test_labels,
                                     config.tolerance))
            per_fold.append(row)
    per_fold.sort(key=lambda r: (r["fold"], r["fill_pct"]))
    return per_fold + _fold_average(per_fold, "fill_pct")


def _pick_cues(labels: np.ndarray, candidates: np.ndarray,
               per_class: int) -> np.ndarray:
    chosen = []
    for cls in np.unique(labels[candidates]):
        of_class = candidates[labels[candidates] == cls]
        chosen.extend(of_class[:per_class])
    return np.asarray(sorted(chosen), dtype=np.int64)


def retrieval_table(dataset: Dataset,
                    config: RetrievalConfig = RetrievalConfig()) -> list[dict]:
    """Retrieve each cue at every fill level; one row per (cue, fill).

    Cues are the first `cues_per_class` test instances of each class in
    file order; `cue_id` is the instance's row index in the dataset file.
    Rejected cells keep empty feature fields.
    """
    run = _FoldRun(dataset, config.fold, 2 ** config.m)
    cue_ids = _pick_cues(dataset.labels, run.split.test, config.cues_per_class)
    cue_fns = run.quantizer.quantize_many(dataset.features[cue_ids], run.rows)
    rng = np.random.default_rng(config.seed)
    rows = []
    for pct in sorted(config.fills):
        system = run.fill_to(pct)
        for cue_id, fn in zip(cue_ids, cue_fns):
            decision = system.retrieve_system(fn, config.tolerance, rng)
            rows.append(_retrieval_row(dataset, run, int(cue_id), pct,
                                       config.tolerance, decision))
    rows.sort(key=lambda r: (r["cue_id"], r["fill_pct"], r["tolerance"]))
    return rows


def occlusion_table(dataset: Dataset, cue_dataset: Dataset,
                    config: OcclusionConfig = OcclusionConfig()) -> list[dict]:
    """Retrieval sweep with external (occluded) cues and relaxed tolerances.

    The memory is filled from `dataset` exactly as in retrieval_table; cues
    are every row of `cue_dataset`, quantized with the memory's quantizer.
    One row per (cue, fill, tolerance).
    """
    if cue_dataset.n != dataset.n:
        raise ValueError("cue file and dataset disagree on feature count")
    run = _FoldRun(dataset, config.fold, 2 ** config.m)
    cue_fns = run.quantizer.quantize_many(cue_dataset.features, run.rows)
    rng = np.random.default_rng(config.seed)
    rows = []
    for pct in sorted(config.fills):
        system = run.fill_to(pct)
        for tolerance in sorted(config.tolerances):
            for cue_id, fn in enumerate(cue_fns):
                decision = system.retrieve_system(fn, tolerance, rng)
                rows.append(_retrieval_row(cue_dataset, run, cue_id, pct,
                                           tolerance, decision))
    rows.sort(key=lambda r: (r["cue_id"], r["fill_pct"], r["tolerance"]))
    return rows


def _retrieval_row(source: Dataset, run: _FoldRun, cue_id: int, pct: int,
                   tolerance: int, decision) -> dict:
    row = {
        "cue_id": cue_id,
        "true_label": int(source.labels[cue_id]),
        "fill_pct": pct,
        "tolerance": tolerance,
        "selected_label": "" if decision.label is None else decision.label,
        "accepted": int(decision.accepted),
    }
    if decision.retrieved is None:
        feats = [""] * source.n
    else:
        reals = run.quantizer.dequantize(decision.retrieved, run.rows)
        feats = [format_real(x) for x in reals]
    row.update({f"f{i}": feats[i] for i in range(source.n)})
    return row


def retrieval_columns(n: int) -> list[str]:
    return ["cue_id", "true_label", "fill_pct", "tolerance",
            "selected_label", "accepted"] + [f"f{i}" for i in range(n)]


def _cell_text(value) -> str:
    if isinstance(value, float):
        return format_real(value)
    return str(value)


def write_result_csv(path, columns: Sequence[str], rows: list[dict]) -> None:
    path = Path(path)
    lines = [",".join(columns)]
    lines.extend(",".join(_cell_text(row[c]) for c in columns) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_run_meta(csv_path, command: str, params: dict,
                   notes: Optional[dict] = None) -> None:
    """Echo every run parameter next to its result file."""
    from . import __version__
    meta = {
        "command": command,
        "version": __version__,
        "parameters": params,
        "notes": dict(METRIC_NOTES, **(notes or {})),
    }
    Path(csv_path).with_suffix(".meta").write_text(
        json.dumps(meta, indent=2) + "\n", encoding="utf-8")
