"""Precision/recall accounting at register and system level.

Two bookkeeping rules coexist deliberately. Register-level metrics charge
every register independently: a test instance is a TP or FN for its own
class register and an FP for every other register that accepts it. System
metrics account for the single filtered decision: each instance contributes
exactly one TP (accepted, right class), one FN (rejected everywhere), or
one FP plus one FN (accepted under the wrong class).

Undefined ratios (zero denominator) are reported as 1.0 with an explicit
flag instead of being dropped, so aggregated tables keep a stable shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .system import MemorySystem


@dataclass(frozen=True)
class RegisterMetrics:
    label: int
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    precision_undefined: bool
    recall_undefined: bool
    entropy: float


@dataclass(frozen=True)
class SystemMetrics:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    precision_undefined: bool
    accepting_avg: float
    entropy_avg: float


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 1.0, True
    return num / den, False


def accept_matrix(system: MemorySystem, cues: np.ndarray,
                  tolerance: int = 0) -> np.ndarray:
    """(k, classes) boolean matrix: which registers accept which cues."""
    cues = np.asarray(cues, dtype=np.int64)
    cols = [reg.miss_counts(cues) <= tolerance for reg in system.registers]
    return np.stack(cols, axis=1)


def eval_register_metrics(system: MemorySystem, cues: np.ndarray,
                          labels: np.ndarray,
                          tolerance: int = 0) -> list[RegisterMetrics]:
    labels = np.asarray(labels, dtype=np.int64)
    accepted = accept_matrix(system, cues, tolerance)
    entropies = system.entropies()
    out = []
    for cls in range(system.classes):
        own = labels == cls
        tp = int(accepted[own, cls].sum())
        fn = int(own.sum()) - tp
        fp = int(accepted[~own, cls].sum())
        precision, p_undef = _ratio(tp, tp + fp)
        recall, r_undef = _ratio(tp, tp + fn)
        out.append(RegisterMetrics(cls, tp, fp, fn, precision, recall,
                                   p_undef, r_undef, float(entropies[cls])))
    return out


def eval_system_metrics(system: MemorySystem, cues: np.ndarray,
                        labels: np.ndarray, tolerance: int = 0) -> SystemMetrics:
    labels = np.asarray(labels, dtype=np.int64)
    accepted = accept_matrix(system, cues, tolerance)
    sizes = accepted.sum(axis=1)
    any_accept = sizes > 0

    # smallest entropy among accepting registers; argmin takes the first
    # minimum, which breaks entropy ties toward the smaller class id
    masked = np.where(accepted, system.entropies()[None, :], np.inf)
    winners = masked.argmin(axis=1)

    correct = any_accept & (winners == labels)
    wrong = any_accept & ~correct
    tp = int(correct.sum())
    fp = int(wrong.sum())
    fn = int((~any_accept).sum()) + fp
    precision, p_undef = _ratio(tp, tp + fp)
    recall, _ = _ratio(tp, tp + fn)
    return SystemMetrics(tp, fp, fn, precision, recall, p_undef,
                         float(sizes.mean()) if sizes.size else 0.0,
                         float(system.entropies().mean()))
