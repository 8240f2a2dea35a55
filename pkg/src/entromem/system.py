"""A bank of per-class memory registers with an entropy-based filter.

One register per class. A cue is recognized by the system when at least one
register accepts it; if several do, the accepting register with the smallest
entropy wins (ties go to the smallest class id, which keeps decisions
deterministic). Rejection by every register yields the unknown outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .memory import MemoryRegister


@dataclass(frozen=True)
class SystemDecision:
    """Outcome of one system-level recognition or retrieval."""

    label: Optional[int]
    accepting: tuple[int, ...]
    retrieved: Optional[np.ndarray] = field(default=None, compare=False)

    @property
    def accepted(self) -> bool:
        return self.label is not None


class MemorySystem:
    def __init__(self, classes: int, n: int, rows: int):
        if classes < 1:
            raise ValueError(f"need at least one class, got {classes}")
        self.registers = [MemoryRegister(n, rows) for _ in range(classes)]
        self.n = n
        self.rows = rows
        self._entropies: Optional[np.ndarray] = None

    @property
    def classes(self) -> int:
        return len(self.registers)

    def register_instance(self, label: int, fn: np.ndarray) -> None:
        """Store one function in the register of its class."""
        if not 0 <= label < self.classes:
            raise ValueError(f"class {label} outside [0, {self.classes - 1}]")
        self.registers[label].register(fn)
        self._entropies = None

    def entropies(self) -> np.ndarray:
        """Per-register entropy, cached between registrations."""
        if self._entropies is None:
            self._entropies = np.array([r.entropy() for r in self.registers])
        return self._entropies

    def accepting_set(self, cue: np.ndarray, tolerance: int = 0) -> tuple[int, ...]:
        return tuple(c for c, reg in enumerate(self.registers)
                     if reg.recognize(cue, tolerance))

    def _select(self, accepting: tuple[int, ...]) -> Optional[int]:
        if not accepting:
            return None
        ent = self.entropies()
        # min() scans in class-id order, so entropy ties pick the smaller id
        return min(accepting, key=lambda c: ent[c])

    def recognize_system(self, cue: np.ndarray, tolerance: int = 0) -> SystemDecision:
        accepting = self.accepting_set(cue, tolerance)
        return SystemDecision(self._select(accepting), accepting)

    def retrieve_system(self, cue: np.ndarray, tolerance: int = 0,
                        rng: Optional[np.random.Generator] = None) -> SystemDecision:
        """As recognize_system, plus the winning register's retrieval."""
        accepting = self.accepting_set(cue, tolerance)
        label = self._select(accepting)
        if label is None:
            return SystemDecision(None, accepting)
        retrieved = self.registers[label].retrieve(cue, tolerance, rng)
        return SystemDecision(label, accepting, retrieved)
