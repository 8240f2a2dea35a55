"""Associative memory registers over boolean tables.

A :class:`MemoryRegister` is an ``n x rows`` boolean grid. Columns are
attributes, rows are discrete attribute values, and a stored object is a
function from attributes to values, written into the grid one cell per
attribute. Storing is cellwise inclusive disjunction, so the grid holds the
superposition of everything ever stored: a distributed representation in
which one cell can serve many objects and one object spans many cells.

Recognition tests cue inclusion (every defined cue cell must be on, up to a
tolerance of misses), and retrieval builds a fresh object by sampling each
column around the cue from a discrete triangular distribution. Indeterminacy
of the stored relation is measured by ``entropy``: the mean log2 of the
per-column on-cell counts.

Functions are plain numpy int arrays; the sentinel ``UNDEFINED`` (-1) marks
attributes with no value, which register skips and recognition satisfies
vacuously.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

UNDEFINED = -1


class ColumnRun(NamedTuple):
    """Maximal contiguous stretch of on cells within one column."""

    lo: int
    hi: int


def sample_triangular(lo: int, hi: int, mode: int, rng: np.random.Generator,
                      size: Optional[int] = None):
    """Draw integers from [lo, hi] with a discrete triangular profile.

    The weight of value v is ``w + 1 - |v - mode|`` where
    ``w = max(mode - lo, hi - mode)``, so the mode is heaviest and weights
    fall off linearly to at least 1 at the run ends. ``mode`` is clamped
    into [lo, hi] first. Draws are exact integer-weight inverse-CDF samples,
    fully determined by ``rng``.

    Returns a single int when ``size`` is None, else an int array.
    """
    if hi < lo:
        raise ValueError(f"empty run: lo={lo} > hi={hi}")
    mode = min(max(mode, lo), hi)
    width = hi - lo + 1
    if width == 1:
        return lo if size is None else np.full(size, lo, dtype=np.int64)
    values = np.arange(lo, hi + 1)
    w = max(mode - lo, hi - mode)
    weights = w + 1 - np.abs(values - mode)
    cum = np.cumsum(weights)
    draw = rng.integers(0, cum[-1], size=size)
    picked = values[np.searchsorted(cum, draw, side="right")]
    return int(picked) if size is None else picked


class MemoryRegister:
    """One associative memory register: a boolean attribute/value table."""

    def __init__(self, n: int, rows: int):
        if n < 1:
            raise ValueError(f"attribute count must be >= 1, got {n}")
        if rows < 1:
            raise ValueError(f"row count must be >= 1, got {rows}")
        self.n = n
        self.rows = rows
        self.cells = np.zeros((n, rows), dtype=bool)
        self.registered_count = 0

    def _check_values(self, fn: np.ndarray) -> np.ndarray:
        fn = np.asarray(fn, dtype=np.int64)
        if fn.shape != (self.n,):
            raise ValueError(
                f"function has {fn.shape} values, register expects ({self.n},)")
        bad = (fn != UNDEFINED) & ((fn < 0) | (fn >= self.rows))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise ValueError(
                f"value {fn[i]} at attribute {i} outside [0, {self.rows - 1}]")
        return fn

    def register(self, fn: np.ndarray) -> None:
        """Store a function: turn on cell (i, fn[i]) for every defined i.

        Cells only ever go off -> on, so storing is monotone, idempotent and
        order-independent. Raises ValueError (leaving the grid untouched) if
        any defined value is out of range.
        """
        fn = self._check_values(fn)
        defined = fn != UNDEFINED
        self.cells[np.flatnonzero(defined), fn[defined]] = True
        self.registered_count += 1

    def misses(self, cue: np.ndarray) -> int:
        """Count defined cue attributes whose cell is off."""
        cue = self._check_values(cue)
        defined = cue != UNDEFINED
        on = self.cells[np.flatnonzero(defined), cue[defined]]
        return int((~on).sum())

    def miss_counts(self, cues: np.ndarray) -> np.ndarray:
        """Vectorized `misses` for a (k, n) batch of cues."""
        cues = np.asarray(cues, dtype=np.int64)
        if cues.ndim != 2 or cues.shape[1] != self.n:
            raise ValueError(f"cue batch must be (k, {self.n}), got {cues.shape}")
        defined = cues != UNDEFINED
        bad = defined & ((cues < 0) | (cues >= self.rows))
        if bad.any():
            raise ValueError("cue value outside row range in batch")
        safe = np.where(defined, cues, 0)
        on = self.cells[np.arange(self.n)[None, :], safe]
        return (defined & ~on).sum(axis=1)

    def recognize(self, cue: np.ndarray, tolerance: int = 0) -> bool:
        """True iff at most `tolerance` defined cue cells are off."""
        if tolerance < 0:
            raise ValueError(f"tolerance must be >= 0, got {tolerance}")
        return self.misses(cue) <= tolerance

    def column_run(self, column: int, cue_value: int) -> ColumnRun:
        """Contiguous on-run around `cue_value` in one column.

        If the cue cell is on, this is the maximal on-run containing it.
        If it is off (a tolerated miss), the run around the nearest on cell
        is returned instead, ties going to the smaller value index. A column
        with no on cells has no run and raises ValueError.
        """
        if not 0 <= cue_value < self.rows:
            raise ValueError(
                f"cue value {cue_value} outside [0, {self.rows - 1}]")
        col = self.cells[column]
        on = np.flatnonzero(col)
        if on.size == 0:
            raise ValueError(f"attribute {column} has no registered values")
        if col[cue_value]:
            seed = cue_value
        else:
            seed = int(on[np.argmin(np.abs(on - cue_value))])
        lo = seed
        while lo > 0 and col[lo - 1]:
            lo -= 1
        hi = seed
        while hi < self.rows - 1 and col[hi + 1]:
            hi += 1
        return ColumnRun(lo, hi)

    def retrieve(self, cue: np.ndarray, tolerance: int = 0,
                 rng: Optional[np.random.Generator] = None) -> Optional[np.ndarray]:
        """Construct an object from the cue, or None when recognition fails.

        Each defined attribute is sampled triangularly over its column run
        (mode at the cue, clamped into the run); undefined attributes are
        sampled uniformly over the column's on cells. The result is total
        and always passes recognize at tolerance 0.
        """
        if rng is None:
            rng = np.random.default_rng()
        if not self.recognize(cue, tolerance):
            return None
        cue = np.asarray(cue, dtype=np.int64)
        out = np.empty(self.n, dtype=np.int64)
        for i in range(self.n):
            v = cue[i]
            if v == UNDEFINED:
                on = np.flatnonzero(self.cells[i])
                if on.size == 0:
                    raise ValueError(f"attribute {i} has no registered values")
                out[i] = on[rng.integers(on.size)]
            else:
                lo, hi = self.column_run(i, int(v))
                out[i] = sample_triangular(lo, hi, int(v), rng)
        return out

    def column_counts(self) -> np.ndarray:
        """Number of on cells per column."""
        return self.cells.sum(axis=1)

    def entropy(self) -> float:
        """Mean log2 of per-column on-cell counts; empty columns count 0."""
        mu = np.maximum(self.column_counts(), 1)
        return float(np.log2(mu).mean())

    def pattern_count_log2(self) -> float:
        """log2 of how many total functions the relation contains.

        Equals entropy * n. Empty columns contribute factor 1, so an empty
        register reports 0 (one vacuous function). Kept in log scale: the
        linear count overflows at operating sizes (64 x 64 grids reach 64^64).
        """
        mu = np.maximum(self.column_counts(), 1)
        return float(np.log2(mu).sum())

    def copy(self) -> "MemoryRegister":
        dup = MemoryRegister(self.n, self.rows)
        dup.cells = self.cells.copy()
        dup.registered_count = self.registered_count
        return dup
