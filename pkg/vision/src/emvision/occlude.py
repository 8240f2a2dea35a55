"""Deterministic occlusion transforms on glyph images.

Two modes. `bottom` zeroes the lower half of the rows (the lower 14 of 28).
`bars` zeroes three evenly spaced horizontal bands of 5 rows each; on 28-row
images that masks 15/28 > 50% of the area. Both are pure functions of the
image shape and mode: applying one twice equals applying it once.
"""

from __future__ import annotations

import numpy as np

BAR_COUNT = 3
BAR_HEIGHT = 5

MODES = ("bottom", "bars")


def bottom_rows(height: int) -> np.ndarray:
    """Row indices of the lower floor(height/2) rows."""
    return np.arange(height - height // 2, height)


def bar_rows(height: int, count: int = BAR_COUNT,
             bar_height: int = BAR_HEIGHT) -> np.ndarray:
    """Row indices of `count` evenly spaced bands of `bar_height` rows."""
    period = height // count
    if bar_height > period:
        raise ValueError(f"bars of {bar_height} rows do not fit {count} times "
                         f"in {height} rows")
    offset = (period - bar_height) // 2
    rows = [np.arange(k * period + offset, k * period + offset + bar_height)
            for k in range(count)]
    return np.concatenate(rows)


def occlude(images: np.ndarray, mode: str) -> np.ndarray:
    """Masked copy of (..., h, w) images; original is left untouched."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    images = np.asarray(images)
    height = images.shape[-2]
    rows = bottom_rows(height) if mode == "bottom" else bar_rows(height)
    out = images.copy()
    out[..., rows, :] = 0
    return out


def masked_fraction(height: int, mode: str) -> float:
    rows = bottom_rows(height) if mode == "bottom" else bar_rows(height)
    return rows.size / height
