"""Affine quantization between real feature vectors and discrete functions.

Each feature i gets bounds [lo_i, hi_i] taken from a fitting corpus; a real
value maps to a row index in [0, rows - 1] by linear rescaling and
round-half-up. Rounding is floor(t + 0.5) on purpose: banker's rounding
would make grids differ between platforms and languages. Dequantization is
the inverse affine map onto grid points, so quantize(dequantize(f)) == f
exactly for in-range functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .memory import UNDEFINED


@dataclass(frozen=True)
class Quantizer:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=np.float64))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=np.float64))
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise ValueError("lo and hi must be 1-D arrays of equal length")
        if (self.hi < self.lo).any():
            raise ValueError("hi must be >= lo for every feature")

    @property
    def n(self) -> int:
        return self.lo.size

    @classmethod
    def fit(cls, features: np.ndarray) -> "Quantizer":
        """Calibrate bounds as the column-wise min/max of a corpus."""
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] < 1:
            raise ValueError("fit needs a non-empty (k, n) feature matrix")
        return cls(features.min(axis=0), features.max(axis=0))

    def quantize_many(self, xs: np.ndarray, rows: int) -> np.ndarray:
        """Map a (k, n) feature matrix to a (k, n) int matrix in [0, rows-1]."""
        if rows < 1:
            raise ValueError(f"rows must be >= 1, got {rows}")
        xs = np.asarray(xs, dtype=np.float64)
        if xs.ndim != 2 or xs.shape[1] != self.n:
            raise ValueError(f"expected (k, {self.n}) features, got {xs.shape}")
        span = self.hi - self.lo
        # constant features (span 0) always land on row 0
        scale = np.divide(float(rows - 1), span,
                          out=np.zeros_like(span), where=span > 0)
        t = (xs - self.lo) * scale
        v = np.floor(t + 0.5).astype(np.int64)
        return np.clip(v, 0, rows - 1)

    def quantize(self, x: np.ndarray, rows: int) -> np.ndarray:
        """Map one feature vector to a total discrete function."""
        return self.quantize_many(np.asarray(x, dtype=np.float64)[None, :], rows)[0]

    def dequantize_many(self, fns: np.ndarray, rows: int) -> np.ndarray:
        """Map (k, n) total functions back to real vectors on the bin grid."""
        if rows < 1:
            raise ValueError(f"rows must be >= 1, got {rows}")
        fns = np.asarray(fns, dtype=np.int64)
        if fns.ndim != 2 or fns.shape[1] != self.n:
            raise ValueError(f"expected (k, {self.n}) functions, got {fns.shape}")
        if (fns == UNDEFINED).any():
            raise ValueError("cannot dequantize a partial function")
        if ((fns < 0) | (fns >= rows)).any():
            raise ValueError(f"function value outside [0, {rows - 1}]")
        if rows == 1:
            return np.broadcast_to((self.lo + self.hi) / 2.0, fns.shape).copy()
        return self.lo + fns / (rows - 1) * (self.hi - self.lo)

    def dequantize(self, fn: np.ndarray, rows: int) -> np.ndarray:
        return self.dequantize_many(np.asarray(fn, dtype=np.int64)[None, :], rows)[0]
