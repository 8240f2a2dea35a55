"""EMNIST balanced split ingestion from the published IDX binaries.

Reads plain or gzipped idx files. EMNIST images come transposed relative to
the usual display orientation, so the loader flips each image to upright.
The two published subsets (train and test) are pooled into one corpus and
re-partitioned downstream through segment buckets: per-class round-robin
assignment over 0..99, which is deterministic in file order.
"""

from __future__ import annotations

import gzip
import struct
from pathlib import Path

import numpy as np

FILE_PATTERNS = {
    "train-images": "emnist-balanced-train-images-idx3-ubyte",
    "train-labels": "emnist-balanced-train-labels-idx1-ubyte",
    "test-images": "emnist-balanced-test-images-idx3-ubyte",
    "test-labels": "emnist-balanced-test-labels-idx1-ubyte",
}


def read_idx(path) -> np.ndarray:
    """Parse one idx file (gzipped or not) into a numpy array."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        magic = struct.unpack(">I", fh.read(4))[0]
        dtype_code = (magic >> 8) & 0xFF
        ndim = magic & 0xFF
        if dtype_code != 0x08:
            raise ValueError(f"{path}: unsupported idx element type 0x{dtype_code:02x}")
        shape = struct.unpack(f">{ndim}I", fh.read(4 * ndim))
        data = np.frombuffer(fh.read(), dtype=np.uint8)
    if data.size != int(np.prod(shape)):
        raise ValueError(f"{path}: truncated idx payload")
    return data.reshape(shape)


def _find(directory: Path, stem: str) -> Path:
    for candidate in (directory / f"{stem}.gz", directory / stem):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"{directory}: missing {stem}[.gz]")


def load_split(directory, split: str) -> tuple[np.ndarray, np.ndarray]:
    """One published subset as (images, raw labels); images upright uint8."""
    directory = Path(directory)
    images = read_idx(_find(directory, FILE_PATTERNS[f"{split}-images"]))
    labels = read_idx(_find(directory, FILE_PATTERNS[f"{split}-labels"]))
    if images.shape[0] != labels.shape[0]:
        raise ValueError(f"{directory}: image/label count mismatch for {split}")
    # stored transposed; flip to upright
    return images.transpose(0, 2, 1), labels.astype(np.int64)


def load_balanced(directory) -> tuple[np.ndarray, np.ndarray]:
    """Train and test subsets pooled, in file order (train first)."""
    train_images, train_labels = load_split(directory, "train")
    test_images, test_labels = load_split(directory, "test")
    return (np.concatenate([train_images, test_images]),
            np.concatenate([train_labels, test_labels]))


def assign_segments(labels: np.ndarray, buckets: int = 100) -> np.ndarray:
    """Per-class round-robin bucket ids, deterministic in file order."""
    labels = np.asarray(labels, dtype=np.int64)
    segments = np.empty(labels.size, dtype=np.int64)
    for cls in np.unique(labels):
        pos = np.flatnonzero(labels == cls)
        segments[pos] = np.arange(pos.size) % buckets
    return segments


def available(directory) -> bool:
    """True when all four balanced-split files are present."""
    directory = Path(directory)
    try:
        for stem in FILE_PATTERNS.values():
            _find(directory, stem)
    except FileNotFoundError:
        return False
    return True
