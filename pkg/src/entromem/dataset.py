"""Feature dataset files, corpus splitting and a synthetic generator.

File format (the contract with upstream feature producers): a UTF-8 CSV
with header ``label,segment,f0,...,f{n-1}``, one instance per line, label
and segment as decimal integers, features as decimal reals printed with 9
significant digits. A JSON sidecar with the same basename and a ``.meta``
suffix carries `n`, `alphabet`, `classes` and the optional `quantizer.lo` /
`quantizer.hi` / `seed` entries.

Splitting uses 100 deterministic segment buckets per instance. Fold k tests
on buckets [10k, 10k+10), remembers the next 33 buckets cyclically and
trains on the remaining 57, which realizes the 57/33/10 partition exactly
and rotates it through ten folds without any randomness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .quantize import Quantizer

FILL_PERCENTS = (1, 2, 4, 8, 16, 32, 64, 100)

TEST_BUCKETS = 10
REMEMBER_BUCKETS = 33
TOTAL_BUCKETS = 100


class DatasetFormatError(ValueError):
    """A dataset file that does not conform to the format contract."""


@dataclass
class Dataset:
    features: np.ndarray          # (k, n) float64
    labels: np.ndarray            # (k,) int
    segments: np.ndarray          # (k,) int, bucket ids 0..99
    alphabet: str = "synthetic"
    class_names: list[str] = field(default_factory=list)
    quantizer: Optional[Quantizer] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.segments = np.asarray(self.segments, dtype=np.int64)
        if not self.class_names:
            top = int(self.labels.max()) + 1 if self.labels.size else 0
            self.class_names = [f"c{i:02d}" for i in range(top)]
        self.validate()

    def validate(self):
        k, n = self.features.shape
        if self.labels.shape != (k,) or self.segments.shape != (k,):
            raise DatasetFormatError("features, labels and segments disagree on length")
        if n < 1:
            raise DatasetFormatError("need at least one feature column")
        if self.labels.size and (self.labels.min() < 0
                                 or self.labels.max() >= len(self.class_names)):
            raise DatasetFormatError("label outside the class-name range")
        if self.segments.size and (self.segments.min() < 0
                                   or self.segments.max() >= TOTAL_BUCKETS):
            raise DatasetFormatError("segment outside [0, 99]")
        if self.quantizer is not None and self.quantizer.n != n:
            raise DatasetFormatError("quantizer length does not match features")

    @property
    def n(self) -> int:
        return self.features.shape[1]

    @property
    def class_count(self) -> int:
        return len(self.class_names)

    def __len__(self) -> int:
        return self.features.shape[0]


@dataclass(frozen=True)
class Split:
    """Instance indices of the three corpus roles for one fold."""

    fold: int
    train: np.ndarray
    remember: np.ndarray
    test: np.ndarray


def bucket_role(segment: int, fold: int) -> str:
    """Role of one segment bucket under the rotated 57/33/10 scheme."""
    offset = (segment - TEST_BUCKETS * fold) % TOTAL_BUCKETS
    if offset < TEST_BUCKETS:
        return "test"
    if offset < TEST_BUCKETS + REMEMBER_BUCKETS:
        return "remember"
    return "train"


def split_for_fold(dataset: Dataset, fold: int) -> Split:
    if not 0 <= fold <= 9:
        raise ValueError(f"fold must be in [0, 9], got {fold}")
    offset = (dataset.segments - TEST_BUCKETS * fold) % TOTAL_BUCKETS
    test = np.flatnonzero(offset < TEST_BUCKETS)
    remember = np.flatnonzero((offset >= TEST_BUCKETS)
                              & (offset < TEST_BUCKETS + REMEMBER_BUCKETS))
    train = np.flatnonzero(offset >= TEST_BUCKETS + REMEMBER_BUCKETS)
    return Split(fold, train, remember, test)


def take_fraction(labels: np.ndarray, percent: int) -> np.ndarray:
    """Positions of the per-class prefix covering `percent` of each class.

    `labels` is taken in stable file order; for each class the first
    ceil(percent/100 * count) occurrences are kept, so subsets at growing
    percents are nested.
    """
    if percent not in FILL_PERCENTS:
        raise ValueError(f"percent must be one of {FILL_PERCENTS}, got {percent}")
    labels = np.asarray(labels, dtype=np.int64)
    keep = np.zeros(labels.size, dtype=bool)
    for cls in np.unique(labels):
        pos = np.flatnonzero(labels == cls)
        keep[pos[:math.ceil(percent * pos.size / 100)]] = True
    return np.flatnonzero(keep)


def format_real(x: float) -> str:
    """Decimal text with 9 significant digits; stable under re-reading."""
    return format(x, ".9g")


def round_to_text_precision(values: np.ndarray) -> np.ndarray:
    """Snap values onto the 9-significant-digit grid the file format keeps."""
    values = np.asarray(values, dtype=np.float64)
    flat = np.fromiter((float(format_real(v)) for v in values.ravel()),
                       dtype=np.float64, count=values.size)
    return flat.reshape(values.shape)


def write_dataset(dataset: Dataset, path, meta_path=None) -> None:
    path = Path(path)
    meta_path = Path(meta_path) if meta_path else path.with_suffix(".meta")
    header = "label,segment," + ",".join(f"f{i}" for i in range(dataset.n))
    lines = [header]
    for label, segment, row in zip(dataset.labels, dataset.segments, dataset.features):
        lines.append(f"{label},{segment}," + ",".join(format_real(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    meta: dict = {
        "n": dataset.n,
        "alphabet": dataset.alphabet,
        "classes": list(dataset.class_names),
    }
    if dataset.quantizer is not None:
        meta["quantizer.lo"] = [float(v) for v in dataset.quantizer.lo]
        meta["quantizer.hi"] = [float(v) for v in dataset.quantizer.hi]
    if dataset.seed is not None:
        meta["seed"] = dataset.seed
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def read_dataset(path, meta_path=None) -> Dataset:
    path = Path(path)
    meta_path = Path(meta_path) if meta_path else path.with_suffix(".meta")
    if not path.exists():
        raise DatasetFormatError(f"{path}: no such file")
    if not meta_path.exists():
        raise DatasetFormatError(f"{meta_path}: missing metadata sidecar")

    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise DatasetFormatError(f"{meta_path}: invalid JSON ({err})") from err
    for key in ("n", "alphabet", "classes"):
        if key not in meta:
            raise DatasetFormatError(f"{meta_path}: missing key '{key}'")
    n = int(meta["n"])
    class_names = [str(c) for c in meta["classes"]]

    quantizer = None
    if "quantizer.lo" in meta or "quantizer.hi" in meta:
        if "quantizer.lo" not in meta or "quantizer.hi" not in meta:
            raise DatasetFormatError(f"{meta_path}: quantizer.lo/hi must come together")
        quantizer = Quantizer(np.asarray(meta["quantizer.lo"], dtype=np.float64),
                              np.asarray(meta["quantizer.hi"], dtype=np.float64))

    labels, segments, rows = [], [], []
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        expected = "label,segment," + ",".join(f"f{i}" for i in range(n))
        if header != expected:
            raise DatasetFormatError(f"{path}:1: malformed header for n={n}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != n + 2:
                raise DatasetFormatError(
                    f"{path}:{lineno}: expected {n + 2} columns, found {len(parts)}")
            try:
                label = int(parts[0])
                segment = int(parts[1])
                feats = [float(p) for p in parts[2:]]
            except ValueError as err:
                raise DatasetFormatError(f"{path}:{lineno}: {err}") from err
            if not 0 <= label < len(class_names):
                raise DatasetFormatError(
                    f"{path}:{lineno}: label {label} outside class range")
            if not 0 <= segment < TOTAL_BUCKETS:
                raise DatasetFormatError(
                    f"{path}:{lineno}: segment {segment} outside [0, 99]")
            labels.append(label)
            segments.append(segment)
            rows.append(feats)

    features = (np.asarray(rows, dtype=np.float64)
                if rows else np.empty((0, n), dtype=np.float64))
    return Dataset(features, np.asarray(labels, dtype=np.int64),
                   np.asarray(segments, dtype=np.int64),
                   alphabet=str(meta["alphabet"]), class_names=class_names,
                   quantizer=quantizer,
                   seed=int(meta["seed"]) if "seed" in meta else None)


def synth_generate(classes: int, per_class: int, n: int, rows_hint: int,
                   separation: float, seed: int) -> Dataset:
    """Labeled synthetic features: one noisy Gaussian cloud per class.

    Class centroids are drawn uniformly in [0,1]^n, redrawing up to 200
    times to keep pairwise centroid distance above 0.25*sqrt(n); instances
    add independent Gaussian noise of scale `separation` (small values give
    tight, well separated classes, large values heavy overlap). Segments go
    round-robin 0..99 in file order. Everything derives from `seed`;
    `rows_hint` names the intended operating resolution and does not alter
    generation.
    """
    if classes < 2:
        raise ValueError(f"need at least 2 classes, got {classes}")
    if per_class < 10:
        raise ValueError(f"need at least 10 instances per class, got {per_class}")
    rng = np.random.default_rng(seed)
    min_dist = 0.25 * math.sqrt(n)
    centroids = [rng.uniform(size=n)]
    for _ in range(classes - 1):
        best, best_gap = None, -1.0
        for _ in range(200):
            cand = rng.uniform(size=n)
            gap = min(np.linalg.norm(cand - c) for c in centroids)
            if gap >= min_dist:
                best = cand
                break
            if gap > best_gap:
                best, best_gap = cand, gap
        centroids.append(best)

    features = np.concatenate([
        c + rng.normal(0.0, separation, size=(per_class, n)) for c in centroids])
    # snap onto file-text precision so written datasets reload value-identical
    features = round_to_text_precision(features)
    labels = np.repeat(np.arange(classes), per_class)
    # round-robin within each class, so every class covers the same buckets
    segments = np.tile(np.arange(per_class) % TOTAL_BUCKETS, classes)
    return Dataset(features, labels, segments, alphabet="synthetic",
                   class_names=[f"c{i:02d}" for i in range(classes)], seed=seed)
