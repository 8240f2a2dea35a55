"""Feature export in the memory harness's dataset file format.

The contract: a CSV with header ``label,segment,f0,...,f{n-1}`` (features as
decimal reals, 9 significant digits) plus a JSON sidecar ``<basename>.meta``
carrying `n`, `alphabet`, `classes` and optionally `seed`. This module
writes that format directly; nothing here imports the memory package.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .alphabet import AlphabetMap
from .coder import TrainedCoder


def write_feature_dataset(path, features: np.ndarray, labels: np.ndarray,
                          segments: np.ndarray, alphabet: str,
                          class_names, seed: int | None = None) -> None:
    path = Path(path)
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    segments = np.asarray(segments, dtype=np.int64)
    k, n = features.shape
    if labels.shape != (k,) or segments.shape != (k,):
        raise ValueError("features, labels and segments disagree on length")

    lines = ["label,segment," + ",".join(f"f{i}" for i in range(n))]
    for label, segment, row in zip(labels, segments, features):
        lines.append(f"{label},{segment},"
                     + ",".join(format(x, ".9g") for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    meta = {"n": n, "alphabet": alphabet, "classes": list(class_names)}
    if seed is not None:
        meta["seed"] = seed
    path.with_suffix(".meta").write_text(json.dumps(meta, indent=2) + "\n",
                                         encoding="utf-8")


def export_features(coder: TrainedCoder, images: np.ndarray,
                    raw_labels: np.ndarray, segments: np.ndarray,
                    alphabet_map: AlphabetMap, out_path,
                    save_images: bool = False) -> np.ndarray:
    """Encode images and write the feature dataset; returns the labels used.

    Row order equals image order, so a row index in the written file keys
    back into `images` (that is how retrieval tables reference cues). With
    `save_images`, the encoded images are stored next to the CSV as
    ``<basename>.images.npz`` for later rendering.
    """
    labels = alphabet_map.apply(raw_labels)
    features = coder.encode(images)
    write_feature_dataset(out_path, features, labels, segments,
                          alphabet=f"emnist-{alphabet_map.variant}",
                          class_names=alphabet_map.class_names)
    if save_images:
        np.savez_compressed(Path(out_path).with_suffix(".images.npz"),
                            images=np.asarray(images), labels=labels)
    return labels
