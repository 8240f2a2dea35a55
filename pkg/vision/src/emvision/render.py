"""Render retrieval tables as glyph grids.

One grid per tolerance level found in the table. Columns are cues (ordered
by true label, then cue id); rows are: the cue image, the straight
encoder-to-decoder round trip (memory bypassed), then one row per fill
level in ascending order. Cells whose cue was rejected at that fill stay
white. Ink is drawn dark on white, matching how the source glyphs read.
"""

from __future__ import annotations

import csv
import re
from collections import defaultdict
from pathlib import Path

import numpy as np
from PIL import Image

from .coder import TrainedCoder

PAD = 2


def read_retrieval_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or reader.fieldnames[:6] != [
                "cue_id", "true_label", "fill_pct", "tolerance",
                "selected_label", "accepted"]:
            raise ValueError(f"{path}: not a retrieval table")
        return list(reader)


def _features(row: dict) -> np.ndarray:
    n = sum(1 for key in row if re.fullmatch(r"f\d+", key))
    return np.array([float(row[f"f{i}"]) for i in range(n)])


def compose_grid(tiles: list[list[np.ndarray | None]], side: int) -> np.ndarray:
    """Tile images (float 0..1 ink) into one dark-on-white grid image."""
    rows, cols = len(tiles), len(tiles[0])
    canvas = np.full((rows * (side + PAD) + PAD, cols * (side + PAD) + PAD),
                     255, dtype=np.uint8)
    for r, row in enumerate(tiles):
        for c, tile in enumerate(row):
            if tile is None:
                continue  # rejection: stays white
            ink = np.clip(np.asarray(tile, dtype=np.float64), 0.0, 1.0)
            patch = np.round((1.0 - ink) * 255).astype(np.uint8)
            y = PAD + r * (side + PAD)
            x = PAD + c * (side + PAD)
            canvas[y:y + side, x:x + side] = patch
    return canvas


def render_retrieved(csv_path, coder: TrainedCoder, cue_images: np.ndarray,
                     out_dir) -> dict[int, Path]:
    """Write one grid PNG per tolerance; returns tolerance -> path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = read_retrieval_csv(csv_path)
    if not rows:
        raise ValueError(f"{csv_path}: empty retrieval table")

    cue_images = np.asarray(cue_images)
    if cue_images.dtype == np.uint8:
        cue_images = cue_images.astype(np.float64) / 255.0
    side = cue_images.shape[-1]

    cue_ids = sorted({int(r["cue_id"]) for r in rows},
                     key=lambda c: (int(next(r["true_label"] for r in rows
                                             if int(r["cue_id"]) == c)), c))
    fills = sorted({int(r["fill_pct"]) for r in rows})
    by_cell = defaultdict(dict)
    for r in rows:
        by_cell[int(r["tolerance"])][(int(r["cue_id"]), int(r["fill_pct"]))] = r

    written = {}
    for tolerance, cells in sorted(by_cell.items()):
        grid: list[list[np.ndarray | None]] = []
        grid.append([cue_images[c] for c in cue_ids])
        grid.append([coder.decode(coder.encode(cue_images[c][None]))[0]
                     for c in cue_ids])
        for pct in fills:
            row_tiles = []
            for c in cue_ids:
                cell = cells.get((c, pct))
                if cell is None or cell["accepted"] != "1":
                    row_tiles.append(None)
                else:
                    row_tiles.append(coder.decode(_features(cell)[None])[0])
            grid.append(row_tiles)
        canvas = compose_grid(grid, side)
        path = out_dir / f"retrieved_tol{tolerance}.png"
        Image.fromarray(canvas, mode="L").save(path)
        written[tolerance] = path
    return written
