#!/usr/bin/env python3
"""Run all four experiments end to end on a synthetic dataset.

Writes the dataset, the grid-height and fill sweeps, a retrieval table and
an occluded-cue retrieval table into --outdir (default ./results). Every
output carries a .meta parameter echo; rerunning with the same arguments
reproduces every file byte for byte.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from entromem import Dataset, read_dataset, split_for_fold, write_dataset
from entromem.cli import run


def occlude_features(dataset, per_class, damaged, seed):
    """Cue file with a few features per instance knocked off-manifold."""
    rng = np.random.default_rng(seed)
    split = split_for_fold(dataset, 0)
    ids = np.concatenate([
        split.test[dataset.labels[split.test] == c][:per_class]
        for c in range(dataset.class_count)])
    feats = dataset.features[ids].copy()
    for row in feats:
        row[rng.choice(dataset.n, size=damaged, replace=False)] += 100.0
    return Dataset(feats, dataset.labels[ids], dataset.segments[ids],
                   class_names=list(dataset.class_names))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--classes", type=int, default=10)
    ap.add_argument("--per-class", type=int, default=500)
    ap.add_argument("--features", type=int, default=64)
    ap.add_argument("--separation", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--folds", default="0,1,2")
    ap.add_argument("--m", type=int, default=4, help="grid height for fill/retrieval runs")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data = outdir / "synthetic.csv"

    steps = [
        ["synth", "--classes", str(args.classes), "--per-class", str(args.per_class),
         "--features", str(args.features), "--separation", str(args.separation),
         "--seed", str(args.seed), "--out", str(data)],
        ["validate", "--data", str(data)],
        ["sweep-rows", "--data", str(data), "--m-min", "0", "--m-max", "9",
         "--folds", args.folds, "--out", str(outdir / "rows_sweep.csv")],
        ["sweep-fill", "--data", str(data), "--m", str(args.m),
         "--folds", args.folds, "--out", str(outdir / "fill_sweep.csv")],
        ["retrieve", "--data", str(data), "--m", str(args.m),
         "--seed", str(args.seed), "--out", str(outdir / "retrieval.csv")],
    ]
    for argv in steps:
        print("::", "entromem", " ".join(argv))
        code = run(argv)
        if code != 0:
            sys.exit(code)

    cues = occlude_features(read_dataset(data), per_class=2, damaged=2,
                            seed=args.seed)
    cue_path = outdir / "occluded_cues.csv"
    write_dataset(cues, cue_path)
    argv = ["occlude-eval", "--data", str(data), "--cues", str(cue_path),
            "--m", str(args.m), "--seed", str(args.seed),
            "--out", str(outdir / "occlusion.csv")]
    print("::", "entromem", " ".join(argv))
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
