#!/usr/bin/env python3
"""Hours-scale EMNIST-36 reproduction, end to end.

Trains the autoencoder on the balanced train subset, exports plain and
occluded feature files, runs the memory harness sweeps and retrieval
through the `entromem` CLI, renders glyph grids, plots the metric curves,
and checks the headline numbers: system precision/recall near 0.8868/0.8361
at full fill (64x64 grids, tolerance 0) and register entropy near 4.5 at
64% fill.

Needs the four EMNIST balanced idx files (gzipped is fine) in --emnist-dir
and the `entromem` CLI on PATH.
"""

import argparse
import subprocess
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from emvision import (CoderConfig, TrainedCoder, build_alphabet,
                      export_features, occlude, plot_metrics,
                      render_retrieved, train_coder)
from emvision.emnist import assign_segments, available, load_balanced, load_split


def sh(argv):
    print("::", " ".join(map(str, argv)))
    subprocess.run([str(a) for a in argv], check=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--emnist-dir", required=True)
    ap.add_argument("--outdir", default="emnist_results")
    ap.add_argument("--epochs", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--folds", default="0", help="folds for the sweeps")
    args = ap.parse_args()

    if not available(args.emnist_dir):
        sys.exit(f"{args.emnist_dir}: EMNIST balanced files not found")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    alphabet = build_alphabet(36)

    ckpt = outdir / "coder.pt"
    if ckpt.exists():
        print(f"reusing checkpoint {ckpt}")
        coder = TrainedCoder.load(ckpt)
    else:
        images, raw = load_split(args.emnist_dir, "train")
        test_images, test_raw = load_split(args.emnist_dir, "test")
        coder = train_coder(images, alphabet.apply(raw),
                            CoderConfig(classes=36, epochs=args.epochs,
                                        seed=args.seed),
                            test_images, alphabet.apply(test_raw), verbose=True)
        coder.save(ckpt)
        print(f"classifier accuracy: {coder.report['classifier_accuracy']:.4f}")

    images, raw = load_balanced(args.emnist_dir)
    segments = assign_segments(alphabet.apply(raw))
    data = outdir / "emnist36.csv"
    export_features(coder, images, raw, segments, alphabet, data,
                    save_images=True)
    for mode in ("bottom", "bars"):
        export_features(coder, occlude(images, mode), raw, segments, alphabet,
                        outdir / f"emnist36_{mode}.csv", save_images=True)

    sh(["entromem", "sweep-rows", "--data", data, "--m-min", 0, "--m-max", 9,
        "--folds", args.folds, "--out", outdir / "rows_sweep.csv"])
    sh(["entromem", "sweep-fill", "--data", data, "--m", 6,
        "--folds", args.folds, "--out", outdir / "fill_sweep.csv"])
    sh(["entromem", "retrieve", "--data", data, "--m", 6, "--seed", args.seed,
        "--out", outdir / "retrieval.csv"])
    for mode in ("bottom", "bars"):
        sh(["entromem", "occlude-eval", "--data", data,
            "--cues", outdir / f"emnist36_{mode}.csv", "--m", 6,
            "--seed", args.seed, "--out", outdir / f"occlusion_{mode}.csv"])

    cue_images = np.load(outdir / "emnist36.images.npz")["images"]
    render_retrieved(outdir / "retrieval.csv", coder, cue_images,
                     outdir / "grids")
    for mode in ("bottom", "bars"):
        occluded_images = np.load(outdir / f"emnist36_{mode}.images.npz")["images"]
        render_retrieved(outdir / f"occlusion_{mode}.csv", coder,
                         occluded_images, outdir / f"grids_{mode}")
    plot_metrics([outdir / "rows_sweep.csv", outdir / "fill_sweep.csv"],
                 outdir / "figures")

    rows = {}
    for line in (outdir / "fill_sweep.csv").read_text().splitlines()[1:]:
        parts = line.split(",")
        if parts[0] == "avg":
            rows[int(parts[1])] = list(map(float, parts[2:]))
    entropy64 = rows[64][0]
    precision, recall = rows[100][3], rows[100][4]
    print(f"full fill: system precision {precision:.4f} (target 0.8868 +/- 0.05)")
    print(f"full fill: system recall    {recall:.4f} (target 0.8361 +/- 0.05)")
    print(f"64% fill:  register entropy {entropy64:.2f} (target 4.5 +/- 0.5)")
    ok = (abs(precision - 0.8868) <= 0.05 and abs(recall - 0.8361) <= 0.05
          and abs(entropy64 - 4.5) <= 0.5)
    print("reproduction check:", "PASS" if ok else "FAIL")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
