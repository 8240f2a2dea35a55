"""Image-side command line: train, export, render, plot.

`train` fits the autoencoder on the EMNIST balanced train subset and saves
a checkpoint. `export` encodes a corpus (optionally occluded) into the
feature CSV + sidecar the memory harness reads. `render` turns a retrieval
table back into glyph grids through the decoder, and `plot` draws metric
figures from sweep CSVs.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .alphabet import build_alphabet
from .coder import CoderConfig, TrainedCoder, train_coder
from .emnist import assign_segments, available, load_balanced, load_split
from .export import export_features
from .occlude import MODES, occlude
from .plots import plot_metrics
from .render import render_retrieved


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emvision")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the autoencoder on EMNIST balanced")
    p.add_argument("--emnist-dir", required=True)
    p.add_argument("--variant", type=int, choices=(47, 36), default=36)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=0,
                   help="cap training instances (0 = all)")
    p.add_argument("--out", required=True, help="checkpoint path")

    p = sub.add_parser("export", help="encode a corpus into a feature dataset")
    p.add_argument("--emnist-dir", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--variant", type=int, choices=(47, 36), default=36)
    p.add_argument("--occlude", choices=("none",) + MODES, default="none")
    p.add_argument("--save-images", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("render", help="draw glyph grids from a retrieval table")
    p.add_argument("--retrieval", required=True, help="retrieval CSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--images", required=True,
                   help=".images.npz written by export --save-images")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("plot", help="metric figures from sweep CSVs")
    p.add_argument("--results", nargs="+", required=True)
    p.add_argument("--out-dir", required=True)
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return _dispatch(args)
    except (FileNotFoundError, OSError, ValueError) as err:
        print(f"emvision: {err}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "train":
        return _cmd_train(args)
    if args.command == "export":
        return _cmd_export(args)
    if args.command == "render":
        return _cmd_render(args)
    if args.command == "plot":
        return _cmd_plot(args)
    return 1


def _cmd_train(args) -> int:
    if not available(args.emnist_dir):
        raise FileNotFoundError(f"{args.emnist_dir}: EMNIST balanced files not found")
    alphabet = build_alphabet(args.variant)
    images, raw = load_split(args.emnist_dir, "train")
    val_images, val_raw = load_split(args.emnist_dir, "test")
    if args.limit:
        images, raw = images[:args.limit], raw[:args.limit]
    config = CoderConfig(classes=alphabet.classes, epochs=args.epochs,
                         batch_size=args.batch_size, seed=args.seed)
    coder = train_coder(images, alphabet.apply(raw), config,
                        val_images, alphabet.apply(val_raw), verbose=True)
    coder.save(args.out)
    print(f"saved checkpoint -> {args.out}")
    return 0


def _cmd_export(args) -> int:
    if not available(args.emnist_dir):
        raise FileNotFoundError(f"{args.emnist_dir}: EMNIST balanced files not found")
    coder = TrainedCoder.load(args.checkpoint)
    alphabet = build_alphabet(args.variant)
    images, raw = load_balanced(args.emnist_dir)
    segments = assign_segments(alphabet.apply(raw))
    if args.occlude != "none":
        images = occlude(images, args.occlude)
    export_features(coder, images, raw, segments, alphabet, args.out,
                    save_images=args.save_images)
    print(f"wrote {len(images)} instances -> {args.out}")
    return 0


def _cmd_render(args) -> int:
    coder = TrainedCoder.load(args.checkpoint)
    payload = np.load(args.images)
    written = render_retrieved(args.retrieval, coder, payload["images"],
                               args.out_dir)
    for tolerance, path in sorted(written.items()):
        print(f"tolerance {tolerance} -> {path}")
    return 0


def _cmd_plot(args) -> int:
    for path in plot_metrics(args.results, args.out_dir):
        print(f"wrote {path}")
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
