"""Command line front end.

Subcommands: synth (write a synthetic dataset), sweep-rows, sweep-fill,
retrieve, occlude-eval (the four experiments) and validate (check a dataset
file and print summary statistics). Exit codes: 0 success, 1 usage error,
2 data error. Every result file gets a .meta sidecar echoing the full
parameter set, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .dataset import (FILL_PERCENTS, DatasetFormatError, read_dataset,
                      synth_generate, write_dataset)
from .experiments import (FILL_SWEEP_COLUMNS, ROWS_SWEEP_COLUMNS,
                          FillSweepConfig, OcclusionConfig, RetrievalConfig,
                          RowsSweepConfig, fill_sweep, occlusion_table,
                          retrieval_columns, retrieval_table, rows_sweep,
                          write_result_csv, write_run_meta)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entromem",
        description="Associative memory experiments over feature datasets.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic feature dataset")
    p.add_argument("--classes", type=int, default=10)
    p.add_argument("--per-class", type=int, default=500)
    p.add_argument("--features", type=int, default=64)
    p.add_argument("--rows-hint", type=int, default=64)
    p.add_argument("--separation", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep-rows", help="precision/recall across grid heights")
    _data_args(p)
    p.add_argument("--m-min", type=int, default=0)
    p.add_argument("--m-max", type=int, default=9)
    p.add_argument("--folds", type=_int_list, default=list(range(10)))
    p.add_argument("--tolerance", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep-fill", help="precision/recall across fill levels")
    _data_args(p)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--fills", type=_int_list, default=list(FILL_PERCENTS))
    p.add_argument("--folds", type=_int_list, default=list(range(10)))
    p.add_argument("--tolerance", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("retrieve", help="retrieve objects per cue and fill level")
    _data_args(p)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--fills", type=_int_list, default=list(FILL_PERCENTS))
    p.add_argument("--fold", type=int, default=0)
    p.add_argument("--tolerance", type=int, default=0)
    p.add_argument("--cues-per-class", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("occlude-eval",
                       help="retrieval from occluded cues with relaxed tolerance")
    _data_args(p)
    p.add_argument("--cues", required=True, help="occluded-cue feature CSV")
    p.add_argument("--cues-meta", default=None)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--fills", type=_int_list, default=list(FILL_PERCENTS))
    p.add_argument("--fold", type=int, default=0)
    p.add_argument("--tolerances", type=_int_list, default=[0, 1, 2, 3])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="check a dataset file, print statistics")
    _data_args(p)
    return parser


def _data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="feature CSV path")
    p.add_argument("--meta", default=None, help="metadata sidecar (default: <data>.meta)")


def _check_range(ok: bool, message: str) -> None:
    if not ok:
        raise UsageError(message)


def _check_nonempty(values, flag: str) -> None:
    _check_range(len(values) > 0, f"{flag} must list at least one value")


class UsageError(Exception):
    pass


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return _dispatch(args)
    except UsageError as err:
        print(f"entromem: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetFormatError, FileNotFoundError, OSError, ValueError) as err:
        print(f"entromem: {err}", file=sys.stderr)
        return EXIT_DATA


def _dispatch(args) -> int:
    if args.command == "synth":
        return _cmd_synth(args)
    if args.command == "sweep-rows":
        return _cmd_sweep_rows(args)
    if args.command == "sweep-fill":
        return _cmd_sweep_fill(args)
    if args.command == "retrieve":
        return _cmd_retrieve(args)
    if args.command == "occlude-eval":
        return _cmd_occlude(args)
    if args.command == "validate":
        return _cmd_validate(args)
    raise UsageError(f"unknown command {args.command!r}")


def _cmd_synth(args) -> int:
    _check_range(args.classes >= 2, "--classes must be >= 2")
    _check_range(args.per_class >= 10, "--per-class must be >= 10")
    _check_range(args.features >= 1, "--features must be >= 1")
    dataset = synth_generate(args.classes, args.per_class, args.features,
                             args.rows_hint, args.separation, args.seed)
    write_dataset(dataset, args.out)
    print(f"wrote {len(dataset)} instances, {dataset.class_count} classes -> {args.out}")
    return EXIT_OK


def _cmd_sweep_rows(args) -> int:
    _check_range(0 <= args.m_min <= args.m_max <= 9,
                 "--m-min/--m-max must satisfy 0 <= m_min <= m_max <= 9")
    _check_nonempty(args.folds, "--folds")
    _check_range(all(0 <= f <= 9 for f in args.folds), "--folds entries must be in [0, 9]")
    _check_range(args.tolerance >= 0, "--tolerance must be >= 0")
    dataset = read_dataset(args.data, args.meta)
    config = RowsSweepConfig(args.m_min, args.m_max, tuple(args.folds), args.tolerance)
    rows = rows_sweep(dataset, config)
    write_result_csv(args.out, ROWS_SWEEP_COLUMNS, rows)
    write_run_meta(args.out, "sweep-rows", _echo(args))
    print(f"wrote {len(rows)} rows -> {args.out}")
    return EXIT_OK


def _cmd_sweep_fill(args) -> int:
    _check_range(0 <= args.m <= 9, "--m must be in [0, 9]")
    _check_nonempty(args.fills, "--fills")
    _check_range(all(f in FILL_PERCENTS for f in args.fills),
                 f"--fills entries must be among {FILL_PERCENTS}")
    _check_nonempty(args.folds, "--folds")
    _check_range(all(0 <= f <= 9 for f in args.folds), "--folds entries must be in [0, 9]")
    _check_range(args.tolerance >= 0, "--tolerance must be >= 0")
    dataset = read_dataset(args.data, args.meta)
    config = FillSweepConfig(args.m, tuple(args.fills), tuple(args.folds),
                             args.tolerance)
    rows = fill_sweep(dataset, config)
    write_result_csv(args.out, FILL_SWEEP_COLUMNS, rows)
    write_run_meta(args.out, "sweep-fill", _echo(args))
    print(f"wrote {len(rows)} rows -> {args.out}")
    return EXIT_OK


def _cmd_retrieve(args) -> int:
    _check_range(0 <= args.m <= 9, "--m must be in [0, 9]")
    _check_nonempty(args.fills, "--fills")
    _check_range(all(f in FILL_PERCENTS for f in args.fills),
                 f"--fills entries must be among {FILL_PERCENTS}")
    _check_range(0 <= args.fold <= 9, "--fold must be in [0, 9]")
    _check_range(args.cues_per_class >= 1, "--cues-per-class must be >= 1")
    _check_range(args.tolerance >= 0, "--tolerance must be >= 0")
    dataset = read_dataset(args.data, args.meta)
    config = RetrievalConfig(args.m, tuple(args.fills), args.fold,
                             args.tolerance, args.cues_per_class, args.seed)
    rows = retrieval_table(dataset, config)
    write_result_csv(args.out, retrieval_columns(dataset.n), rows)
    write_run_meta(args.out, "retrieve", _echo(args),
                   {"cue_id": "row index into the input dataset file"})
    print(f"wrote {len(rows)} rows -> {args.out}")
    return EXIT_OK


def _cmd_occlude(args) -> int:
    _check_range(0 <= args.m <= 9, "--m must be in [0, 9]")
    _check_nonempty(args.fills, "--fills")
    _check_range(all(f in FILL_PERCENTS for f in args.fills),
                 f"--fills entries must be among {FILL_PERCENTS}")
    _check_range(0 <= args.fold <= 9, "--fold must be in [0, 9]")
    _check_nonempty(args.tolerances, "--tolerances")
    _check_range(all(t >= 0 for t in args.tolerances),
                 "--tolerances entries must be >= 0")
    dataset = read_dataset(args.data, args.meta)
    cues = read_dataset(args.cues, args.cues_meta)
    config = OcclusionConfig(args.m, tuple(args.fills), args.fold,
                             tuple(args.tolerances), args.seed)
    rows = occlusion_table(dataset, cues, config)
    write_result_csv(args.out, retrieval_columns(dataset.n), rows)
    write_run_meta(args.out, "occlude-eval", _echo(args),
                   {"cue_id": "row index into the cue file"})
    print(f"wrote {len(rows)} rows -> {args.out}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    dataset = read_dataset(args.data, args.meta)
    counts = np.bincount(dataset.labels, minlength=dataset.class_count)
    print(f"{args.data}: OK")
    print(f"  instances: {len(dataset)}")
    print(f"  features:  {dataset.n}")
    print(f"  alphabet:  {dataset.alphabet} ({dataset.class_count} classes)")
    print(f"  per-class: min {counts.min()}, max {counts.max()}")
    if len(dataset):
        print(f"  segments:  {dataset.segments.min()}..{dataset.segments.max()}")
        print(f"  feature range: [{dataset.features.min():.6g}, "
              f"{dataset.features.max():.6g}]")
    print(f"  quantizer: {'present' if dataset.quantizer else 'absent'}")
    return EXIT_OK


def _echo(args) -> dict:
    skip = {"command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
