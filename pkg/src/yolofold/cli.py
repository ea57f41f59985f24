"""Command-line frontend: analyze, split, compare, nested, forge.

Exit codes: 0 success, 1 usage error, 2 data error. Every random
decision flows from explicit --seed flags; each writing subcommand
embeds a machine-readable run record (flags + seeds, no timestamps) in
its summary so reruns stay byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from statistics import median

from . import __version__
from .errors import DatasetError
from .features import build_feature_matrix
from .forge import ForgeConfig, generate
from .ingest import IngestOptions, scan_dataset
from .metrics import dataset_stats, fold_report
from .pipeline import (LAYOUT_LINKS, LAYOUT_LISTS, export_fold_lists,
                       export_manifests, nested_split)
from .splitting import (KERNEL_BACKEND, METHOD_STRATIFIED, METHOD_UNIFORM,
                        split_stratified, split_uniform)

log = logging.getLogger("yolofold")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

MAX_RECOMMENDED_CLASSES = 20


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; remap to our usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit2(message)


class SystemExit2(Exception):
    def __init__(self, message):
        self.message = message
        super().__init__(message)


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--images", required=True, type=Path, help="image directory")
    p.add_argument("--labels", required=True, type=Path, help="label directory")
    p.add_argument("--skip-bad-lines", action="store_true",
                   help="skip unparseable label lines with a warning instead of aborting")
    p.add_argument("--allow-degenerate-boxes", action="store_true",
                   help="keep zero width/height boxes with a warning")


def _ingest_options(args) -> IngestOptions:
    return IngestOptions(
        on_parse_error="skip" if args.skip_bad_lines else "abort",
        strict_boxes=not args.allow_degenerate_boxes,
    )


def _scan(args):
    records = scan_dataset(args.images, args.labels, _ingest_options(args))
    for warning in records.warnings:
        log.warning("%s", warning)
    return records


def _run_record(args, fields: tuple[str, ...], records=None) -> dict:
    record = {"command": args.command, "version": __version__}
    if records is not None:
        record["input_hash"] = records.content_hash()
    for name in fields:
        value = getattr(args, name)
        record[name] = str(value) if isinstance(value, Path) else value
    return record


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="yolofold",
                     description="Stratified k-fold splitting for YOLO datasets")
    parser.add_argument("--version", action="version",
                        version=f"yolofold {__version__} (kernel: {KERNEL_BACKEND})")
    parser.add_argument("--log-level", default="warning",
                        choices=("debug", "info", "warning", "error"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="dataset statistics and entropy")
    _add_dataset_args(p)
    p.add_argument("--json", type=Path, default=None,
                   help="also write the stats as JSON to this path")

    p = sub.add_parser("split", help="k-fold split with manifests and report")
    _add_dataset_args(p)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--method", default=METHOD_STRATIFIED,
                   choices=(METHOD_STRATIFIED, METHOD_UNIFORM))
    p.add_argument("--scale-factor", type=float, default=1000.0,
                   help="weight multiplier for the geometry label columns")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--x1e7", action="store_true",
                   help="display MAE values scaled by 1e7")

    p = sub.add_parser("compare", help="stratified vs uniform over several seeds")
    _add_dataset_args(p)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--seeds", required=True, type=int, nargs="+")
    p.add_argument("--scale-factor", type=float, default=1000.0)
    p.add_argument("--json", type=Path, default=None)
    p.add_argument("--x1e7", action="store_true")

    p = sub.add_parser("nested", help="outer test fold + inner k-1 fold split")
    _add_dataset_args(p)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--inner-method", default=METHOD_UNIFORM,
                   choices=(METHOD_STRATIFIED, METHOD_UNIFORM))
    p.add_argument("--outer-seed", required=True, type=int)
    p.add_argument("--inner-seed", required=True, type=int)
    p.add_argument("--test-fold", type=int, default=None,
                   help="outer fold reserved for testing (default: last)")
    p.add_argument("--scale-factor", type=float, default=1000.0)
    p.add_argument("--layout", default=LAYOUT_LISTS,
                   choices=(LAYOUT_LISTS, LAYOUT_LINKS))
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("forge", help="generate a synthetic YOLO dataset")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--num-images", required=True, type=int)
    p.add_argument("--num-classes", required=True, type=int)
    p.add_argument("--class-weights", type=float, nargs="+", default=None,
                   help="relative class frequencies (default: uniform)")
    p.add_argument("--boxes-per-image", type=int, nargs=2, default=(1, 4),
                   metavar=("MIN", "MAX"))
    p.add_argument("--background-fraction", type=float, default=0.0)
    p.add_argument("--box-size-range", type=float, nargs=2, default=(0.05, 0.5),
                   metavar=("MIN", "MAX"))
    p.add_argument("--seed", required=True, type=int)

    return parser


def _cmd_analyze(args) -> int:
    records = _scan(args)
    stats = dataset_stats(records)
    b_min, b_avg, b_max = stats.boxes_per_image
    c_min, c_avg, c_max = stats.classes_per_image
    print(f"{'classes':>10} {'samples':>10} {'per_class':>10} "
          f"{'boxes/img (min avg max)':>26} {'classes/img (min avg max)':>28} "
          f"{'entropy':>8}")
    print(f"{stats.num_classes:>10} {stats.num_samples:>10} "
          f"{stats.samples_per_class:>10.1f} "
          f"{b_min:>10} {b_avg:>7.1f} {b_max:>7} "
          f"{c_min:>10} {c_avg:>8.1f} {c_max:>8} "
          f"{stats.entropy:>8.2f}")
    if stats.num_classes > MAX_RECOMMENDED_CLASSES:
        log.warning("dataset has %d classes; stratified splitting is "
                    "recommended for at most %d classes",
                    stats.num_classes, MAX_RECOMMENDED_CLASSES)
        print(f"warning: {stats.num_classes} classes exceeds the recommended "
              f"maximum of {MAX_RECOMMENDED_CLASSES} for stratification",
              file=sys.stderr)
    if args.json is not None:
        payload = stats.to_json_dict()
        payload["run"] = _run_record(args, ("images", "labels"), records)
        args.json.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
    return EXIT_OK


def _cmd_split(args) -> int:
    records = _scan(args)
    matrix = build_feature_matrix(records, args.scale_factor)
    if args.method == METHOD_STRATIFIED:
        assignment = split_stratified(matrix, args.k, args.seed)
    else:
        assignment = split_uniform(matrix.file_names(), args.k, args.seed)
    report = fold_report(matrix, assignment)
    run = _run_record(args, ("images", "labels", "k", "seed", "method",
                             "scale_factor"), records)
    summary = export_fold_lists(assignment, records, args.out, report,
                                run_record=run)
    print(report.to_text_table(scale=1e7 if args.x1e7 else 1.0))
    print(f"wrote {len(summary.list_files)} files to {summary.out_dir}")
    return EXIT_OK


def _compare_one_method(matrix, names, k, seeds, method):
    rows = []
    for seed in seeds:
        if method == METHOD_STRATIFIED:
            assignment = split_stratified(matrix, k, seed)
        else:
            assignment = split_uniform(names, k, seed)
        report = fold_report(matrix, assignment)
        t_med, t_hr = report.train_summary
        v_med, v_hr = report.val_summary
        rows.append({"seed": seed,
                     "train": {"median": t_med, "half_range": t_hr},
                     "val": {"median": v_med, "half_range": v_hr},
                     "per_fold_train_mae": list(report.per_fold_train_mae),
                     "per_fold_val_mae": list(report.per_fold_val_mae)})
    return rows


def _pooled(rows, side):
    values = [v for row in rows for v in row[f"per_fold_{side}_mae"]]
    return float(median(values)), (max(values) - min(values)) / 2.0


def _cmd_compare(args) -> int:
    records = _scan(args)
    matrix = build_feature_matrix(records, args.scale_factor)
    names = matrix.file_names()

    results = {method: _compare_one_method(matrix, names, args.k, args.seeds, method)
               for method in (METHOD_UNIFORM, METHOD_STRATIFIED)}

    scale = 1e7 if args.x1e7 else 1.0
    unit = " (x1e-7)" if args.x1e7 else ""
    print(f"{'method':>12}  {'train MAE' + unit:>24}  {'val MAE' + unit:>24}")
    summaries = {}
    for method in (METHOD_UNIFORM, METHOD_STRATIFIED):
        t_med, t_hr = _pooled(results[method], "train")
        v_med, v_hr = _pooled(results[method], "val")
        summaries[method] = {"train": {"median": t_med, "half_range": t_hr},
                             "val": {"median": v_med, "half_range": v_hr}}
        print(f"{method:>12}  {t_med * scale:>12.6g} +/- {t_hr * scale:<8.6g}"
              f"  {v_med * scale:>12.6g} +/- {v_hr * scale:<8.6g}")

    wins = sum(1 for u, s in zip(results[METHOD_UNIFORM], results[METHOD_STRATIFIED])
               if s["val"]["median"] <= u["val"]["median"])
    print(f"stratified val median <= uniform in {wins}/{len(args.seeds)} seeds")

    if args.json is not None:
        payload = {"k": args.k, "seeds": list(args.seeds),
                   "scale_factor": args.scale_factor,
                   "per_seed": results, "pooled": summaries,
                   "run": _run_record(args, ("images", "labels", "k", "seeds",
                                             "scale_factor"), records)}
        args.json.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    return EXIT_OK


def _cmd_nested(args) -> int:
    records = _scan(args)
    plan = nested_split(records, args.k, args.inner_method,
                        args.outer_seed, args.inner_seed,
                        test_fold=args.test_fold,
                        scale_factor=args.scale_factor)
    run = _run_record(args, ("images", "labels", "k", "inner_method",
                             "outer_seed", "inner_seed", "scale_factor",
                             "layout"), records)
    summary = export_manifests(plan, records, args.out, layout=args.layout,
                               run_record=run)
    print(f"test fold {plan.test_fold}: {len(plan.test_files())} images; "
          f"{plan.inner.k} inner folds")
    print(f"wrote {len(summary.list_files) + 1} files to {summary.out_dir}")
    return EXIT_OK


def _cmd_forge(args) -> int:
    weights = args.class_weights or [1.0] * args.num_classes
    config = ForgeConfig(
        num_images=args.num_images,
        num_classes=args.num_classes,
        class_weights=tuple(weights),
        boxes_per_image=tuple(args.boxes_per_image),
        background_fraction=args.background_fraction,
        box_size_range=tuple(args.box_size_range),
        seed=args.seed,
    )
    records = generate(config, args.out)
    run = _run_record(args, ("out", "num_images", "num_classes",
                             "background_fraction", "seed"), records)
    (args.out / "forge_run.json").write_text(
        json.dumps(run, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    n_bg = sum(1 for r in records.records if r.is_background)
    print(f"wrote {len(records)} images ({n_bg} backgrounds, "
          f"{len(records.class_universe)} classes) under {args.out}")
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "split": _cmd_split,
    "compare": _cmd_compare,
    "nested": _cmd_nested,
    "forge": _cmd_forge,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit2 as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=args.log_level.upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
