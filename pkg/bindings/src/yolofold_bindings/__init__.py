"""Thin wrapper exposing yolofold's scan/split/report pipeline as plain data.

Both entry points run the full in-process pipeline and return native
structures (dicts, lists, ints, floats) mirroring the core library's
types, so downstream ML tooling never touches yolofold classes. No logic
lives here beyond type conversion; core exceptions propagate unchanged
with their diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yolofold
from yolofold import (METHOD_STRATIFIED, METHOD_UNIFORM, FoldAssignment,
                      build_feature_matrix, fold_report, nested_split,
                      scan_dataset, split_stratified, split_uniform)

__version__ = yolofold.__version__

__all__ = ["BoundSplitResult", "bound_split", "bound_nested_split", "__version__"]


@dataclass(frozen=True)
class BoundSplitResult:
    """Fold mapping plus the split report, both as plain structures."""

    fold_of: dict[str, int]
    report: dict


def _assignment_dict(assignment: FoldAssignment) -> dict:
    return {
        "k": assignment.k,
        "method": assignment.method,
        "seed": assignment.seed,
        "fold_of": dict(assignment.fold_of),
    }


def bound_split(image_dir: str | Path, label_dir: str | Path, k: int,
                seed: int, method: str = METHOD_STRATIFIED) -> BoundSplitResult:
    """Scan, build features, split and report; equivalent to the CLI split.

    For identical inputs and seed the fold mapping matches the CLI's
    exported fold lists exactly, and ``report`` matches its report.json.
    """
    if method not in (METHOD_STRATIFIED, METHOD_UNIFORM):
        raise ValueError(f"unknown method: {method!r}")
    records = scan_dataset(image_dir, label_dir)
    matrix = build_feature_matrix(records)
    if method == METHOD_STRATIFIED:
        assignment = split_stratified(matrix, k, seed)
    else:
        assignment = split_uniform(matrix.file_names(), k, seed)
    report = fold_report(matrix, assignment)
    return BoundSplitResult(dict(assignment.fold_of), report.to_json_dict())


def bound_nested_split(image_dir: str | Path, label_dir: str | Path, k: int,
                       inner_method: str, outer_seed: int,
                       inner_seed: int) -> dict:
    """Nested plan (outer test fold + inner re-split) as a plain dict."""
    records = scan_dataset(image_dir, label_dir)
    plan = nested_split(records, k, inner_method, outer_seed, inner_seed)
    return {
        "outer": _assignment_dict(plan.outer),
        "inner": _assignment_dict(plan.inner),
        "test_fold": plan.test_fold,
        "test_files": plan.test_files(),
        "outer_seed": plan.outer_seed,
        "inner_seed": plan.inner_seed,
    }
