"""Nested cross-validation orchestration and fold-manifest export.

The nested protocol: a stratified outer split reserves one fold as the
fixed test set, then the remaining images are re-split into k-1 inner
folds by either method. Because the outer split depends only on
(records, k, outer_seed), the stratified-inner and uniform-inner plans
share an identical test set, which is what makes the two methods
comparable downstream.

Exports are plain-text lists (one relative image path per line, sorted,
newline-terminated) plus a JSON summary; all bytes are a pure function
of the plan, so re-exports are checksum-identical.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from pathlib import Path

from .features import build_feature_matrix
from .ingest import RawRecordSet
from .metrics import SplitReport
from .rng import GENERATOR_ID
from .splitting import (METHOD_STRATIFIED, METHOD_UNIFORM, FoldAssignment,
                        split_stratified, split_uniform)

MANIFEST_SCHEMA_VERSION = 1
LAYOUT_LISTS = "lists"
LAYOUT_LINKS = "links"


@dataclass(frozen=True)
class NestedPlan:
    """Outer stratified split with a reserved test fold plus inner re-split."""

    outer: FoldAssignment
    test_fold: int
    inner: FoldAssignment
    outer_seed: int
    inner_seed: int
    scale_factor: float

    def test_files(self) -> list[str]:
        return self.outer.members(self.test_fold)


def nested_split(records: RawRecordSet, k: int, inner_method: str,
                 outer_seed: int, inner_seed: int,
                 test_fold: int | None = None,
                 scale_factor: float = 1000.0) -> NestedPlan:
    """Build the nested plan: outer stratified k folds, inner k-1 folds.

    The outer split always uses the stratified method; the test fold
    defaults to the last one. The inner feature matrix is rebuilt from
    the reduced record set so classes absent from it cannot distort the
    inner label totals.
    """
    if k < 3:
        raise ValueError(f"nested split needs k >= 3, got {k}")
    if inner_method not in (METHOD_STRATIFIED, METHOD_UNIFORM):
        raise ValueError(f"unknown inner method: {inner_method!r}")
    if test_fold is None:
        test_fold = k - 1
    if not 0 <= test_fold < k:
        raise ValueError(f"test_fold {test_fold} out of range [0, {k})")

    matrix = build_feature_matrix(records, scale_factor)
    outer = split_stratified(matrix, k, outer_seed)

    test_names = set(outer.members(test_fold))
    rest = [name for name in records.file_names() if name not in test_names]
    rest_records = records.subset(rest)
    if inner_method == METHOD_STRATIFIED:
        inner_matrix = build_feature_matrix(rest_records, scale_factor)
        inner = split_stratified(inner_matrix, k - 1, inner_seed)
    else:
        inner = split_uniform(rest_records.file_names(), k - 1, inner_seed)

    return NestedPlan(outer, test_fold, inner, outer_seed, inner_seed,
                      float(scale_factor))


@dataclass(frozen=True)
class ManifestSummary:
    """What an export wrote: list files, per-fold counts, summary path."""

    out_dir: Path
    list_files: tuple[str, ...]
    counts: dict[str, int]
    summary_path: Path


def _relative_image_paths(records: RawRecordSet, names: list[str],
                          root: Path) -> list[str]:
    image_dir = records.source_paths[0]
    try:
        prefix = image_dir.resolve().relative_to(root.resolve())
    except ValueError:
        raise ValueError(f"image directory {image_dir} is not under the "
                         f"manifest root {root}") from None
    return sorted((prefix / name).as_posix() for name in names)


def _write_list(path: Path, lines: list[str]) -> None:
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def _write_summary(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _materialize(records: RawRecordSet, names: list[str], dest: Path) -> None:
    """Hard-link (or copy) image and label files for one fold role."""
    image_dir, label_dir = records.source_paths
    img_dest = dest / "images"
    lbl_dest = dest / "labels"
    img_dest.mkdir(parents=True, exist_ok=True)
    lbl_dest.mkdir(parents=True, exist_ok=True)
    for name in names:
        _link_or_copy(image_dir / name, img_dest / name)
        label = label_dir / f"{Path(name).stem}.txt"
        if label.exists():
            _link_or_copy(label, lbl_dest / label.name)


def _link_or_copy(src: Path, dst: Path) -> None:
    if not src.exists():
        raise FileNotFoundError(f"source file missing: {src}")
    if dst.exists():
        dst.unlink()
    try:
        dst.hardlink_to(src)
    except OSError:
        shutil.copy2(src, dst)


def export_manifests(plan: NestedPlan, records: RawRecordSet,
                     out_dir: Path | str, layout: str = LAYOUT_LISTS,
                     root: Path | None = None,
                     run_record: dict | None = None) -> ManifestSummary:
    """Write test.txt, train_fold_i.txt / val_fold_i.txt and summary.json.

    Manifest lines are image paths relative to ``root`` (default: the
    parent of the image directory) so the files stay relocatable. With
    layout="links", per-role directories of hard links (copies when
    linking fails) of image+label files are materialized as well.
    """
    if layout not in (LAYOUT_LISTS, LAYOUT_LINKS):
        raise ValueError(f"unknown layout: {layout!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if root is None:
        root = records.source_paths[0].parent

    test_names = plan.test_files()
    written: list[str] = []
    counts: dict[str, int] = {}

    _write_list(out_dir / "test.txt",
                _relative_image_paths(records, test_names, root))
    written.append("test.txt")
    counts["test"] = len(test_names)

    inner_k = plan.inner.k
    for fold in range(inner_k):
        val_names = plan.inner.members(fold)
        train_names = sorted(set(plan.inner.fold_of) - set(val_names))
        _write_list(out_dir / f"val_fold_{fold}.txt",
                    _relative_image_paths(records, val_names, root))
        _write_list(out_dir / f"train_fold_{fold}.txt",
                    _relative_image_paths(records, train_names, root))
        written += [f"train_fold_{fold}.txt", f"val_fold_{fold}.txt"]
        counts[f"train_fold_{fold}"] = len(train_names)
        counts[f"val_fold_{fold}"] = len(val_names)

    if layout == LAYOUT_LINKS:
        _materialize(records, test_names, out_dir / "test")
        for fold in range(inner_k):
            val_names = plan.inner.members(fold)
            train_names = sorted(set(plan.inner.fold_of) - set(val_names))
            _materialize(records, train_names, out_dir / f"fold_{fold}" / "train")
            _materialize(records, val_names, out_dir / f"fold_{fold}" / "val")

    payload = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "kind": "nested",
        "k": plan.outer.k,
        "test_fold": plan.test_fold,
        "outer_method": plan.outer.method,
        "inner_method": plan.inner.method,
        "outer_seed": plan.outer_seed,
        "inner_seed": plan.inner_seed,
        "scale_factor": plan.scale_factor,
        "generator": GENERATOR_ID,
        "layout": layout,
        "counts": counts,
    }
    if run_record is not None:
        payload["run"] = run_record
    summary_path = out_dir / "summary.json"
    _write_summary(summary_path, payload)

    return ManifestSummary(out_dir, tuple(written), counts, summary_path)


def export_fold_lists(assignment: FoldAssignment, records: RawRecordSet,
                      out_dir: Path | str, report: SplitReport | None = None,
                      root: Path | None = None,
                      run_record: dict | None = None) -> ManifestSummary:
    """Write one fold_i.txt per fold plus summary.json (and a report).

    Flat export used by the plain split command; same path conventions
    and determinism guarantees as export_manifests.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if root is None:
        root = records.source_paths[0].parent

    written: list[str] = []
    counts: dict[str, int] = {}
    for fold in range(assignment.k):
        names = assignment.members(fold)
        _write_list(out_dir / f"fold_{fold}.txt",
                    _relative_image_paths(records, names, root))
        written.append(f"fold_{fold}.txt")
        counts[f"fold_{fold}"] = len(names)

    payload = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "kind": "flat",
        "k": assignment.k,
        "method": assignment.method,
        "seed": assignment.seed,
        "generator": GENERATOR_ID,
        "counts": counts,
    }
    if report is not None:
        payload["report"] = report.to_json_dict()
        (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")
        written.append("report.json")
    if run_record is not None:
        payload["run"] = run_record
    summary_path = out_dir / "summary.json"
    _write_summary(summary_path, payload)
    return ManifestSummary(out_dir, tuple(written), counts, summary_path)
