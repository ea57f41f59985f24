"""Distribution diagnostics: entropy, class-ratio MAE, dataset stats.

Class distributions are measured over box counts (an image with five
boxes of class 2 contributes five), so background images affect only the
image-level statistics. Entropy defaults to natural log; the base is
configurable for audit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from statistics import median

import numpy as np

from .features import FeatureMatrix
from .ingest import RawRecordSet
from .splitting import FoldAssignment

REPORT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ClassDistribution:
    """Box counts per class over a fixed class universe.

    ratios are counts normalized to sum 1; a distribution with zero total
    (e.g. an all-background fold) has all-zero ratios.
    """

    class_ids: tuple[int, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.class_ids) != len(self.counts):
            raise ValueError("class_ids and counts length mismatch")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def ratios(self) -> tuple[float, ...]:
        total = self.total
        if total == 0:
            return (0.0,) * len(self.counts)
        return tuple(c / total for c in self.counts)


@dataclass(frozen=True)
class DatasetStats:
    """One-row statistical summary of a dataset (image and box level)."""

    num_classes: int
    num_samples: int
    samples_per_class: float
    boxes_per_image: tuple[int, float, int]
    classes_per_image: tuple[int, float, int]
    entropy: float

    def to_json_dict(self) -> dict:
        return {
            "num_classes": self.num_classes,
            "num_samples": self.num_samples,
            "samples_per_class": self.samples_per_class,
            "boxes_per_image": dict(zip(("min", "avg", "max"), self.boxes_per_image)),
            "classes_per_image": dict(zip(("min", "avg", "max"), self.classes_per_image)),
            "entropy": self.entropy,
        }


@dataclass(frozen=True)
class SplitReport:
    """Per-fold class-ratio MAE for the train and validation sides.

    Summaries are (median, half_range) with half_range = (max - min) / 2;
    the per-fold vectors are always kept so any other summary can be
    recomputed. MAE values are raw ratios (display scaling such as x1e7
    is left to presentation).
    """

    method: str
    k: int
    seed: int
    per_fold_train_mae: tuple[float, ...]
    per_fold_val_mae: tuple[float, ...]

    @staticmethod
    def _summary(values: tuple[float, ...]) -> tuple[float, float]:
        return float(median(values)), (max(values) - min(values)) / 2.0

    @property
    def train_summary(self) -> tuple[float, float]:
        return self._summary(self.per_fold_train_mae)

    @property
    def val_summary(self) -> tuple[float, float]:
        return self._summary(self.per_fold_val_mae)

    def to_json_dict(self) -> dict:
        train_med, train_hr = self.train_summary
        val_med, val_hr = self.val_summary
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "method": self.method,
            "k": self.k,
            "seed": self.seed,
            "per_fold_train_mae": list(self.per_fold_train_mae),
            "per_fold_val_mae": list(self.per_fold_val_mae),
            "train_summary": {"median": train_med, "half_range": train_hr},
            "val_summary": {"median": val_med, "half_range": val_hr},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def to_text_table(self, scale: float = 1.0) -> str:
        """Aligned fold-by-fold table; scale only affects display."""
        lines = [f"{'fold':>4}  {'train_mae':>12}  {'val_mae':>12}"]
        for f in range(self.k):
            lines.append(f"{f:>4}  {self.per_fold_train_mae[f] * scale:>12.6g}  "
                         f"{self.per_fold_val_mae[f] * scale:>12.6g}")
        tm, th = self.train_summary
        vm, vh = self.val_summary
        lines.append(f"{'med':>4}  {tm * scale:>12.6g}  {vm * scale:>12.6g}")
        lines.append(f"{'+/-':>4}  {th * scale:>12.6g}  {vh * scale:>12.6g}")
        return "\n".join(lines)


def entropy(dist: ClassDistribution, base: float = math.e) -> float:
    """-sum(p_i * log p_i) over classes; zero-probability classes add 0."""
    if dist.total == 0:
        raise ValueError("entropy undefined for an empty distribution")
    if base <= 1.0:
        raise ValueError(f"log base must exceed 1, got {base}")
    acc = 0.0
    for p in dist.ratios:
        if p > 0.0:
            acc -= p * math.log(p)
    return acc / math.log(base) if base != math.e else acc


def class_ratio_mae(reference: ClassDistribution,
                    subset: ClassDistribution) -> float:
    """Mean absolute difference between the two ratio vectors.

    Both distributions must be defined over the same class universe;
    build the subset against the reference's class_ids so classes it is
    missing count as ratio 0.
    """
    if reference.class_ids != subset.class_ids:
        raise ValueError("distributions cover different class universes; "
                         "align them over the reference class_ids first")
    if not reference.class_ids:
        raise ValueError("empty class universe")
    ref = reference.ratios
    sub = subset.ratios
    return sum(abs(r - s) for r, s in zip(ref, sub)) / len(ref)


def box_class_distribution(records: RawRecordSet,
                           class_ids: tuple[int, ...] | None = None) -> ClassDistribution:
    """Count boxes by class; universe defaults to the record set's own."""
    ids = records.class_universe if class_ids is None else tuple(class_ids)
    index = {c: i for i, c in enumerate(ids)}
    counts = [0] * len(ids)
    for record in records.records:
        for box in record.boxes:
            counts[index[box.class_id]] += 1
    return ClassDistribution(ids, tuple(counts))


def dataset_stats(records: RawRecordSet) -> DatasetStats:
    """Dataset summary row: counts, per-image spreads, box-class entropy.

    Background images count as samples (a boxes-per-image minimum of 0
    marks their presence); entropy is over box classes only, backgrounds
    carry no probability mass.
    """
    if not records.records:
        raise ValueError("empty record set")
    boxes = [len(r.boxes) for r in records.records]
    classes = [len({b.class_id for b in r.boxes}) for r in records.records]
    num_classes = len(records.class_universe)
    num_samples = len(records.records)
    dist = box_class_distribution(records)
    ent = entropy(dist) if dist.total > 0 else 0.0
    return DatasetStats(
        num_classes=num_classes,
        num_samples=num_samples,
        samples_per_class=num_samples / num_classes if num_classes else float("nan"),
        boxes_per_image=(min(boxes), sum(boxes) / num_samples, max(boxes)),
        classes_per_image=(min(classes), sum(classes) / num_samples, max(classes)),
        entropy=ent,
    )


def _fold_class_counts(matrix: FeatureMatrix,
                       assignment: FoldAssignment) -> np.ndarray:
    """(k, n_classes) box counts per fold from the matrix's count columns."""
    n_classes = len(matrix.class_universe)
    counts = np.zeros((assignment.k, n_classes), dtype=np.int64)
    for row in matrix.rows:
        fold = assignment.fold_of[row.file_name]
        counts[fold] += np.asarray(row.class_counts[1:], dtype=np.int64)
    return counts


def fold_report(matrix: FeatureMatrix, assignment: FoldAssignment) -> SplitReport:
    """Per-fold MAE of train/val class ratios against the full dataset.

    For each fold f the validation side is fold f itself and the train
    side is the union of the other k-1 folds; both are compared with the
    whole dataset's box-class distribution.
    """
    matrix_names = set(matrix.file_names())
    assigned_names = set(assignment.fold_of)
    if matrix_names != assigned_names:
        raise ValueError("assignment does not cover exactly the matrix's images")

    ids = matrix.class_universe
    per_fold = _fold_class_counts(matrix, assignment)
    total = per_fold.sum(axis=0)
    reference = ClassDistribution(ids, tuple(int(c) for c in total))

    train_mae = []
    val_mae = []
    for f in range(assignment.k):
        val_counts = per_fold[f]
        train_counts = total - val_counts
        val_mae.append(class_ratio_mae(
            reference, ClassDistribution(ids, tuple(int(c) for c in val_counts))))
        train_mae.append(class_ratio_mae(
            reference, ClassDistribution(ids, tuple(int(c) for c in train_counts))))
    return SplitReport(assignment.method, assignment.k, assignment.seed,
                       tuple(train_mae), tuple(val_mae))
