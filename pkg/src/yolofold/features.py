"""Per-image stratification labels built from raw box records.

Each image becomes one row: a background indicator, one count column per
observed class, and three geometry labels (scaled average box width and
height plus the height/width ratio). Width/height averages are scaled
(default x1000) so they carry comparable weight to the count columns
during stratification.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ingest import RawRecordSet

BACKGROUND_LABEL = "background"
GEOMETRY_LABELS = ("avg_w", "avg_h", "avg_ratio")


@dataclass(frozen=True)
class FeatureRow:
    """Stratification labels for one image.

    class_counts[0] is the background indicator column; class_counts[1 + j]
    counts boxes of the j-th class in the matrix's class universe.
    box_count_effective is the box count with 0 replaced by 1, the divisor
    used for the geometry averages (keeps background rows at 0 without a
    zero division).
    """

    file_name: str
    class_counts: tuple[int, ...]
    box_count_effective: int
    avg_w: float
    avg_h: float
    avg_ratio: float


@dataclass(frozen=True)
class FeatureMatrix:
    """All feature rows, in the record set's (file-name sorted) order."""

    rows: tuple[FeatureRow, ...]
    column_labels: tuple[str, ...]
    class_universe: tuple[int, ...]
    scale_factor: float

    def __len__(self) -> int:
        return len(self.rows)

    def file_names(self) -> list[str]:
        return [r.file_name for r in self.rows]

    def labels_array(self) -> np.ndarray:
        """Dense (n_images, n_labels) float64 matrix, columns as labeled."""
        out = np.empty((len(self.rows), len(self.column_labels)), dtype=np.float64)
        for i, row in enumerate(self.rows):
            out[i, : len(row.class_counts)] = row.class_counts
            out[i, -3:] = (row.avg_w, row.avg_h, row.avg_ratio)
        return out

    def to_csv(self, path: Path | str) -> None:
        """Audit export: file_name column followed by the label columns."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(("file_name",) + self.column_labels)
            for row in self.rows:
                writer.writerow((row.file_name,) + row.class_counts
                                + (row.avg_w, row.avg_h, row.avg_ratio))


def build_feature_matrix(records: RawRecordSet,
                         scale_factor: float = 1000.0) -> FeatureMatrix:
    """Aggregate a record set into per-image stratification labels.

    Per image: count boxes by class, sum widths and heights, then
    avg_w = scale_factor * sum_w / box_count_effective (likewise avg_h)
    and avg_ratio = avg_h / avg_w (0 when avg_w is 0). Background rows get
    indicator 1 and zero counts, so all their averages are 0.
    """
    if not records.records:
        raise ValueError("nothing to stratify: record set is empty")
    if scale_factor <= 0:
        raise ValueError(f"scale_factor must be positive, got {scale_factor}")

    universe = records.class_universe
    col_of = {cls: 1 + j for j, cls in enumerate(universe)}

    rows = []
    for record in records.records:
        counts = [0] * (1 + len(universe))
        sum_w = 0.0
        sum_h = 0.0
        for box in record.boxes:
            counts[col_of[box.class_id]] += 1
            sum_w += box.width
            sum_h += box.height
        n_boxes = len(record.boxes)
        if n_boxes == 0:
            counts[0] = 1
        effective = max(1, n_boxes)
        avg_w = scale_factor * sum_w / effective
        avg_h = scale_factor * sum_h / effective
        avg_ratio = avg_h / avg_w if avg_w > 0 else 0.0
        rows.append(FeatureRow(record.file_name, tuple(counts), effective,
                               avg_w, avg_h, avg_ratio))

    labels = (BACKGROUND_LABEL,) + tuple(f"class_{c}" for c in universe) + GEOMETRY_LABELS
    return FeatureMatrix(tuple(rows), labels, universe, float(scale_factor))
