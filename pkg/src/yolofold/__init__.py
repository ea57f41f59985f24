"""Stratified k-fold splitting for YOLO-format object detection datasets.

Splits image datasets into k folds while preserving per-class box counts
and box-geometry distributions across folds, with diagnostics (entropy,
class-ratio MAE), a nested cross-validation planner, manifest export and
a synthetic dataset forge. See the ``yolofold`` CLI for the command-line
surface.
"""

from .errors import DatasetError, IngestError, LabelParseError
from .features import FeatureMatrix, FeatureRow, build_feature_matrix
from .forge import ForgeConfig, generate, sample_records
from .ingest import (BoxAnnotation, ImageRecord, IngestOptions, RawRecordSet,
                     parse_label_line, scan_dataset)
from .metrics import (ClassDistribution, DatasetStats, SplitReport,
                      box_class_distribution, class_ratio_mae, dataset_stats,
                      entropy, fold_report)
from .pipeline import (ManifestSummary, NestedPlan, export_fold_lists,
                       export_manifests, nested_split)
from .rng import GENERATOR_ID, SplitMix64
from .splitting import (KERNEL_BACKEND, METHOD_STRATIFIED, METHOD_UNIFORM,
                        FoldAssignment, folds_to_train_val, split_stratified,
                        split_uniform)

__version__ = "0.1.0"

__all__ = [
    "BoxAnnotation", "ClassDistribution", "DatasetError", "DatasetStats",
    "FeatureMatrix", "FeatureRow", "FoldAssignment", "ForgeConfig",
    "GENERATOR_ID", "ImageRecord", "IngestError", "IngestOptions",
    "KERNEL_BACKEND", "LabelParseError", "METHOD_STRATIFIED",
    "METHOD_UNIFORM", "ManifestSummary", "NestedPlan", "RawRecordSet",
    "SplitMix64", "SplitReport", "box_class_distribution", "class_ratio_mae",
    "build_feature_matrix", "dataset_stats", "entropy", "export_fold_lists",
    "export_manifests", "fold_report", "folds_to_train_val", "generate",
    "nested_split", "parse_label_line", "sample_records", "scan_dataset",
    "split_stratified", "split_uniform",
]
