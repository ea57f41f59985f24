"""K-fold partitioners: label-aware stratified and seeded uniform.

The stratified splitter runs iterative stratification generalized to
non-negative real-valued label masses, so integer class counts and the
scaled geometry averages share one mechanism. The greedy inner loop is
the hot kernel: a compiled Cython backend is used when available, with a
bit-identical pure-Python fallback selected at import.

Every random decision (the visit-order shuffle and fold tie-breaks) is
driven by SplitMix64 from an explicit seed, so assignments reproduce
exactly across runs, platforms and kernel backends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .features import FeatureMatrix
from .rng import SplitMix64

try:
    from . import _speedups as _kernel
except ImportError:  # extension not built; pure fallback
    from . import _kernel_py as _kernel

KERNEL_BACKEND = _kernel.BACKEND

METHOD_STRATIFIED = "stratified"
METHOD_UNIFORM = "uniform"


@dataclass(frozen=True)
class FoldAssignment:
    """A seeded, reproducible mapping image -> fold index in [0, k)."""

    k: int
    fold_of: dict[str, int]
    method: str
    seed: int

    def members(self, fold: int) -> list[str]:
        """File names of one fold, sorted."""
        if not 0 <= fold < self.k:
            raise ValueError(f"fold index {fold} out of range [0, {self.k})")
        return sorted(name for name, f in self.fold_of.items() if f == fold)

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for f in self.fold_of.values():
            sizes[f] += 1
        return sizes


def _check_split_args(n: int, k: int) -> None:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < k:
        raise ValueError(f"cannot split {n} images into {k} folds")


def split_stratified(matrix: FeatureMatrix, k: int, seed: int) -> FoldAssignment:
    """Partition images into k folds balancing every label column.

    Deterministic for fixed (matrix, k, seed). Per label column the
    desired per-fold mass is column_total / k; columns are processed from
    scarcest remaining mass upward, and each image carrying the column
    goes to the fold with the greatest remaining demand for it (ties:
    fewest images already assigned, then seeded draw). See the kernel
    modules for the exact procedure.
    """
    names = matrix.file_names()
    _check_split_args(len(names), k)
    labels = matrix.labels_array()
    if labels.size and float(labels.min()) < 0.0:
        raise ValueError("stratification labels must be non-negative")

    gen = SplitMix64(seed)
    order = list(range(len(names)))
    gen.shuffle(order)
    tie_seed = gen.next_u64()

    assigned = _kernel.assign_stratified(labels, k, order, tie_seed)
    fold_of = {name: int(fold) for name, fold in zip(names, assigned)}
    return FoldAssignment(k, fold_of, METHOD_STRATIFIED, seed)


def split_uniform(file_names: Iterable[str], k: int, seed: int) -> FoldAssignment:
    """Seeded shuffle then contiguous chunking into k near-equal folds.

    The first (n mod k) folds receive ceil(n/k) images, the rest
    floor(n/k). Deterministic for fixed (file_names, k, seed).
    """
    names = list(file_names)
    _check_split_args(len(names), k)
    if len(set(names)) != len(names):
        raise ValueError("file names must be unique")

    shuffled = list(names)
    SplitMix64(seed).shuffle(shuffled)

    n = len(shuffled)
    base, extra = divmod(n, k)
    fold_of: dict[str, int] = {}
    start = 0
    for fold in range(k):
        size = base + (1 if fold < extra else 0)
        for name in shuffled[start:start + size]:
            fold_of[name] = fold
        start += size
    return FoldAssignment(k, fold_of, METHOD_UNIFORM, seed)


def folds_to_train_val(assignment: FoldAssignment,
                       val_fold: int) -> tuple[list[str], list[str]]:
    """Split an assignment into (train, val) name lists, both sorted."""
    if not 0 <= val_fold < assignment.k:
        raise ValueError(f"val_fold {val_fold} out of range [0, {assignment.k})")
    train = sorted(n for n, f in assignment.fold_of.items() if f != val_fold)
    val = sorted(n for n, f in assignment.fold_of.items() if f == val_fold)
    return train, val
