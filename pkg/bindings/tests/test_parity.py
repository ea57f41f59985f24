"""Bindings parity: wrapper output must equal the CLI's, field for field."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

import yolofold
import yolofold_bindings as bindings
from yolofold.forge import ForgeConfig, generate
from yolofold.rng import SplitMix64


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "yolofold", *args],
                          capture_output=True, text=True, check=False)


def cli_fold_of(out_dir: Path, k: int) -> dict[str, int]:
    mapping: dict[str, int] = {}
    for fold in range(k):
        for line in (out_dir / f"fold_{fold}.txt").read_text().splitlines():
            mapping[Path(line).name] = fold
    return mapping


def forge_dataset(tmp_path: Path, case: int, gen: SplitMix64) -> Path:
    n_classes = 2 + gen.next_below(3)
    config = ForgeConfig(
        num_images=20 + gen.next_below(30),
        num_classes=n_classes,
        class_weights=tuple(0.5 + gen.random() * 3 for _ in range(n_classes)),
        background_fraction=gen.random() * 0.3,
        seed=gen.next_u64(),
    )
    root = tmp_path / f"ds_{case}"
    generate(config, root)
    return root


def test_version_matches_core():
    assert bindings.__version__ == yolofold.__version__


def test_split_parity_with_cli(tmp_path):
    gen = SplitMix64(0xB1DD1E)
    for case in range(10):
        root = forge_dataset(tmp_path, case, gen)
        k = 3 + gen.next_below(4)
        seed = gen.next_below(10_000)
        method = ("stratified", "uniform")[gen.next_below(2)]

        out = tmp_path / f"cli_{case}"
        proc = run_cli("split", "--images", str(root / "images"),
                       "--labels", str(root / "labels"), "--k", str(k),
                       "--seed", str(seed), "--method", method,
                       "--out", str(out))
        assert proc.returncode == 0, proc.stderr

        result = bindings.bound_split(root / "images", root / "labels",
                                      k, seed, method)
        assert result.fold_of == cli_fold_of(out, k)
        assert result.report == json.loads((out / "report.json").read_text())


def test_nested_parity_with_cli(tmp_path):
    gen = SplitMix64(0x9E57ED)
    root = forge_dataset(tmp_path, 0, gen)
    out = tmp_path / "cli_nested"
    proc = run_cli("nested", "--images", str(root / "images"),
                   "--labels", str(root / "labels"), "--k", "5",
                   "--inner-method", "stratified", "--outer-seed", "3",
                   "--inner-seed", "4", "--out", str(out))
    assert proc.returncode == 0, proc.stderr

    plan = bindings.bound_nested_split(root / "images", root / "labels",
                                       5, "stratified", 3, 4)
    cli_test = [Path(line).name
                for line in (out / "test.txt").read_text().splitlines()]
    assert plan["test_files"] == cli_test
    for fold in range(4):
        cli_val = [Path(line).name
                   for line in (out / f"val_fold_{fold}.txt").read_text().splitlines()]
        bound_val = sorted(n for n, f in plan["inner"]["fold_of"].items() if f == fold)
        assert bound_val == cli_val


def test_four_image_two_class_split():
    # two images per class, identical geometry: every seed must place one
    # image of each class in each fold
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        (root / "images").mkdir()
        (root / "labels").mkdir()
        for name, cls in (("a", 0), ("b", 0), ("c", 1), ("d", 1)):
            (root / "images" / f"{name}.jpg").touch()
            (root / "labels" / f"{name}.txt").write_text(
                f"{cls} 0.5 0.5 0.2 0.2\n")
        for seed in range(10):
            result = bindings.bound_split(root / "images", root / "labels",
                                          2, seed)
            by_fold = {0: set(), 1: set()}
            for name, fold in result.fold_of.items():
                by_fold[fold].add(name)
            for members in by_fold.values():
                assert len(members) == 2
                assert len(members & {"a.jpg", "b.jpg"}) == 1
                assert len(members & {"c.jpg", "d.jpg"}) == 1


def test_core_errors_surface_unchanged(tmp_path):
    (tmp_path / "images").mkdir()
    (tmp_path / "labels").mkdir()
    (tmp_path / "images" / "a.jpg").touch()
    with pytest.raises(ValueError, match="k must be >= 2"):
        bindings.bound_split(tmp_path / "images", tmp_path / "labels", 1, 0)
    with pytest.raises(yolofold.IngestError, match="image directory"):
        bindings.bound_split(tmp_path / "missing", tmp_path / "labels", 2, 0)
    with pytest.raises(ValueError, match="unknown method"):
        bindings.bound_split(tmp_path / "images", tmp_path / "labels", 2, 0,
                             method="telepathy")
