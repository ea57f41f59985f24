from __future__ import annotations

from pathlib import Path

import pytest


@pytest.fixture
def dataset_dir(tmp_path):
    """Factory writing a small YOLO dataset; returns (image_dir, label_dir).

    spec maps file stem -> label file text, or None for an image with no
    label file. Pass an extension in the stem ("b.png") to override .jpg.
    """

    def build(spec: dict[str, str | None]) -> tuple[Path, Path]:
        image_dir = tmp_path / "images"
        label_dir = tmp_path / "labels"
        image_dir.mkdir(exist_ok=True)
        label_dir.mkdir(exist_ok=True)
        for stem, label_text in spec.items():
            name = stem if "." in stem else f"{stem}.jpg"
            (image_dir / name).touch()
            if label_text is not None:
                (label_dir / f"{Path(name).stem}.txt").write_text(
                    label_text, encoding="utf-8")
        return image_dir, label_dir

    return build
