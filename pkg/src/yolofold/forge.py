"""Synthetic YOLO-format dataset generator for tests and benchmarks.

Produces label files plus zero-byte placeholder images (pixel content is
never read anywhere in this package), with controllable class count,
class-frequency skew, boxes per image, background fraction and box-size
range. Everything is driven by one SplitMix64 stream, so a config+seed
pair reproduces the same dataset byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .ingest import BoxAnnotation, ImageRecord, RawRecordSet, parse_label_line
from .rng import SplitMix64


@dataclass(frozen=True)
class ForgeConfig:
    num_images: int
    num_classes: int
    class_weights: tuple[float, ...]
    boxes_per_image: tuple[int, int] = (1, 4)
    background_fraction: float = 0.0
    box_size_range: tuple[float, float] = (0.05, 0.5)
    seed: int = 0

    def __post_init__(self):
        if self.num_images < 1:
            raise ValueError("num_images must be >= 1")
        if self.num_classes < 1:
            raise ValueError("num_classes must be >= 1")
        if len(self.class_weights) != self.num_classes:
            raise ValueError("class_weights length must equal num_classes")
        if any(w <= 0 for w in self.class_weights):
            raise ValueError("class_weights must be positive")
        lo, hi = self.boxes_per_image
        if not 1 <= lo <= hi:
            raise ValueError("boxes_per_image must satisfy 1 <= min <= max; "
                             "use background_fraction for empty images")
        if not 0.0 <= self.background_fraction < 1.0:
            raise ValueError("background_fraction must be in [0, 1)")
        slo, shi = self.box_size_range
        # lower bound 1e-6: label files carry 6 decimals, smaller sizes
        # would round to a degenerate zero-size box
        if not 1e-6 <= slo <= shi <= 1.0:
            raise ValueError("box_size_range must satisfy 1e-6 <= min <= max <= 1")


def _format_line(box: BoxAnnotation) -> str:
    return (f"{box.class_id} {box.x_center:.6f} {box.y_center:.6f} "
            f"{box.width:.6f} {box.height:.6f}")


def _weighted_class(gen: SplitMix64, cumulative: list[float]) -> int:
    u = gen.random() * cumulative[-1]
    for cls, threshold in enumerate(cumulative):
        if u < threshold:
            return cls
    return len(cumulative) - 1


def sample_records(config: ForgeConfig) -> tuple[RawRecordSet, dict[int, int]]:
    """Draw a dataset in memory; returns (records, planned class totals).

    The planned totals tally every class draw, so they equal the box
    counts of the returned records exactly. generate() materializes the
    same records to disk.
    """
    gen = SplitMix64(config.seed)

    width = max(4, len(str(config.num_images - 1)))
    stems = [f"img_{i:0{width}d}" for i in range(config.num_images)]

    # exact background count keeps tests non-flaky
    n_background = int(config.background_fraction * config.num_images)
    indices = list(range(config.num_images))
    gen.shuffle(indices)
    background = set(indices[:n_background])

    cumulative: list[float] = []
    acc = 0.0
    for w in config.class_weights:
        acc += w
        cumulative.append(acc)

    lo_boxes, hi_boxes = config.boxes_per_image
    lo_size, hi_size = config.box_size_range

    planned: dict[int, int] = {c: 0 for c in range(config.num_classes)}
    records = []
    for i, stem in enumerate(stems):
        boxes: list[BoxAnnotation] = []
        if i not in background:
            n_boxes = lo_boxes + gen.next_below(hi_boxes - lo_boxes + 1)
            for _ in range(n_boxes):
                cls = _weighted_class(gen, cumulative)
                planned[cls] += 1
                w = lo_size + gen.random() * (hi_size - lo_size)
                h = lo_size + gen.random() * (hi_size - lo_size)
                x = w / 2 + gen.random() * (1.0 - w)
                y = h / 2 + gen.random() * (1.0 - h)
                # round-trip through the label-line format so the in-memory
                # record matches a later scan of the written files exactly
                boxes.append(parse_label_line(_format_line(BoxAnnotation(cls, x, y, w, h))))
        records.append(ImageRecord(f"{stem}.jpg", tuple(boxes)))

    universe = tuple(sorted({b.class_id for r in records for b in r.boxes}))
    record_set = RawRecordSet(tuple(records), universe, (Path("images"), Path("labels")))
    return record_set, planned


def generate(config: ForgeConfig, out_dir: Path | str) -> RawRecordSet:
    """Write the dataset under out_dir/images and out_dir/labels.

    Background images get no label file (the scanner treats that the same
    as an empty one). Returns the record set that scanning the written
    directories reproduces exactly.
    """
    record_set, _ = sample_records(config)
    out_dir = Path(out_dir)
    image_dir = out_dir / "images"
    label_dir = out_dir / "labels"
    image_dir.mkdir(parents=True, exist_ok=True)
    label_dir.mkdir(parents=True, exist_ok=True)

    for record in record_set.records:
        (image_dir / record.file_name).touch()
        if record.boxes:
            lines = "".join(_format_line(b) + "\n" for b in record.boxes)
            (label_dir / f"{Path(record.file_name).stem}.txt").write_text(
                lines, encoding="utf-8")

    return RawRecordSet(record_set.records, record_set.class_universe,
                        (image_dir, label_dir))
