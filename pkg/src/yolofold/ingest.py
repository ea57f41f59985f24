"""Directory scanning and YOLO label-file parsing.

One text file per image, one box per line: ``class x_center y_center
width height``, whitespace-separated, coordinates normalized to [0, 1].
An image with no label file, or whose label file yields zero boxes, is a
background image. Scan results are sorted by file name so the outcome is
independent of filesystem enumeration order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import IngestError, LabelParseError

DEFAULT_IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png")


@dataclass(frozen=True)
class BoxAnnotation:
    """One labeled box in image-relative coordinates."""

    class_id: int
    x_center: float
    y_center: float
    width: float
    height: float


@dataclass(frozen=True)
class ImageRecord:
    """One image: its file name plus its boxes (empty for backgrounds)."""

    file_name: str
    boxes: tuple[BoxAnnotation, ...]

    @property
    def is_background(self) -> bool:
        return not self.boxes


@dataclass(frozen=True)
class RawRecordSet:
    """All images of a dataset, sorted by file name.

    class_universe is the sorted tuple of class ids observed across all
    boxes. warnings collects non-fatal findings (orphan label files,
    skipped lines, duplicate stems).
    """

    records: tuple[ImageRecord, ...]
    class_universe: tuple[int, ...]
    source_paths: tuple[Path, Path]
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.records)

    def file_names(self) -> list[str]:
        return [r.file_name for r in self.records]

    def content_hash(self) -> str:
        """SHA-256 over file names and exact box values; path-independent.

        Two scans of byte-identical datasets hash the same regardless of
        where the directories live, so run records can attest the input.
        """
        digest = hashlib.sha256()
        for record in self.records:
            digest.update(record.file_name.encode())
            for b in record.boxes:
                digest.update(
                    f"|{b.class_id} {b.x_center!r} {b.y_center!r} "
                    f"{b.width!r} {b.height!r}".encode())
            digest.update(b"\n")
        return digest.hexdigest()

    def subset(self, file_names) -> "RawRecordSet":
        """Records restricted to the given file names (order preserved)."""
        keep = set(file_names)
        missing = keep - {r.file_name for r in self.records}
        if missing:
            raise ValueError(f"unknown file names: {sorted(missing)[:5]}")
        records = tuple(r for r in self.records if r.file_name in keep)
        universe = sorted({b.class_id for r in records for b in r.boxes})
        return RawRecordSet(records, tuple(universe), self.source_paths)


@dataclass(frozen=True)
class IngestOptions:
    """Knobs for scan_dataset.

    on_parse_error: "abort" raises on the first bad label line; "skip"
    drops the line and records a warning. strict_boxes rejects zero
    width/height boxes (degenerate geometry corrupts the ratio label);
    turning it off keeps them and records a warning instead.
    """

    image_extensions: tuple[str, ...] = DEFAULT_IMAGE_EXTENSIONS
    on_parse_error: str = "abort"
    strict_boxes: bool = True
    allow_missing_label_dir: bool = False

    def __post_init__(self):
        if self.on_parse_error not in ("abort", "skip"):
            raise ValueError(
                f"on_parse_error must be 'abort' or 'skip', got {self.on_parse_error!r}")


def parse_label_line(line: str, *, allow_degenerate: bool = False) -> BoxAnnotation:
    """Parse one YOLO label line into a BoxAnnotation.

    Exactly five whitespace-separated tokens: integer class id, then
    x_center, y_center, width, height as reals. x/y must lie in [0, 1];
    width/height in (0, 1], or [0, 1] when allow_degenerate is set.
    """
    tokens = line.split()
    if len(tokens) != 5:
        raise LabelParseError(f"expected 5 tokens, got {len(tokens)}: {line!r}")
    try:
        class_id = int(tokens[0], 10)
    except ValueError:
        raise LabelParseError(f"class id is not an integer: {tokens[0]!r}") from None
    if class_id < 0:
        raise LabelParseError(f"class id must be >= 0, got {class_id}")
    try:
        x, y, w, h = (float(t) for t in tokens[1:])
    except ValueError:
        raise LabelParseError(f"non-numeric coordinate in line: {line!r}") from None
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise LabelParseError(f"center ({x}, {y}) outside [0, 1]")
    if not (0.0 <= w <= 1.0 and 0.0 <= h <= 1.0):
        raise LabelParseError(f"size ({w}, {h}) outside [0, 1]")
    if not allow_degenerate and (w == 0.0 or h == 0.0):
        raise LabelParseError(f"degenerate box with zero width or height: {line!r}")
    return BoxAnnotation(class_id, x, y, w, h)


def _entries(directory: Path) -> list[Path]:
    try:
        return sorted(directory.iterdir())
    except OSError as exc:
        raise IngestError(f"cannot read directory {directory}: {exc}") from exc


def _list_stems(directory: Path, extensions: tuple[str, ...],
                warnings: list[str]) -> dict[str, str]:
    """Map stem -> file name for matching files, dedup by smallest name."""
    chosen: dict[str, str] = {}
    ext_set = {e.lower() for e in extensions}
    for entry in _entries(directory):
        if not entry.is_file() or entry.suffix.lower() not in ext_set:
            continue
        stem, name = entry.stem, entry.name
        if stem in chosen:
            warnings.append(
                f"duplicate image stem {stem!r}: keeping {chosen[stem]!r}, ignoring {name!r}")
        else:
            chosen[stem] = name
    return chosen


def _read_boxes(label_path: Path, options: IngestOptions,
                warnings: list[str]) -> list[BoxAnnotation]:
    boxes: list[BoxAnnotation] = []
    text = label_path.read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            box = parse_label_line(line, allow_degenerate=not options.strict_boxes)
        except LabelParseError as exc:
            if options.on_parse_error == "abort":
                raise LabelParseError(str(exc), label_path.name, line_no) from None
            warnings.append(f"{label_path.name}:{line_no}: skipped line ({exc})")
            continue
        if not options.strict_boxes and (box.width == 0.0 or box.height == 0.0):
            warnings.append(
                f"{label_path.name}:{line_no}: degenerate box kept (zero width or height)")
        boxes.append(box)
    return boxes


def scan_dataset(image_dir: Path | str, label_dir: Path | str,
                 options: IngestOptions | None = None) -> RawRecordSet:
    """Scan an image directory and a label directory into a RawRecordSet.

    One record per distinct image stem; the matching label file is
    ``<label_dir>/<stem>.txt``. Missing and empty label files both yield
    background records. Label files matching no image are reported in the
    warning list, not treated as errors.
    """
    options = options or IngestOptions()
    image_dir = Path(image_dir)
    label_dir = Path(label_dir)
    if not image_dir.is_dir():
        raise IngestError(f"image directory not found or not readable: {image_dir}")
    label_dir_ok = label_dir.is_dir()
    if not label_dir_ok and not options.allow_missing_label_dir:
        raise IngestError(f"label directory not found or not readable: {label_dir}")

    warnings: list[str] = []
    image_names = _list_stems(image_dir, options.image_extensions, warnings)
    if not image_names:
        raise IngestError(f"no image files with extensions {options.image_extensions} "
                          f"in {image_dir}")

    label_stems: set[str] = set()
    if label_dir_ok:
        label_stems = {p.stem for p in _entries(label_dir)
                       if p.is_file() and p.suffix.lower() == ".txt"}
        for orphan in sorted(label_stems - image_names.keys()):
            warnings.append(f"label file {orphan}.txt matches no image")

    records = []
    universe: set[int] = set()
    for stem in sorted(image_names):
        boxes: list[BoxAnnotation] = []
        if stem in label_stems:
            boxes = _read_boxes(label_dir / f"{stem}.txt", options, warnings)
        universe.update(b.class_id for b in boxes)
        records.append(ImageRecord(image_names[stem], tuple(boxes)))
    records.sort(key=lambda r: r.file_name)

    return RawRecordSet(tuple(records), tuple(sorted(universe)),
                        (image_dir, label_dir), tuple(warnings))
