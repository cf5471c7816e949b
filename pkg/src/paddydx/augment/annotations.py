"""Annotation and manifest file I/O.

Annotation files: one UTF-8 text file per image, one box per line as
``class_index cx cy w h`` (normalized, space-separated, 6-decimal fixed
point). Dataset manifests: CSV with columns ``id,path,class_slug,split``
(``class_slug`` and ``split`` may be empty).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from paddydx.core.geometry import NormalizedBox
from paddydx.errors import InvalidInput

AnnBoxes = tuple[tuple[int, NormalizedBox], ...]


def format_boxes(boxes) -> str:
    lines = [
        f"{cls} {box.cx:.6f} {box.cy:.6f} {box.w:.6f} {box.h:.6f}" for cls, box in boxes
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_boxes(text: str, source: str = "<string>") -> AnnBoxes:
    boxes = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 5:
            raise InvalidInput(
                f"{source}:{lineno}: expected 'class cx cy w h', got {len(parts)} fields"
            )
        try:
            cls = int(parts[0])
            cx, cy, w, h = (float(p) for p in parts[1:])
        except ValueError as exc:
            raise InvalidInput(f"{source}:{lineno}: {exc}") from None
        try:
            boxes.append((cls, NormalizedBox(cx=cx, cy=cy, w=w, h=h)))
        except InvalidInput as exc:
            raise InvalidInput(f"{source}:{lineno}: {exc}") from None
    return tuple(boxes)


def read_annotation_file(path: str | Path) -> AnnBoxes:
    path = Path(path)
    return parse_boxes(path.read_text("utf-8"), source=str(path))


def write_annotation_file(path: str | Path, boxes) -> None:
    Path(path).write_text(format_boxes(boxes), "utf-8")


@dataclass(frozen=True)
class ManifestRow:
    id: str
    path: str
    class_slug: str = ""
    split: str = ""


MANIFEST_COLUMNS = ("id", "path", "class_slug", "split")


def read_manifest(path: str | Path) -> list[ManifestRow]:
    rows = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(("id", "path")) - set(reader.fieldnames or ())
        if missing:
            raise InvalidInput(f"{path}: manifest missing columns {sorted(missing)}")
        for i, rec in enumerate(reader, start=2):
            row = ManifestRow(
                id=rec["id"],
                path=rec["path"],
                class_slug=rec.get("class_slug") or "",
                split=rec.get("split") or "",
            )
            if row.split not in ("", "train", "test"):
                raise InvalidInput(f"{path}:{i}: bad split value {row.split!r}")
            if row.id in seen:
                raise InvalidInput(f"{path}:{i}: duplicate id {row.id!r}")
            seen.add(row.id)
            rows.append(row)
    return rows


def write_manifest(path: str | Path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for row in rows:
            writer.writerow([row.id, row.path, row.class_slug, row.split])
