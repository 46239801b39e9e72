"""Dataset index: the CSV table tying image ids to files and ground truth."""

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidInputError

INDEX_HEADER = ["imageId", "imagePath", "maskPath", "pristineFlag"]


@dataclass
class IndexRow:
    image_id: str
    image_path: str
    mask_path: str | None
    pristine: bool


def read_index(path):
    """Read a dataset index CSV; ids must be unique and pristine rows maskless."""
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"index file not found: {path}")
    rows = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != INDEX_HEADER:
            raise InvalidInputError(
                f"index header must be {','.join(INDEX_HEADER)}, got {reader.fieldnames}"
            )
        for record in reader:
            image_id = record["imageId"].strip()
            if not image_id:
                raise InvalidInputError("index contains an empty imageId")
            if image_id in seen:
                raise InvalidInputError(f"duplicate imageId {image_id!r}")
            seen.add(image_id)
            pristine = record["pristineFlag"].strip().lower() in ("true", "1", "yes")
            mask_path = record["maskPath"].strip() or None
            if pristine and mask_path:
                raise InvalidInputError(f"{image_id}: pristine rows must not carry a mask")
            rows.append(
                IndexRow(
                    image_id=image_id,
                    image_path=record["imagePath"].strip(),
                    mask_path=mask_path,
                    pristine=pristine,
                )
            )
    if not rows:
        raise InvalidInputError(f"index {path} holds no rows")
    return rows


def write_index(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(INDEX_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.image_id,
                    row.image_path,
                    row.mask_path or "",
                    "true" if row.pristine else "false",
                ]
            )
