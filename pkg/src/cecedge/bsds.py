"""Berkeley segmentation ground truth (.seg text files), boundary masks and
dataset manifests.

A .seg file is a block of ``key value`` header lines terminated by a line
reading ``data``, followed by runs ``label row col_start col_end`` (both
column bounds inclusive) that must tile the image exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError, ParseError
from .image import read_image

__all__ = ["LabelGrid", "parse_seg", "serialize_seg", "boundary_mask", "load_manifest", "load_mask"]

_REQUIRED = ("width", "height", "segments")


@dataclass(frozen=True, eq=False)
class LabelGrid:
    labels: np.ndarray  # (height, width) int64
    segment_count: int

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


def _int_field(tok: str, what: str, lineno: int) -> int:
    if not (tok.isascii() and tok.isdigit()) or len(tok) > 9:
        raise ParseError(f"invalid {what} {tok!r}", line=lineno)
    return int(tok)


def parse_seg(text: str) -> LabelGrid:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError("non-ASCII byte in .seg input", offset=exc.start) from None
    lines = text.splitlines()
    header: dict[str, str] = {}
    data_at = None
    for n, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "data":
            data_at = n
            break
        key, _, value = line.partition(" ")
        header[key] = value.strip()
    if data_at is None:
        raise ParseError("missing 'data' line", line=len(lines) + 1)
    fmt = header.get("format")
    if fmt is not None and not fmt.startswith("ascii"):
        raise ParseError(f"unsupported format {fmt!r} (only ascii)", line=1)
    for key in _REQUIRED:
        if key not in header:
            raise ParseError(f"missing header key '{key}'", line=data_at)
    width = _int_field(header["width"], "width", data_at)
    height = _int_field(header["height"], "height", data_at)
    segments = _int_field(header["segments"], "segments", data_at)
    if width == 0 or height == 0:
        raise ParseError("zero dimension", line=data_at)
    if segments == 0:
        raise ParseError("segments must be positive", line=data_at)
    if width * height > 1 << 28:
        raise ParseError(f"image too large ({width}x{height})", line=data_at)

    labels = np.full((height, width), -1, dtype=np.int64)
    for n in range(data_at + 1, len(lines) + 1):
        line = lines[n - 1].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(f"expected 4 fields in run, got {len(parts)}", line=n)
        s, r, c1, c2 = (_int_field(p, "run field", n) for p in parts)
        if s >= segments:
            raise ParseError(f"label {s} >= segments {segments}", line=n)
        if r >= height:
            raise ParseError(f"row {r} out of range", line=n)
        if c1 > c2 or c2 >= width:
            raise ParseError(f"columns {c1}..{c2} out of range", line=n)
        run = labels[r, c1 : c2 + 1]
        if np.any(run >= 0):
            raise ParseError("overlap", line=n)
        run[:] = s
    if np.any(labels < 0):
        y, x = np.argwhere(labels < 0)[0]
        raise ParseError(f"uncovered pixel (row {y}, col {x})", line=len(lines) + 1)
    labels.setflags(write=False)
    return LabelGrid(labels=labels, segment_count=segments)


def serialize_seg(grid: LabelGrid) -> str:
    """Write ``grid`` back out as a minimal ASCII .seg document."""
    out = [
        "format ascii cr",
        f"width {grid.width}",
        f"height {grid.height}",
        f"segments {grid.segment_count}",
        "data",
    ]
    for r, row in enumerate(grid.labels):
        start = 0
        for c in range(1, len(row) + 1):
            if c == len(row) or row[c] != row[start]:
                out.append(f"{row[start]} {r} {start} {c - 1}")
                start = c
    return "\n".join(out) + "\n"


def boundary_mask(grid: LabelGrid | np.ndarray) -> np.ndarray:
    """Mark pixels with at least one in-bounds 4-neighbor of a different label.

    Both sides of every label change are marked.
    """
    lab = grid.labels if isinstance(grid, LabelGrid) else np.asarray(grid)
    mask = np.zeros(lab.shape, dtype=bool)
    dv = lab[1:, :] != lab[:-1, :]
    dh = lab[:, 1:] != lab[:, :-1]
    mask[1:, :] |= dv
    mask[:-1, :] |= dv
    mask[:, 1:] |= dh
    mask[:, :-1] |= dh
    return mask


def load_manifest(path, allow_single: bool = False) -> list[tuple[Path, Path | None]]:
    """Read tab-separated ``image<TAB>ground_truth`` pairs.

    Blank lines and lines starting with '#' are skipped; relative paths are
    resolved against the manifest's directory. With ``allow_single`` a line
    may list only an image, and its second element is ``None``.
    """
    path = Path(path)
    base = path.parent
    pairs = []
    for n, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) == 1 and allow_single:
            fields.append("")
        if len(fields) != 2 or not fields[0].strip() or not (allow_single or fields[1].strip()):
            raise ParseError(f"expected 2 fields, got {len(fields)}", line=n)
        first, second = (f.strip() for f in fields)
        pairs.append((base / first, base / second if second else None))
    return pairs


def load_mask(path) -> np.ndarray:
    """Boolean mask from a .seg file (via its boundary) or any PNM (nonzero = edge)."""
    path = Path(path)
    if path.suffix.lower() == ".seg":
        return boundary_mask(parse_seg(path.read_bytes()))
    img = read_image(path)
    if img.channels not in (1, 3):
        raise InvalidArgumentError("unsupported mask image")
    return np.any(img.data > 0, axis=2)
