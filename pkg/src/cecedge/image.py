"""Image containers, color encodings and PNM (P2/P3/P5/P6) codecs.

Samples are normalized to float64 in [0, 1] at load time so nothing
downstream deals with integer pixels. Gray images are plain 2-D arrays
indexed ``[row, col]``; quaternion images are ``(H, W, 4)`` arrays holding
``(w, x, y, z)`` per pixel.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import InvalidArgumentError, ParseError

__all__ = [
    "RasterImage",
    "decode_pnm",
    "encode_pgm",
    "encode_ppm",
    "read_image",
    "to_quaternion_image",
    "to_grayscale",
    "LUMA_WEIGHTS",
]

LUMA_WEIGHTS = (0.299, 0.587, 0.114)
_MAGICS = {b"P2": (1, False), b"P3": (3, False), b"P5": (1, True), b"P6": (3, True)}
_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Row-major image with 1 or 3 channels, samples in [0, 1]."""

    data: np.ndarray  # (height, width, channels)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise InvalidArgumentError(f"expected (H, W, 1|3) samples, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidArgumentError("image has a zero dimension")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def to_rgb(self) -> "RasterImage":
        """Replicate a single channel into three; 3-channel images are returned as is."""
        if self.channels == 3:
            return self
        return RasterImage(np.repeat(self.data, 3, axis=2))


class _HeaderReader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def skip_space_and_comments(self):
        buf = self.buf
        while self.pos < len(buf):
            c = buf[self.pos : self.pos + 1]
            if c in _WHITESPACE and c:
                self.pos += 1
            elif c == b"#":
                nl = buf.find(b"\n", self.pos)
                self.pos = len(buf) if nl < 0 else nl + 1
            else:
                break

    def integer(self, what: str) -> int:
        self.skip_space_and_comments()
        start = self.pos
        buf = self.buf
        while self.pos < len(buf) and 48 <= buf[self.pos] <= 57:
            self.pos += 1
        if self.pos == start:
            if start >= len(buf):
                raise ParseError(f"unexpected end of data reading {what}", offset=start)
            raise ParseError(f"expected decimal integer for {what}", offset=start)
        if self.pos < len(buf) and buf[self.pos : self.pos + 1] not in _WHITESPACE + b"#":
            raise ParseError(f"invalid character after {what}", offset=self.pos)
        if self.pos - start > 9:
            raise ParseError(f"{what} out of range", offset=start)
        return int(buf[start : self.pos])


def decode_pnm(data: bytes) -> RasterImage:
    """Decode a PGM/PPM byte string (ASCII or binary, maxval <= 255)."""
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise InvalidArgumentError("decode_pnm expects bytes")
    buf = bytes(data)
    magic = buf[:2]
    if magic not in _MAGICS:
        raise ParseError(f"unsupported magic number {magic!r}", offset=0)
    channels, binary = _MAGICS[magic]
    rd = _HeaderReader(buf)
    rd.pos = 2
    if rd.pos < len(buf) and buf[rd.pos : rd.pos + 1] not in _WHITESPACE + b"#":
        raise ParseError("missing whitespace after magic number", offset=rd.pos)
    width = rd.integer("width")
    height = rd.integer("height")
    if width == 0 or height == 0:
        raise ParseError("zero dimension", offset=rd.pos)
    maxval_at = rd.pos
    maxval = rd.integer("maxval")
    if maxval == 0 or maxval > 255:
        raise ParseError(f"maxval {maxval} outside 1..255", offset=maxval_at)
    count = width * height * channels

    if binary:
        if rd.pos >= len(buf) or buf[rd.pos : rd.pos + 1] not in _WHITESPACE:
            raise ParseError("expected single whitespace byte after maxval", offset=rd.pos)
        start = rd.pos + 1
        if len(buf) - start < count:
            raise ParseError(
                f"truncated body: need {count} samples, have {len(buf) - start}", offset=len(buf)
            )
        samples = np.frombuffer(buf, dtype=np.uint8, count=count, offset=start)
        bad = np.flatnonzero(samples > maxval)
        if bad.size:
            raise ParseError(f"sample exceeds maxval {maxval}", offset=start + int(bad[0]))
    else:
        # every ASCII sample takes at least one byte plus a separator
        if count > (len(buf) - rd.pos + 1) // 2 + 1:
            raise ParseError(f"truncated body: need {count} samples", offset=len(buf))
        samples = np.empty(count, dtype=np.int64)
        for n in range(count):
            at = rd.pos
            try:
                v = rd.integer("sample")
            except ParseError as exc:
                if exc.reason.startswith("unexpected end"):
                    raise ParseError(f"truncated body: need {count} samples, have {n}", offset=exc.offset) from None
                raise
            if v > maxval:
                raise ParseError(f"sample {v} exceeds maxval {maxval}", offset=at)
            samples[n] = v
    pixels = samples.reshape(height, width, channels).astype(np.float64) / maxval
    return RasterImage(pixels)


def read_image(path) -> RasterImage:
    return decode_pnm(Path(path).read_bytes())


def _header(magic: bytes, width: int, height: int) -> bytes:
    return magic + b"\n%d %d\n255\n" % (width, height)


def encode_pgm(img, scale: Literal["linear", "binary"] = "linear") -> bytes:
    """Encode a gray image or edge mask as binary PGM (P5, maxval 255).

    ``linear`` maps ``[min, max]`` onto ``0..255`` (round half up); a
    constant image encodes as all zeros. ``binary`` writes 255 for every
    truthy sample and 0 elsewhere. EdgeMap-like objects are accepted via
    their ``mask`` attribute.
    """
    if hasattr(img, "mask"):
        img = img.mask
    a = np.asarray(img)
    if a.ndim != 2:
        raise InvalidArgumentError(f"encode_pgm expects a 2-D image, got shape {a.shape}")
    if scale == "binary":
        out = np.where(a.astype(bool), 255, 0).astype(np.uint8)
    elif scale == "linear":
        a = a.astype(np.float64)
        if not np.all(np.isfinite(a)):
            raise InvalidArgumentError("encode_pgm: non-finite samples")
        lo, hi = float(a.min()), float(a.max())
        if hi == lo:
            out = np.zeros(a.shape, dtype=np.uint8)
        else:
            out = np.floor(255.0 * (a - lo) / (hi - lo) + 0.5).astype(np.uint8)
    else:
        raise InvalidArgumentError(f"unknown scale {scale!r}")
    return _header(b"P5", a.shape[1], a.shape[0]) + out.tobytes()


def encode_ppm(img: RasterImage | np.ndarray) -> bytes:
    """Binary PPM (P6) with samples quantized as ``round(255 * v)``, clipped to [0, 1]."""
    a = img.data if isinstance(img, RasterImage) else np.asarray(img, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise InvalidArgumentError(f"encode_ppm expects (H, W, 3), got shape {a.shape}")
    q = np.floor(np.clip(a, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    return _header(b"P6", a.shape[1], a.shape[0]) + q.tobytes()


def to_quaternion_image(img: RasterImage) -> np.ndarray:
    """Encode RGB pixels as pure quaternions ``r*i + g*j + b*k``."""
    if img.channels != 3:
        raise InvalidArgumentError("quaternion encoding needs a 3-channel image")
    out = np.zeros((img.height, img.width, 4), dtype=np.float64)
    out[..., 1:] = img.data
    return out


def to_grayscale(img: RasterImage) -> np.ndarray:
    """ITU-R 601 luma for RGB input; single-channel input passes through."""
    if img.channels == 1:
        return img.data[:, :, 0].copy()
    r, g, b = img.data[..., 0], img.data[..., 1], img.data[..., 2]
    wr, wg, wb = LUMA_WEIGHTS
    return wr * r + wg * g + wb * b
