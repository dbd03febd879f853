"""Gradients, non-maximum suppression and double-threshold hysteresis.

All filters use replicate (clamp) borders and keep the input shape. Gray
images are 2-D arrays indexed ``[row, col]`` with rows growing downward.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "GradientField",
    "HysteresisParams",
    "EdgeMap",
    "NONE",
    "WEAK",
    "STRONG",
    "correlate3x3",
    "gaussian_kernel",
    "gaussian_smooth",
    "sobel_gradients",
    "gradient_direction",
    "non_max_suppress",
    "hysteresis",
]

NONE, WEAK, STRONG = 0, 1, 2

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = SOBEL_X.T.copy()


@dataclass(frozen=True, eq=False)
class GradientField:
    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    direction: np.ndarray


@dataclass(frozen=True)
class HysteresisParams:
    high_frac: float = 0.15
    low_frac: float = 0.05
    sigma: float = 0.0

    def __post_init__(self):
        for name in ("high_frac", "low_frac", "sigma"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidArgumentError(f"{name} must be a finite number, got {v!r}")
        if not 0.0 < self.low_frac < self.high_frac <= 1.0:
            raise InvalidArgumentError(
                f"need 0 < low_frac < high_frac <= 1, got low={self.low_frac}, high={self.high_frac}"
            )
        if self.sigma < 0:
            raise InvalidArgumentError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True, eq=False)
class EdgeMap:
    """Per-pixel labels (NONE / WEAK / STRONG) plus the final boundary mask."""

    labels: np.ndarray  # uint8
    mask: np.ndarray  # bool

    @classmethod
    def empty(cls, shape) -> "EdgeMap":
        return cls(labels=np.zeros(shape, dtype=np.uint8), mask=np.zeros(shape, dtype=bool))

    @classmethod
    def from_mask(cls, mask) -> "EdgeMap":
        mask = np.asarray(mask, dtype=bool)
        return cls(labels=np.where(mask, STRONG, NONE).astype(np.uint8), mask=mask)

    @property
    def shape(self):
        return self.mask.shape


def _as_gray(img) -> np.ndarray:
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidArgumentError(f"expected a 2-D gray image, got shape {a.shape}")
    return a


def _require_3x3(a: np.ndarray):
    if a.shape[0] < 3 or a.shape[1] < 3:
        raise InvalidArgumentError(f"image must be at least 3x3, got {a.shape[1]}x{a.shape[0]}")


def correlate3x3(img, kernel) -> np.ndarray:
    """``out[y, x] = sum kernel[r, c] * img[y + r - 1, x + c - 1]`` with clamped borders.

    Positive and negative weights are accumulated separately (row-major)
    and subtracted at the end, so zero-sum kernels give exact zeros on
    constant windows.
    """
    a = _as_gray(img)
    k = np.asarray(kernel, dtype=np.float64)
    h, w = a.shape
    p = np.pad(a, 1, mode="edge")
    pos = np.zeros_like(a)
    neg = np.zeros_like(a)
    for r in range(3):
        for c in range(3):
            wt = k[r, c]
            if wt > 0:
                pos += wt * p[r : r + h, c : c + w]
            elif wt < 0:
                neg += -wt * p[r : r + h, c : c + w]
    return pos - neg


def gaussian_kernel(sigma: float) -> np.ndarray:
    radius = int(math.ceil(3.0 * sigma))
    d = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(d * d) / (2.0 * sigma * sigma))
    return k / k.sum()


def _smooth_axis(a: np.ndarray, k: np.ndarray, axis: int) -> np.ndarray:
    radius = (len(k) - 1) // 2
    n = a.shape[axis]
    idx = np.arange(n)
    out = np.zeros_like(a)
    for i, wt in enumerate(k):
        src = np.clip(idx + i - radius, 0, n - 1)
        out += wt * np.take(a, src, axis=axis)
    return out


def gaussian_smooth(img, sigma: float) -> np.ndarray:
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be >= 0, got {sigma}")
    a = _as_gray(img)
    if sigma == 0:
        return a.copy()
    k = gaussian_kernel(sigma)
    return _smooth_axis(_smooth_axis(a, k, 1), k, 0)


def gradient_direction(gx, gy) -> np.ndarray:
    """Full-quadrant gradient angle ``atan2(gy, gx)``; 0 where both are zero.

    Accepts either two arrays or a :class:`GradientField` as ``gx``.
    """
    if isinstance(gx, GradientField):
        gx, gy = gx.gx, gx.gy
    gx = np.asarray(gx, dtype=np.float64)
    gy = np.asarray(gy, dtype=np.float64)
    d = np.arctan2(gy, gx)
    # atan2(+0, -x) is pi but atan2(-0, -x) is -pi; keep the range (-pi, pi]
    d = np.where(d == -np.pi, np.pi, d)
    return np.where((gx == 0) & (gy == 0), 0.0, d)


def sobel_gradients(img) -> GradientField:
    a = _as_gray(img)
    _require_3x3(a)
    gx = correlate3x3(a, SOBEL_X)
    gy = correlate3x3(a, SOBEL_Y)
    return GradientField(gx=gx, gy=gy, magnitude=np.hypot(gx, gy), direction=gradient_direction(gx, gy))


# neighbor offsets (drow, dcol) along the quantized gradient direction
_NMS_OFFSETS = {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (1, -1)}


def quantize_direction(direction) -> np.ndarray:
    """Map angles to sector 0..3 = 0, 45, 90, 135 degrees (mod 180)."""
    deg = np.degrees(np.asarray(direction, dtype=np.float64)) % 180.0
    return (np.floor(deg / 45.0 + 0.5).astype(np.int64)) % 4


def non_max_suppress(magnitude, direction) -> np.ndarray:
    """Zero every pixel that is smaller than either neighbor along its gradient.

    Ties keep the pixel. Because rows grow downward, a 45 degree gradient
    (gx > 0, gy > 0) points to the lower-right neighbor.
    """
    m = _as_gray(magnitude)
    d = np.asarray(direction, dtype=np.float64)
    if m.shape != d.shape:
        raise InvalidArgumentError(f"magnitude {m.shape} and direction {d.shape} differ in shape")
    h, w = m.shape
    sector = quantize_direction(d)
    rows, cols = np.indices((h, w))
    keep = np.zeros((h, w), dtype=bool)
    for s, (dr, dc) in _NMS_OFFSETS.items():
        fwd = m[np.clip(rows + dr, 0, h - 1), np.clip(cols + dc, 0, w - 1)]
        back = m[np.clip(rows - dr, 0, h - 1), np.clip(cols - dc, 0, w - 1)]
        keep |= (sector == s) & (m >= fwd) & (m >= back)
    return np.where(keep, m, 0.0)


def hysteresis(magnitude, params: HysteresisParams | None = None) -> EdgeMap:
    """Classify pixels as strong / weak / none relative to the maximum and
    keep weak pixels 8-connected to a strong one."""
    params = params or HysteresisParams()
    m = _as_gray(magnitude)
    mmax = float(m.max()) if m.size else 0.0
    if mmax <= 0.0:
        return EdgeMap.empty(m.shape)
    strong = m >= params.high_frac * mmax
    weak = (m >= params.low_frac * mmax) & ~strong
    labels = np.where(strong, STRONG, np.where(weak, WEAK, NONE)).astype(np.uint8)

    h, w = m.shape
    mask = strong.copy()
    stack = deque(zip(*np.nonzero(strong)))
    while stack:
        y, x = stack.pop()
        for dy in (-1, 0, 1):
            yy = y + dy
            if yy < 0 or yy >= h:
                continue
            for dx in (-1, 0, 1):
                xx = x + dx
                if 0 <= xx < w and weak[yy, xx] and not mask[yy, xx]:
                    mask[yy, xx] = True
                    stack.append((yy, xx))
    return EdgeMap(labels=labels, mask=mask)
