"""Quaternion rotation masks and modulus maps for color edge strength.

Each 3x3 mask cell holds a left and right quaternion factor and a sign.
The horizontal-edge mask rotates the row above and the row below the
current pixel about the gray axis and takes their difference::

    qh(x, y) = 1/6 * (sum_d R f(x+d, y-1) R*  -  sum_d R f(x+d, y+1) R*)

The vertical-edge mask is its transpose (left column minus right column).
Rows are indexed downwards, so "above" means row ``y - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .image import RasterImage, to_quaternion_image
from .quaternion import RotationOperator, default_rotation, qmul_array

__all__ = [
    "MaskPair",
    "ResponsePair",
    "build_masks",
    "quaternion_convolve",
    "modulus_maps",
    "combined_modulus",
    "cec_magnitude",
]

_ZERO = np.zeros(4)


@dataclass(frozen=True, eq=False)
class MaskPair:
    """Horizontal-edge mask; :meth:`transposed` yields the vertical one."""

    left: np.ndarray  # (3, 3, 4)
    right: np.ndarray  # (3, 3, 4)
    sign: np.ndarray  # (3, 3) of +1 / -1 / 0
    normalizer: float = 1.0 / 6.0

    def transposed(self) -> "MaskPair":
        return MaskPair(
            left=self.left.transpose(1, 0, 2).copy(),
            right=self.right.transpose(1, 0, 2).copy(),
            sign=self.sign.T.copy(),
            normalizer=self.normalizer,
        )


@dataclass(frozen=True, eq=False)
class ResponsePair:
    qh: np.ndarray  # (H, W, 4)
    qv: np.ndarray  # (H, W, 4)


def build_masks(rot: RotationOperator | None = None) -> MaskPair:
    rot = rot or default_rotation()
    R = rot.R.as_array()
    Rc = rot.conj.as_array()
    sign = np.array([[1, 1, 1], [0, 0, 0], [-1, -1, -1]], dtype=np.int64)
    left = np.zeros((3, 3, 4))
    right = np.zeros((3, 3, 4))
    left[sign != 0] = R
    right[sign != 0] = Rc
    return MaskPair(left=left, right=right, sign=sign)


def _quaternion_pixels(img) -> np.ndarray:
    if isinstance(img, RasterImage):
        return to_quaternion_image(img)
    q = np.asarray(img, dtype=np.float64)
    if q.ndim != 3 or q.shape[2] != 4:
        raise InvalidArgumentError(f"expected a quaternion image (H, W, 4), got shape {q.shape}")
    return q


def _apply_mask(padded: np.ndarray, mask: MaskPair, height: int, width: int) -> np.ndarray:
    # Positive and negative cells are summed separately in the same
    # row-major order so identical windows cancel to exactly zero.
    pos = np.zeros((height, width, 4))
    neg = np.zeros((height, width, 4))
    for r in range(3):
        for c in range(3):
            s = mask.sign[r, c]
            if s == 0:
                continue
            window = padded[r : r + height, c : c + width]
            term = qmul_array(qmul_array(mask.left[r, c], window), mask.right[r, c])
            if s > 0:
                pos += term
            else:
                neg += term
    return (pos - neg) * mask.normalizer


def quaternion_convolve(img, masks: MaskPair | None = None) -> ResponsePair:
    """Apply the horizontal and vertical quaternion masks with replicate borders.

    ``img`` is a 3-channel :class:`RasterImage` or an ``(H, W, 4)`` array of
    pure quaternions.
    """
    q = _quaternion_pixels(img)
    height, width = q.shape[:2]
    if height < 3 or width < 3:
        raise InvalidArgumentError(f"image must be at least 3x3, got {width}x{height}")
    masks = masks or build_masks()
    padded = np.pad(q, ((1, 1), (1, 1), (0, 0)), mode="edge")
    qh = _apply_mask(padded, masks, height, width)
    qv = _apply_mask(padded, masks.transposed(), height, width)
    return ResponsePair(qh=qh, qv=qv)


def modulus_maps(resp: ResponsePair) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel norm of the i, j, k parts of each directional response."""
    q1 = np.sqrt(np.sum(resp.qh[..., 1:] ** 2, axis=-1))
    q2 = np.sqrt(np.sum(resp.qv[..., 1:] ** 2, axis=-1))
    return q1, q2


def combined_modulus(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    q1 = np.asarray(q1, dtype=np.float64)
    q2 = np.asarray(q2, dtype=np.float64)
    if q1.shape != q2.shape:
        raise InvalidArgumentError(f"modulus maps differ in shape: {q1.shape} vs {q2.shape}")
    return np.sqrt(q1 * q1 + q2 * q2)


def cec_magnitude(img, rot: RotationOperator | None = None) -> np.ndarray:
    resp = quaternion_convolve(img, build_masks(rot))
    return combined_modulus(*modulus_maps(resp))
