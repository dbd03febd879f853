"""Quaternion algebra used by the color filters.

Scalar values are immutable :class:`Quaternion` instances. Image-sized work
goes through :func:`qmul_array`, which applies the same Hamilton product to
arrays whose last axis holds ``(w, x, y, z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "Quaternion",
    "RotationOperator",
    "GRAY_AXIS",
    "qmul",
    "qconj",
    "qnorm",
    "qmul_array",
    "rotation_operator",
    "sandwich_rotate",
    "default_rotation",
]

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def pure(cls, x: float, y: float, z: float) -> "Quaternion":
        return cls(0.0, x, y, z)

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        w, x, y, z = (float(v) for v in a)
        return cls(w, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=np.float64)

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def is_pure(self) -> bool:
        return self.w == 0.0

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a*b`` (ij = k, jk = i, ki = j)."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def qconj(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def qnorm(q: Quaternion) -> float:
    return math.hypot(q.w, q.x, q.y, q.z)


def qmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting Hamilton product over arrays with a trailing axis of 4."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


@dataclass(frozen=True)
class RotationOperator:
    """Unit quaternion ``R = exp(axis * angle)``.

    Sandwiching a pure quaternion as ``R v R*`` rotates it by ``2 * angle``
    about ``axis``.
    """

    R: Quaternion
    axis: Quaternion
    angle: float

    @property
    def conj(self) -> Quaternion:
        return qconj(self.R)


def rotation_operator(axis: Quaternion, angle: float) -> RotationOperator:
    if axis.w != 0.0:
        raise InvalidArgumentError(f"rotation axis must be a pure quaternion, got scalar part {axis.w!r}")
    n = qnorm(axis)
    if abs(n - 1.0) > _UNIT_TOL:
        raise InvalidArgumentError(f"rotation axis must have unit norm, got {n!r}")
    c, s = math.cos(angle), math.sin(angle)
    R = Quaternion(c, axis.x * s, axis.y * s, axis.z * s)
    return RotationOperator(R=R, axis=axis, angle=float(angle))


# (i + j + k) / sqrt(3): the gray diagonal of RGB space.
GRAY_AXIS = Quaternion.pure(1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0))


def default_rotation() -> RotationOperator:
    """Gray-axis rotation with angle pi/2 used by the color masks."""
    return rotation_operator(GRAY_AXIS, math.pi / 2)


def sandwich_rotate(rot: RotationOperator, v: Quaternion) -> Quaternion:
    if v.w != 0.0:
        raise InvalidArgumentError(f"sandwich_rotate expects a pure quaternion, got scalar part {v.w!r}")
    out = qmul(qmul(rot.R, v), rot.conj)
    # R v R* is pure in exact arithmetic; drop the rounding residue.
    return Quaternion(0.0, out.x, out.y, out.z)
