"""Seeded synthetic test images: colored disks whose boundaries differ in hue
but not in luma, so intensity-only detectors see nothing but noise."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bsds import LabelGrid, boundary_mask
from .image import LUMA_WEIGHTS, RasterImage

__all__ = ["SyntheticCase", "equal_luma_color", "chromatic_blobs", "chromatic_suite"]

_LUMA = np.array(LUMA_WEIGHTS)


@dataclass(frozen=True, eq=False)
class SyntheticCase:
    image: RasterImage
    labels: LabelGrid
    ground_truth: np.ndarray  # bool boundary mask


def equal_luma_color(rng: np.random.Generator, luma: float, margin: float = 0.05) -> np.ndarray:
    """Random RGB color with the given ITU-R 601 luma, every channel inside [margin, 1 - margin]."""
    while True:
        c = rng.uniform(0.0, 1.0, 3)
        # the luma weights sum to one, so a gray shift moves luma one-for-one
        c = c + (luma - float(_LUMA @ c))
        if np.all(c >= margin) and np.all(c <= 1.0 - margin):
            return c


def chromatic_blobs(
    seed: int,
    size: int = 64,
    n_blobs: int = 4,
    noise: float = 0.02,
    luma: float = 0.5,
    min_color_gap: float = 0.25,
) -> SyntheticCase:
    rng = np.random.default_rng(seed)
    colors = [equal_luma_color(rng, luma)]
    while len(colors) < n_blobs + 1:
        c = equal_luma_color(rng, luma)
        if min(np.linalg.norm(c - o) for o in colors) >= min_color_gap:
            colors.append(c)

    labels = np.zeros((size, size), dtype=np.int64)
    yy, xx = np.mgrid[0:size, 0:size]
    for k in range(1, n_blobs + 1):
        r = rng.uniform(0.12, 0.25) * size
        cy, cx = rng.uniform(r, size - r, 2)
        labels[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = k

    # relabel densely so segment_count matches the labels actually present
    present, dense = np.unique(labels, return_inverse=True)
    dense = dense.reshape(labels.shape)
    palette = np.array([colors[p] for p in present])
    pixels = palette[dense] + rng.normal(0.0, noise, (size, size, 3))
    grid = LabelGrid(labels=dense, segment_count=len(present))
    return SyntheticCase(
        image=RasterImage(np.clip(pixels, 0.0, 1.0)),
        labels=grid,
        ground_truth=boundary_mask(grid),
    )


def chromatic_suite(count: int = 20, seed: int = 0, **kw) -> list[SyntheticCase]:
    return [chromatic_blobs(seed * 100_003 + i, **kw) for i in range(count)]
