"""Grayscale reference detectors: thresholded Sobel and classical Canny."""
from __future__ import annotations

import math

import numpy as np

from .canny import EdgeMap, HysteresisParams, gaussian_smooth, hysteresis, non_max_suppress, sobel_gradients
from .errors import InvalidArgumentError
from .image import RasterImage, to_grayscale

__all__ = ["DEFAULT_SOBEL_THRESHOLD", "DEFAULT_CANNY", "sobel_edges", "classic_canny"]

DEFAULT_SOBEL_THRESHOLD = 0.5
DEFAULT_CANNY = HysteresisParams(high_frac=0.15, low_frac=0.05, sigma=1.0)


def _gray(img) -> np.ndarray:
    if isinstance(img, RasterImage):
        return to_grayscale(img)
    a = np.asarray(img, dtype=np.float64)
    if a.ndim == 3:
        return to_grayscale(RasterImage(a))
    return a


def sobel_edges(img, threshold_frac: float = DEFAULT_SOBEL_THRESHOLD) -> EdgeMap:
    """Mark every pixel whose Sobel magnitude reaches ``threshold_frac`` of the maximum."""
    if not isinstance(threshold_frac, (int, float)) or not math.isfinite(threshold_frac) or not 0.0 < threshold_frac <= 1.0:
        raise InvalidArgumentError(f"threshold_frac must be in (0, 1], got {threshold_frac!r}")
    m = sobel_gradients(_gray(img)).magnitude
    top = float(m.max())
    if top <= 0.0:
        return EdgeMap.empty(m.shape)
    return EdgeMap.from_mask(m >= threshold_frac * top)


def classic_canny(img, params: HysteresisParams = DEFAULT_CANNY) -> EdgeMap:
    grad = sobel_gradients(gaussian_smooth(_gray(img), params.sigma))
    return hysteresis(non_max_suppress(grad.magnitude, grad.direction), params)
