"""The cascaded ensemble detector.

Two operators run on the same color image: the quaternion-rotation masks
(color modulus) and a Sobel gradient on the first principal color
component. Their magnitude maps are normalized, fused pixelwise, thinned
with non-maximum suppression along the PCA-stage gradient direction and
classified by hysteresis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .canny import EdgeMap, HysteresisParams, gaussian_smooth, hysteresis, non_max_suppress, sobel_gradients
from .cec import cec_magnitude
from .errors import InvalidArgumentError
from .image import RasterImage
from .pca import enhanced_channel, fit_pca
from .quaternion import RotationOperator

__all__ = ["PipelineConfig", "PipelineResult", "normalize_map", "fuse", "run_pipeline"]

FusionRule = Literal["max", "mean"]
StageSelect = Literal["cec_only", "pca_only", "fused"]


@dataclass(frozen=True)
class PipelineConfig:
    hysteresis: HysteresisParams = field(default_factory=HysteresisParams)
    fusion_rule: FusionRule = "max"
    pca_k: int = 1
    stage_select: StageSelect = "fused"

    def __post_init__(self):
        if self.fusion_rule not in ("max", "mean"):
            raise InvalidArgumentError(f"fusion_rule must be 'max' or 'mean', got {self.fusion_rule!r}")
        if self.stage_select not in ("cec_only", "pca_only", "fused"):
            raise InvalidArgumentError(f"unknown stage_select {self.stage_select!r}")
        if not isinstance(self.pca_k, int) or not 1 <= self.pca_k <= 3:
            raise InvalidArgumentError(f"pca_k must be 1, 2 or 3, got {self.pca_k!r}")


@dataclass(frozen=True, eq=False)
class PipelineResult:
    edges: EdgeMap
    cec: np.ndarray  # raw CEC modulus
    pca: np.ndarray  # raw PCA-channel gradient magnitude
    fused: np.ndarray  # normalized, fused (or selected) map
    nms: np.ndarray  # fused map after non-maximum suppression
    direction: np.ndarray

    @property
    def intermediates(self) -> dict[str, np.ndarray]:
        return {"cec": self.cec, "pca": self.pca, "fused": self.fused, "nms": self.nms}


def normalize_map(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    top = float(m.max()) if m.size else 0.0
    if top == 0.0:
        return m.copy()
    return m / top


def fuse(a, b, rule: FusionRule = "max") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"cannot fuse maps of shape {a.shape} and {b.shape}")
    if rule == "max":
        return np.maximum(a, b)
    if rule == "mean":
        return (a + b) / 2.0
    raise InvalidArgumentError(f"unknown fusion rule {rule!r}")


def run_pipeline(
    img: RasterImage,
    cfg: PipelineConfig | None = None,
    rot: RotationOperator | None = None,
) -> PipelineResult:
    cfg = cfg or PipelineConfig()
    if not isinstance(img, RasterImage):
        img = RasterImage(img)
    if img.channels != 3:
        raise InvalidArgumentError("run_pipeline needs a 3-channel image")
    if img.width < 3 or img.height < 3:
        raise InvalidArgumentError(f"image must be at least 3x3, got {img.width}x{img.height}")

    m_cec = cec_magnitude(img, rot)

    model = fit_pca(img)
    channel = gaussian_smooth(enhanced_channel(img, model, cfg.pca_k), cfg.hysteresis.sigma)
    grad = sobel_gradients(channel)
    m_pca = grad.magnitude

    if cfg.stage_select == "cec_only":
        fused = normalize_map(m_cec)
    elif cfg.stage_select == "pca_only":
        fused = normalize_map(m_pca)
    else:
        fused = fuse(normalize_map(m_cec), normalize_map(m_pca), cfg.fusion_rule)

    thin = non_max_suppress(fused, grad.direction)
    edges = hysteresis(thin, cfg.hysteresis)
    return PipelineResult(edges=edges, cec=m_cec, pca=m_pca, fused=fused, nms=thin, direction=grad.direction)
