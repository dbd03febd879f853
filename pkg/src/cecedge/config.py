"""Flat ``key = value`` configuration files and resolved detector settings."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .baselines import DEFAULT_SOBEL_THRESHOLD
from .canny import HysteresisParams
from .ensemble import PipelineConfig
from .errors import InvalidArgumentError, ParseError

__all__ = ["Settings", "parse_config", "load_config"]

_STAGE_ALIASES = {"cec": "cec_only", "pca": "pca_only", "fused": "fused",
                  "cec_only": "cec_only", "pca_only": "pca_only"}

DEFAULT_CASCADE_SIGMA = 0.0
DEFAULT_CANNY_SIGMA = 1.0


@dataclass(frozen=True)
class Settings:
    high_frac: float = 0.15
    low_frac: float = 0.05
    # None: detector default (0 for the cascade, 1 for classical Canny)
    sigma: Optional[float] = None
    fusion_rule: str = "max"
    pca_k: int = 1
    stage_select: str = "fused"
    tolerance_r: int = 0
    sobel_threshold_frac: float = DEFAULT_SOBEL_THRESHOLD

    def validate(self) -> "Settings":
        self.hysteresis("cec")
        self.pipeline()
        t = self.sobel_threshold_frac
        if not (math.isfinite(t) and 0.0 < t <= 1.0):
            raise InvalidArgumentError(f"sobel_threshold_frac must be in (0, 1], got {t}")
        if self.tolerance_r < 0:
            raise InvalidArgumentError(f"tolerance_r must be >= 0, got {self.tolerance_r}")
        return self

    def hysteresis(self, detector: str) -> HysteresisParams:
        sigma = self.sigma
        if sigma is None:
            sigma = DEFAULT_CANNY_SIGMA if detector == "canny" else DEFAULT_CASCADE_SIGMA
        return HysteresisParams(high_frac=self.high_frac, low_frac=self.low_frac, sigma=sigma)

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            hysteresis=self.hysteresis("cec"),
            fusion_rule=self.fusion_rule,
            pca_k=self.pca_k,
            stage_select=self.stage_select,
        )

    def merged(self, **overrides) -> "Settings":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _convert(key: str, raw: str):
    try:
        if key in ("high_frac", "low_frac", "sigma", "sobel_threshold_frac"):
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError
            return v
        if key in ("pca_k", "tolerance_r"):
            return int(raw)
    except ValueError:
        raise InvalidArgumentError(f"invalid value for {key}: {raw!r}") from None
    if key == "stage_select":
        if raw not in _STAGE_ALIASES:
            raise InvalidArgumentError(f"invalid value for stage_select: {raw!r}")
        return _STAGE_ALIASES[raw]
    return raw


def parse_config(text: str) -> dict:
    known = {f.name for f in fields(Settings)}
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError("expected 'key = value'", line=n)
        if key not in known:
            raise InvalidArgumentError(f"unknown config key {key!r} at line {n}")
        out[key] = _convert(key, value)
    return out


def load_config(path) -> dict:
    return parse_config(Path(path).read_text())


def stage_alias(value: str) -> str:
    return _STAGE_ALIASES[value]
