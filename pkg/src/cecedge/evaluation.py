"""Pixel-level confusion counts, derived metrics and manifest reports."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import CecError, InvalidArgumentError

__all__ = [
    "ConfusionCounts",
    "Metrics",
    "ReportRow",
    "REPORT_FIELDS",
    "REFERENCE_ROWS",
    "dilate",
    "confusion",
    "metrics",
    "evaluate_pair",
    "evaluate_manifest",
    "format_csv",
    "format_jsonl",
]

REPORT_FIELDS = ("name", "tp", "tn", "fp", "fn", "accuracy", "specificity", "precision", "recall", "f1")

# Published accuracy / specificity (%) for the CEC method and comparators.
# Never recomputed; only echoed by ``cec-edge eval --reference``.
REFERENCE_ROWS = (
    ("Sobel", 87.8, 95.8),
    ("ERRNet", 86.8, 97.8),
    ("SASM", 94.0, 94.0),
    ("PiDiNet", 78.0, 86.0),
    ("LCD", 88.0, 93.0),
    ("CEC", 99.0, 98.0),
)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.tp + other.tp, self.tn + other.tn, self.fp + other.fp, self.fn + other.fn)


@dataclass(frozen=True)
class Metrics:
    """Ratios in [0, 1]; ``None`` marks a zero denominator."""

    accuracy: Optional[float]
    specificity: Optional[float]
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]


def _ratio(num: int, den: int) -> Optional[float]:
    return None if den == 0 else num / den


def metrics(c: ConfusionCounts) -> Metrics:
    return Metrics(
        accuracy=_ratio(c.tp + c.tn, c.total),
        specificity=_ratio(c.tn, c.tn + c.fp),
        precision=_ratio(c.tp, c.tp + c.fp),
        recall=_ratio(c.tp, c.tp + c.fn),
        f1=_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn),
    )


def dilate(mask, r: int) -> np.ndarray:
    """Binary dilation by a (2r+1)x(2r+1) square (Chebyshev radius r)."""
    m = np.asarray(mask, dtype=bool)
    if r == 0:
        return m.copy()
    h, w = m.shape
    p = np.pad(m, r, mode="constant", constant_values=False)
    out = np.zeros_like(m)
    for dy in range(2 * r + 1):
        for dx in range(2 * r + 1):
            out |= p[dy : dy + h, dx : dx + w]
    return out


def confusion(pred, gt, tolerance_r: int = 0) -> ConfusionCounts:
    pred = np.asarray(getattr(pred, "mask", pred), dtype=bool)
    gt = np.asarray(getattr(gt, "mask", gt), dtype=bool)
    if pred.shape != gt.shape:
        raise InvalidArgumentError(f"size mismatch: prediction {pred.shape} vs ground truth {gt.shape}")
    if not isinstance(tolerance_r, (int, np.integer)) or tolerance_r < 0:
        raise InvalidArgumentError(f"tolerance must be a non-negative integer, got {tolerance_r!r}")
    if tolerance_r == 0:
        tp = int(np.count_nonzero(pred & gt))
        fp = int(np.count_nonzero(pred & ~gt))
        fn = int(np.count_nonzero(~pred & gt))
    else:
        positive = dilate(gt, tolerance_r)
        tp = int(np.count_nonzero(pred & positive))
        fp = int(np.count_nonzero(pred & ~positive))
        fn = int(np.count_nonzero(gt & ~dilate(pred, tolerance_r)))
    return ConfusionCounts(tp=tp, tn=pred.size - tp - fp - fn, fp=fp, fn=fn)


@dataclass(frozen=True)
class ReportRow:
    name: str
    counts: Optional[ConfusionCounts]
    metrics: Optional[Metrics]
    error: Optional[str] = None

    def as_dict(self) -> dict:
        d = {"name": self.name}
        c = self.counts
        m = self.metrics
        for key in ("tp", "tn", "fp", "fn"):
            d[key] = getattr(c, key) if c is not None else None
        for key in ("accuracy", "specificity", "precision", "recall", "f1"):
            d[key] = getattr(m, key) if m is not None else None
        return d


def evaluate_pair(pred, gt, tolerance_r: int = 0, name: str = "") -> ReportRow:
    c = confusion(pred, gt, tolerance_r)
    return ReportRow(name=name, counts=c, metrics=metrics(c))


MaskLoader = Callable[[Path], np.ndarray]


def evaluate_manifest(
    manifest: Sequence[tuple],
    tolerance_r: int = 0,
    load_pred: MaskLoader | None = None,
    load_gt: MaskLoader | None = None,
    jobs: int = 1,
) -> tuple[list[ReportRow], ReportRow]:
    """Evaluate (prediction, ground truth) pairs.

    Failing pairs become rows carrying ``error`` and are left out of the
    micro-averaged aggregate (counts summed, then divided). Row order
    follows the manifest regardless of ``jobs``.
    """
    from .bsds import load_mask

    load_pred = load_pred or load_mask
    load_gt = load_gt or load_mask

    def one(pair) -> ReportRow:
        pred_path, gt_path = pair[0], pair[1]
        name = Path(pred_path).name
        try:
            return evaluate_pair(load_pred(Path(pred_path)), load_gt(Path(gt_path)), tolerance_r, name)
        except (OSError, CecError) as exc:
            return ReportRow(name=name, counts=None, metrics=None, error=str(exc))

    if jobs > 1 and len(manifest) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, manifest))
    else:
        rows = [one(pair) for pair in manifest]

    total = ConfusionCounts()
    for row in rows:
        if row.counts is not None:
            total = total + row.counts
    ok = any(row.counts is not None for row in rows)
    aggregate = ReportRow(name="aggregate", counts=total if ok else None, metrics=metrics(total) if ok else None)
    return rows, aggregate


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for row in rows:
        d = row.as_dict()
        writer.writerow([_cell(d[k]) for k in REPORT_FIELDS])
    return buf.getvalue()


def format_jsonl(rows: Iterable[ReportRow]) -> str:
    lines = []
    for row in rows:
        d = row.as_dict()
        lines.append(json.dumps({k: d[k] for k in REPORT_FIELDS}))
    return "".join(line + "\n" for line in lines)


def reference_rows() -> list[ReportRow]:
    """Static comparison-table rows, labeled as quoted values."""
    out = []
    for name, acc, spec in REFERENCE_ROWS:
        m = Metrics(accuracy=acc / 100.0, specificity=spec / 100.0, precision=None, recall=None, f1=None)
        out.append(ReportRow(name=f"{name} (published reference)", counts=None, metrics=m))
    return out
