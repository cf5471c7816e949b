"""Detection evaluation: IoU, greedy matching, average precision, mAP50.

Matching rule: predictions are processed in descending confidence; a
prediction is a true positive iff a same-class, not-yet-matched ground
truth overlaps it with IoU >= threshold (ties broken by best IoU). Each
ground truth matches at most once.

Average precision is the area under the precision-recall curve built by
sweeping the confidence-ranked predictions, with precision made
monotonically non-increasing from the right (all-points interpolation).
The aggregate over classes is an unweighted (macro) mean restricted to
classes that appear in the ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from paddydx.core.geometry import NormalizedBox
from paddydx.core.taxonomy import NUM_DETECTION_CLASSES, detection_class
from paddydx.errors import InvalidInput
from paddydx.metrics.report import EvalReport, ReportRow

Corners = tuple[float, float, float, float]


def _corners(box) -> Corners:
    if isinstance(box, NormalizedBox):
        return box.corners()
    x0, y0, x1, y1 = box
    return float(x0), float(y0), float(x1), float(y1)


def iou(a, b) -> float:
    """Intersection over union of two axis-aligned boxes (corner or NormalizedBox)."""
    ax0, ay0, ax1, ay1 = _corners(a)
    bx0, by0, bx1, by1 = _corners(b)
    area_a = (ax1 - ax0) * (ay1 - ay0)
    area_b = (bx1 - bx0) * (by1 - by0)
    if area_a <= 0.0 or area_b <= 0.0:
        raise InvalidInput("iou requires boxes with positive area")
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    if iw <= 0.0 or ih <= 0.0:
        return 0.0
    inter = iw * ih
    return inter / (area_a + area_b - inter)


@dataclass(frozen=True)
class MatchResult:
    """Per-prediction TP flags (aligned with the input order) and leftover GTs."""

    flags: tuple[bool, ...]
    unmatched_gt: int


def match_detections(
    preds: Sequence[tuple[int, float, object]],
    gts: Sequence[tuple[int, object]],
    iou_threshold: float,
) -> MatchResult:
    """Greedy confidence-descending matching of predictions to ground truth.

    ``preds`` rows are (class, confidence, box); ``gts`` rows are
    (class, box). Boxes must share one coordinate frame.
    """
    if not 0.0 < iou_threshold < 1.0:
        raise InvalidInput(f"iou_threshold must lie in (0, 1), got {iou_threshold}")
    order = sorted(range(len(preds)), key=lambda i: -preds[i][1])
    gt_taken = [False] * len(gts)
    flags = [False] * len(preds)
    for i in order:
        cls, _, box = preds[i]
        best_j = -1
        best_iou = 0.0
        for j, (gt_cls, gt_box) in enumerate(gts):
            if gt_taken[j] or gt_cls != cls:
                continue
            overlap = iou(box, gt_box)
            if overlap >= iou_threshold and overlap > best_iou:
                best_iou = overlap
                best_j = j
        if best_j >= 0:
            gt_taken[best_j] = True
            flags[i] = True
    return MatchResult(flags=tuple(flags), unmatched_gt=gt_taken.count(False))


def average_precision(
    flags: Sequence[bool], confidences: Sequence[float], gt_count: int
) -> float:
    """Area under the all-points interpolated precision-recall curve."""
    if gt_count < 0:
        raise InvalidInput("gt_count must be >= 0")
    if len(flags) != len(confidences):
        raise InvalidInput("flags and confidences must have equal length")
    if gt_count == 0 or not flags:
        return 0.0
    order = np.argsort(-np.asarray(confidences, dtype=np.float64), kind="stable")
    tp = np.asarray(flags, dtype=np.float64)[order]
    cum_tp = np.cumsum(tp)
    ranks = np.arange(1, len(tp) + 1, dtype=np.float64)
    recall = cum_tp / gt_count
    precision = cum_tp / ranks
    # Right-to-left envelope: precision at each recall level becomes the max
    # precision achievable at that recall or beyond.
    envelope = np.maximum.accumulate(precision[::-1])[::-1]
    prev_recall = np.concatenate(([0.0], recall[:-1]))
    return float(np.sum((recall - prev_recall) * envelope))


def _default_labels(indices: Iterable[int]) -> dict[int, str]:
    labels = {}
    for i in indices:
        if 0 <= i < NUM_DETECTION_CLASSES:
            labels[i] = detection_class(i).slug
        else:
            labels[i] = f"class_{i}"
    return labels


def detection_report(
    preds_by_image: Sequence[Sequence[tuple[int, float, object]]],
    gts_by_image: Sequence[Sequence[tuple[int, object]]],
    iou_threshold: float = 0.5,
    class_labels: dict[int, str] | None = None,
    conf_cutoff: float | None = None,
) -> EvalReport:
    """Per-class AP plus operating-point box precision/recall over a dataset.

    AP always sweeps every prediction. Box precision/recall are computed at
    an operating point: by default all retained predictions, or, when
    ``conf_cutoff`` is given, only those at or above it (published detector
    tables usually report P/R at such a cutoff, which is how a class's AP
    can exceed its table recall). The choice is recorded in the metadata.
    Classes absent from the ground truth are excluded.
    """
    if len(preds_by_image) != len(gts_by_image):
        raise InvalidInput("preds_by_image and gts_by_image must align")
    gt_counts: dict[int, int] = {}
    for gts in gts_by_image:
        for cls, _ in gts:
            gt_counts[cls] = gt_counts.get(cls, 0) + 1
    if not gt_counts:
        raise InvalidInput("no ground truth boxes in any image")

    by_class: dict[int, list[tuple[float, bool]]] = {c: [] for c in gt_counts}
    for preds, gts in zip(preds_by_image, gts_by_image):
        result = match_detections(preds, gts, iou_threshold)
        for (cls, conf, _), flag in zip(preds, result.flags):
            if cls in by_class:
                by_class[cls].append((conf, flag))

    labels = class_labels or _default_labels(gt_counts)
    rows = []
    for cls in sorted(gt_counts):
        confs = [c for c, _ in by_class[cls]]
        flags = [f for _, f in by_class[cls]]
        operating = [
            (c, f) for c, f in by_class[cls] if conf_cutoff is None or c >= conf_cutoff
        ]
        tp = sum(f for _, f in operating)
        precision = tp / len(operating) if operating else 0.0
        recall = tp / gt_counts[cls]
        ap = average_precision(flags, confs, gt_counts[cls])
        rows.append(ReportRow(label=labels[cls], values=(precision, recall, ap)))

    return EvalReport(
        columns=("box_precision", "box_recall", "map50"),
        rows=tuple(rows),
        metadata={
            "iou_threshold": iou_threshold,
            "operating_point": (
                "all retained predictions (no confidence cutoff)"
                if conf_cutoff is None
                else f"predictions with confidence >= {conf_cutoff}"
            ),
            "images": len(gts_by_image),
        },
    )
