"""Detection post-processing: confidence filtering and class-wise NMS."""

from __future__ import annotations

from paddydx.errors import InvalidInput
from paddydx.inference.backends import DETECT, Detection, ImageInput, ModelBackend
from paddydx.metrics.detection import iou

DEFAULT_CONF_THRESHOLD = 0.25
DEFAULT_NMS_IOU = 0.45


def nms(dets: list[Detection], iou_threshold: float) -> list[Detection]:
    """Greedy non-maximum suppression, applied per class.

    Repeatedly keeps the highest-confidence remaining detection and
    suppresses same-class detections overlapping it with IoU >= threshold.
    Output order is descending confidence (stable for ties).
    """
    if not 0.0 < iou_threshold < 1.0:
        raise InvalidInput(f"iou_threshold must lie in (0, 1), got {iou_threshold}")
    order = sorted(range(len(dets)), key=lambda i: -dets[i].confidence)
    suppressed = [False] * len(dets)
    kept: list[Detection] = []
    for i in order:
        if suppressed[i]:
            continue
        kept.append(dets[i])
        for j in order:
            if suppressed[j] or j == i:
                continue
            if dets[j].class_index != dets[i].class_index:
                continue
            if iou(dets[j].box, dets[i].box) >= iou_threshold:
                suppressed[j] = True
    return kept


def detect(
    backend: ModelBackend,
    image: ImageInput,
    conf_threshold: float = DEFAULT_CONF_THRESHOLD,
    nms_iou: float = DEFAULT_NMS_IOU,
) -> list[Detection]:
    """Run a detection backend and post-process its raw boxes."""
    if not 0.0 < conf_threshold < 1.0:
        raise InvalidInput(f"conf_threshold must lie in (0, 1), got {conf_threshold}")
    backend.require(DETECT)
    raw = backend.detect(image)
    filtered = [d for d in raw if d.confidence >= conf_threshold]
    return [d.with_status("kept") for d in nms(filtered, nms_iou)]
