from paddydx.metrics.classification import (
    binary_counts,
    classification_report,
    confusion,
    cross_entropy,
    precision_recall_f1,
)
from paddydx.metrics.detection import (
    MatchResult,
    average_precision,
    detection_report,
    iou,
    match_detections,
)
from paddydx.metrics.report import EvalReport, ReportRow

__all__ = [
    "EvalReport",
    "MatchResult",
    "ReportRow",
    "average_precision",
    "binary_counts",
    "classification_report",
    "confusion",
    "cross_entropy",
    "detection_report",
    "iou",
    "match_detections",
    "precision_recall_f1",
]
