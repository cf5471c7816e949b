"""Classification metrics: cross-entropy loss, confusion matrices, and
accuracy / precision / recall / F1 reports.

Conventions:
    * confusion matrix entry (t, p) counts instances of true class t
      predicted as class p;
    * per-class precision/recall/F1 are one-vs-rest;
    * any metric with a zero denominator is defined as 0 (conservative);
    * true-class probabilities are clamped at 1e-12 inside the log so the
      loss stays finite on degenerate inputs.
"""

from __future__ import annotations

import numpy as np

from paddydx.errors import InvalidInput
from paddydx.metrics.report import EvalReport, ReportRow

PROB_CLAMP = 1e-12
ROW_SUM_TOL = 1e-6


def _as_prob_matrix(probs) -> np.ndarray:
    arr = np.asarray(probs, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInput(f"probability matrix must be 2-D, got shape {arr.shape}")
    if np.any(arr < -ROW_SUM_TOL) or np.any(arr > 1.0 + ROW_SUM_TOL):
        raise InvalidInput("probabilities must lie in [0, 1]")
    sums = arr.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise InvalidInput(f"probability row {bad} sums to {sums[bad]:.8f}, expected 1")
    return arr


def _as_labels(labels, n: int, num_classes: int) -> np.ndarray:
    arr = np.asarray(labels, dtype=np.int64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise InvalidInput(f"labels must be a length-{n} vector, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= num_classes):
        raise InvalidInput(f"labels must lie in 0..{num_classes - 1}")
    return arr


def cross_entropy(probs, labels) -> float:
    """Mean negative log-probability of the true class.

    With one-hot true labels the double sum over instances and classes
    collapses to -(1/N) * sum_i log(p[i, label_i]).
    """
    arr = _as_prob_matrix(probs)
    n, c = arr.shape
    if n == 0:
        raise InvalidInput("cross_entropy requires at least one instance")
    y = _as_labels(labels, n, c)
    picked = np.clip(arr[np.arange(n), y], PROB_CLAMP, None)
    return float(-np.mean(np.log(picked)))


def confusion(preds, labels, num_classes: int) -> np.ndarray:
    """num_classes x num_classes count matrix, rows = true, cols = predicted."""
    p = np.asarray(preds, dtype=np.int64)
    y = np.asarray(labels, dtype=np.int64)
    if p.shape != y.shape or p.ndim != 1:
        raise InvalidInput(f"preds/labels shape mismatch: {p.shape} vs {y.shape}")
    if p.size:
        if p.min() < 0 or p.max() >= num_classes:
            raise InvalidInput("prediction label out of range")
        if y.min() < 0 or y.max() >= num_classes:
            raise InvalidInput("true label out of range")
    cm = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(cm, (y, p), 1)
    return cm


def binary_counts(cm: np.ndarray, class_index: int) -> tuple[int, int, int, int]:
    """One-vs-rest (TP, TN, FP, FN) for one class of a confusion matrix."""
    total = int(cm.sum())
    tp = int(cm[class_index, class_index])
    fp = int(cm[:, class_index].sum()) - tp
    fn = int(cm[class_index, :].sum()) - tp
    tn = total - tp - fp - fn
    return tp, tn, fp, fn


def _safe_div(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def precision_recall_f1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = _safe_div(tp, tp + fp)
    recall = _safe_div(tp, tp + fn)
    f1 = _safe_div(2.0 * precision * recall, precision + recall)
    return precision, recall, f1


def classification_report(cm: np.ndarray, labels: list[str] | None = None) -> EvalReport:
    """Per-class precision/recall/F1 rows plus overall accuracy in metadata."""
    cm = np.asarray(cm)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise InvalidInput(f"confusion matrix must be square, got shape {cm.shape}")
    if np.any(cm < 0):
        raise InvalidInput("confusion matrix entries must be non-negative")
    n = int(cm.sum())
    if n == 0:
        raise InvalidInput("confusion matrix is empty (N = 0)")
    c = cm.shape[0]
    if labels is None:
        labels = [f"class_{i}" for i in range(c)]
    elif len(labels) != c:
        raise InvalidInput(f"expected {c} labels, got {len(labels)}")

    rows = []
    for i in range(c):
        tp, _, fp, fn = binary_counts(cm, i)
        rows.append(ReportRow(label=labels[i], values=precision_recall_f1(tp, fp, fn)))
    accuracy = float(np.trace(cm)) / n
    return EvalReport(
        columns=("precision", "recall", "f1"),
        rows=tuple(rows),
        metadata={"accuracy": accuracy, "instances": n},
    )
