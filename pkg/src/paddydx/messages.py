"""Wire schemas for the platform queues (UTF-8 JSON payloads).

Job messages (``jobs.classification`` / ``jobs.detection``)::

    {"job_id", "image_digest", "task_kind", "verify",
     "conf_threshold"?, "nms_iou"?}

Result-queue messages (``results``) are either a progress event
(``{"job_id", "backend_id", "event": "processing"}``) or a terminal
result (``{"job_id", "backend_id", "detections": [...],
"classification"?: {...}, "error"?: str}``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from paddydx.core.geometry import NormalizedBox
from paddydx.errors import InvalidInput
from paddydx.inference.backends import ClassificationResult, Detection

TASK_KINDS = ("classification", "detection")

JOB_QUEUES = {kind: f"jobs.{kind}" for kind in TASK_KINDS}
RESULTS_QUEUE = "results"


@dataclass(frozen=True)
class JobMessage:
    job_id: str
    image_digest: str
    task_kind: str
    verify: bool = False
    conf_threshold: float | None = None
    nms_iou: float | None = None

    def __post_init__(self) -> None:
        if self.task_kind not in TASK_KINDS:
            raise InvalidInput(f"unknown task kind: {self.task_kind!r}")

    def encode(self) -> bytes:
        doc = {
            "job_id": self.job_id,
            "image_digest": self.image_digest,
            "task_kind": self.task_kind,
            "verify": self.verify,
        }
        if self.conf_threshold is not None:
            doc["conf_threshold"] = self.conf_threshold
        if self.nms_iou is not None:
            doc["nms_iou"] = self.nms_iou
        return json.dumps(doc).encode("utf-8")

    @staticmethod
    def decode(payload: bytes) -> "JobMessage":
        doc = _json_object(payload)
        try:
            return JobMessage(
                job_id=str(doc["job_id"]),
                image_digest=str(doc["image_digest"]),
                task_kind=str(doc["task_kind"]),
                verify=bool(doc.get("verify", False)),
                conf_threshold=doc.get("conf_threshold"),
                nms_iou=doc.get("nms_iou"),
            )
        except KeyError as exc:
            raise InvalidInput(f"job message missing field {exc}") from None


@dataclass(frozen=True)
class ResultMessage:
    job_id: str
    backend_id: str
    event: str = "result"  # "result" | "processing"
    detections: tuple[Detection, ...] = field(default_factory=tuple)
    classification: ClassificationResult | None = None
    error: str | None = None

    def encode(self) -> bytes:
        doc: dict = {"job_id": self.job_id, "backend_id": self.backend_id}
        if self.event != "result":
            doc["event"] = self.event
            return json.dumps(doc).encode("utf-8")
        doc["detections"] = [
            {
                "class": d.class_index,
                "conf": d.confidence,
                "box": [d.box.cx, d.box.cy, d.box.w, d.box.h],
                "status": d.status,
            }
            for d in self.detections
        ]
        if self.classification is not None:
            doc["classification"] = {
                "probs": list(self.classification.probs),
                "top_class": self.classification.top_class,
                "top_prob": self.classification.top_prob,
            }
        if self.error is not None:
            doc["error"] = self.error
        return json.dumps(doc).encode("utf-8")

    @staticmethod
    def decode(payload: bytes) -> "ResultMessage":
        doc = _json_object(payload)
        try:
            job_id = str(doc["job_id"])
            backend_id = str(doc["backend_id"])
        except KeyError as exc:
            raise InvalidInput(f"result message missing field {exc}") from None
        if doc.get("event") == "processing":
            return ResultMessage(job_id=job_id, backend_id=backend_id, event="processing")
        detections = tuple(
            Detection(
                class_index=int(d["class"]),
                confidence=float(d["conf"]),
                box=NormalizedBox(*[float(v) for v in d["box"]]),
                status=d.get("status", "kept"),
            )
            for d in doc.get("detections", ())
        )
        classification = None
        if "classification" in doc:
            classification = ClassificationResult.from_probs(doc["classification"]["probs"])
        return ResultMessage(
            job_id=job_id,
            backend_id=backend_id,
            detections=detections,
            classification=classification,
            error=doc.get("error"),
        )


def _json_object(payload: bytes) -> dict:
    try:
        doc = json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"malformed message payload: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInput("message payload must be a JSON object")
    return doc
