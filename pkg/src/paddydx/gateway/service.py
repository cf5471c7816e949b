"""Gateway service: auth, uploads, job dispatch, results, outbreaks.

All methods are thread-safe and raise the shared error taxonomy; the HTTP
layer is a thin shell over this class. Result application is idempotent
(keyed by job id), so at-least-once redelivery from the broker is
harmless. Jobs whose messages dead-letter are marked failed by the
dead-letter watcher.
"""

from __future__ import annotations

import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from paddydx.broker.clock import Clock, SystemClock
from paddydx.broker.queue import Broker
from paddydx.core.geometry import GeoPoint
from paddydx.core.image import decode_image
from paddydx.core.taxonomy import class_index, detection_to_class_index, index_to_slug
from paddydx.core.treatments import TreatmentKB, default_kb
from paddydx.errors import (
    Conflict,
    Forbidden,
    InvalidInput,
    NotFound,
    PayloadTooLarge,
    Unauthorized,
)
from paddydx.gateway.auth import TokenStore, hash_password, verify_password
from paddydx.gateway.storage import BlobStore, Repository
from paddydx.messages import JOB_QUEUES, RESULTS_QUEUE, TASK_KINDS, JobMessage, ResultMessage

USERNAME_RE = re.compile(r"^[a-z0-9_]{3,32}$")
MIN_PASSWORD_LEN = 8
MAX_UPLOAD_BYTES = 10 * 1024 * 1024

JOB_STATUSES = ("queued", "processing", "done", "failed")
_STATUS_RANK = {"queued": 0, "processing": 1, "done": 2, "failed": 2}

_NORMAL_INDEX = class_index("normal")


@dataclass
class GatewayConfig:
    data_dir: Path
    token_ttl_seconds: float = 24 * 3600.0
    max_upload_bytes: int = MAX_UPLOAD_BYTES
    durable_queues: bool = False


class GatewayService:
    def __init__(
        self,
        config: GatewayConfig,
        broker: Broker,
        clock: Clock | None = None,
        kb: TreatmentKB | None = None,
    ):
        self.config = config
        self.broker = broker
        self.clock = clock or SystemClock()
        self.kb = kb or default_kb()
        data_dir = Path(config.data_dir)
        self.blobs = BlobStore(data_dir / "blobs")
        self.repo = Repository(data_dir / "records.jsonl")
        self.tokens = TokenStore(self.clock, ttl_seconds=config.token_ttl_seconds)
        self._apply_lock = threading.Lock()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        for queue in (*JOB_QUEUES.values(), RESULTS_QUEUE):
            broker.declare_queue(queue, durable=config.durable_queues)

    # -- auth -----------------------------------------------------------------

    def register(self, username: str, password: str) -> str:
        if not USERNAME_RE.match(username or ""):
            raise InvalidInput("username must match [a-z0-9_]{3,32}")
        if len(password or "") < MIN_PASSWORD_LEN:
            raise InvalidInput(f"password must be at least {MIN_PASSWORD_LEN} characters")
        with self._apply_lock:
            if self.repo.get("users_by_name", username) is not None:
                raise Conflict("username already taken")
            user_id = uuid.uuid4().hex
            doc = {
                "user_id": user_id,
                "username": username,
                "credential_hash": hash_password(password),
                "created_at": self.clock.now(),
            }
            self.repo.put("users", user_id, doc)
            self.repo.put("users_by_name", username, {"user_id": user_id})
        return user_id

    def login(self, username: str, password: str) -> str:
        ref = self.repo.get("users_by_name", username or "")
        user = self.repo.get("users", ref["user_id"]) if ref else None
        # Single failure message: never reveal which field was wrong.
        if user is None or not verify_password(password or "", user["credential_hash"]):
            raise Unauthorized("invalid credentials")
        return self.tokens.issue(user["user_id"])

    def _auth(self, token: str | None) -> str:
        return self.tokens.resolve(token)

    # -- uploads ---------------------------------------------------------------

    def upload_image(self, token: str, data: bytes, geo: GeoPoint | None = None) -> str:
        owner = self._auth(token)
        if len(data) > self.config.max_upload_bytes:
            raise PayloadTooLarge(f"upload exceeds {self.config.max_upload_bytes} bytes")
        decode_image(data)  # raises UnsupportedMedia unless valid JPEG/PNG
        digest = self.blobs.put(data)
        upload_id = uuid.uuid4().hex
        doc = {
            "upload_id": upload_id,
            "owner": owner,
            "image_digest": digest,
            "geo": {"latitude": geo.latitude, "longitude": geo.longitude} if geo else None,
            "created_at": self.clock.now(),
        }
        self.repo.put("uploads", upload_id, doc)
        return upload_id

    def _owned_upload(self, owner: str, upload_id: str) -> dict:
        doc = self.repo.get("uploads", upload_id)
        if doc is None:
            raise NotFound(f"unknown upload: {upload_id}")
        if doc["owner"] != owner:
            raise Forbidden("upload belongs to another user")
        return doc

    # -- jobs --------------------------------------------------------------------

    def create_job(
        self,
        token: str,
        upload_id: str,
        task_kind: str,
        verify: bool = False,
        conf_threshold: float | None = None,
        nms_iou: float | None = None,
    ) -> str:
        owner = self._auth(token)
        if task_kind not in TASK_KINDS:
            raise InvalidInput(f"task_kind must be one of {TASK_KINDS}")
        upload = self._owned_upload(owner, upload_id)
        job_id = uuid.uuid4().hex
        doc = {
            "job_id": job_id,
            "upload_id": upload_id,
            "owner": owner,
            "task_kind": task_kind,
            "verify": verify,
            "status": "queued",
            "error": None,
            "created_at": self.clock.now(),
        }
        self.repo.put("jobs", job_id, doc)
        message = JobMessage(
            job_id=job_id,
            image_digest=upload["image_digest"],
            task_kind=task_kind,
            verify=verify,
            conf_threshold=conf_threshold,
            nms_iou=nms_iou,
        )
        self.broker.publish(JOB_QUEUES[task_kind], message.encode())
        return job_id

    def _owned_job(self, owner: str, job_id: str) -> dict:
        doc = self.repo.get("jobs", job_id)
        if doc is None:
            raise NotFound(f"unknown job: {job_id}")
        if doc["owner"] != owner:
            raise Forbidden("job belongs to another user")
        return doc

    def job_status(self, token: str, job_id: str) -> dict:
        owner = self._auth(token)
        job = self._owned_job(owner, job_id)
        return {
            "job_id": job["job_id"],
            "upload_id": job["upload_id"],
            "task_kind": job["task_kind"],
            "status": job["status"],
            "error": job["error"],
        }

    def get_result(self, token: str, job_id: str) -> dict:
        owner = self._auth(token)
        job = self._owned_job(owner, job_id)
        if job["status"] != "done":
            raise Conflict(job["status"])
        result = self.repo.get("results", job_id)
        assert result is not None  # done implies a stored result
        return result

    # -- result application ----------------------------------------------------------

    def _transition(self, job: dict, status: str) -> dict | None:
        if job["status"] in ("done", "failed"):
            return None  # terminal states stick; idempotent re-apply
        if _STATUS_RANK[status] <= _STATUS_RANK[job["status"]]:
            return None
        job = dict(job)
        job["status"] = status
        return job

    def apply_result(self, msg: ResultMessage) -> bool:
        """Idempotently fold a result-queue message into job state.

        Returns True when the message changed anything.
        """
        with self._apply_lock:
            job = self.repo.get("jobs", msg.job_id)
            if job is None:
                return False  # unknown job: settle and drop
            if msg.event == "processing":
                updated = self._transition(job, "processing")
                if updated is None:
                    return False
                self.repo.put("jobs", msg.job_id, updated)
                return True
            if msg.error is not None:
                updated = self._transition(job, "failed")
                if updated is None:
                    return False
                updated["error"] = msg.error
                self.repo.put("jobs", msg.job_id, updated)
                return True
            updated = self._transition(job, "done")
            if updated is None:
                return False
            self.repo.put("results", msg.job_id, self._render_result(msg))
            self.repo.put("jobs", msg.job_id, updated)
            self._record_outbreaks(job, msg)
            return True

    def _result_classes(self, msg: ResultMessage) -> list[int]:
        classes = {detection_to_class_index(d.class_index) for d in msg.detections}
        if msg.classification is not None:
            classes.add(msg.classification.top_class)
        return sorted(classes)

    def _render_result(self, msg: ResultMessage) -> dict:
        treatments = [
            {"class_index": idx, **self.kb.for_class(idx).to_dict()}
            for idx in self._result_classes(msg)
        ]
        doc = {
            "job_id": msg.job_id,
            "backend_id": msg.backend_id,
            "detections": [
                {
                    "class_index": d.class_index,
                    "class_slug": index_to_slug(detection_to_class_index(d.class_index)),
                    "confidence": d.confidence,
                    "box": {"cx": d.box.cx, "cy": d.box.cy, "w": d.box.w, "h": d.box.h},
                    "status": d.status,
                }
                for d in msg.detections
            ],
            "classification": None,
            "treatments": treatments,
        }
        if msg.classification is not None:
            doc["classification"] = {
                "probs": list(msg.classification.probs),
                "top_class": msg.classification.top_class,
                "top_slug": index_to_slug(msg.classification.top_class),
                "top_prob": msg.classification.top_prob,
            }
        return doc

    def _record_outbreaks(self, job: dict, msg: ResultMessage) -> None:
        upload = self.repo.get("uploads", job["upload_id"])
        if upload is None or upload.get("geo") is None:
            return
        geo = upload["geo"]
        for idx in self._result_classes(msg):
            if idx == _NORMAL_INDEX:
                continue  # healthy results never map an outbreak
            self.repo.append(
                "outbreaks",
                {
                    "class_index": idx,
                    "latitude": geo["latitude"],
                    "longitude": geo["longitude"],
                    "observed_at": self.clock.now(),
                },
            )

    # -- outbreaks ------------------------------------------------------------------

    def list_outbreaks(
        self,
        token: str,
        min_lat: float,
        min_lon: float,
        max_lat: float,
        max_lon: float,
        since: float = 0.0,
    ) -> list[dict]:
        self._auth(token)
        if min_lat > max_lat or min_lon > max_lon:
            raise InvalidInput("bounding box corners are inverted")
        GeoPoint(min_lat, min_lon)
        GeoPoint(max_lat, max_lon)
        groups: dict[int, list[dict]] = {}
        for rec in self.repo.items("outbreaks"):
            # closed rectangle: edge reports are included
            if not (min_lat <= rec["latitude"] <= max_lat and min_lon <= rec["longitude"] <= max_lon):
                continue
            if rec["observed_at"] < since:
                continue
            groups.setdefault(rec["class_index"], []).append(rec)
        out = []
        for idx in sorted(groups, key=index_to_slug):
            members = groups[idx]
            out.append(
                {
                    "class": index_to_slug(idx),
                    "count": len(members),
                    "centroid": {
                        "latitude": sum(m["latitude"] for m in members) / len(members),
                        "longitude": sum(m["longitude"] for m in members) / len(members),
                    },
                }
            )
        return out

    def treatment(self, slug: str) -> dict:
        entry = self.kb.for_slug(slug)
        return {"class_index": entry.class_index, **entry.to_dict()}

    # -- background consumers -----------------------------------------------------------

    def start_consumers(self) -> None:
        for target, name in (
            (self._consume_results, "gateway-results"),
            (self._watch_dead_letters, "gateway-dead"),
        ):
            thread = threading.Thread(target=target, name=name, daemon=True)
            thread.start()
            self._threads.append(thread)

    def stop(self) -> None:
        self._stop.set()
        for thread in self._threads:
            thread.join(timeout=5.0)
        self.repo.close()

    def _consume_results(self) -> None:
        while not self._stop.is_set():
            item = self.broker.consume(RESULTS_QUEUE, "gateway", lease_duration=30.0, timeout=0.1)
            if item is None:
                continue
            envelope, lease = item
            try:
                self.apply_result(ResultMessage.decode(envelope.payload))
            except InvalidInput:
                pass  # malformed internal message: drop it
            try:
                self.broker.ack(lease)
            except Exception:
                pass

    def _watch_dead_letters(self) -> None:
        dead_queues = [q + ".dead" for q in JOB_QUEUES.values()]
        while not self._stop.is_set():
            idle = True
            for queue in dead_queues:
                item = self.broker.consume(queue, "gateway-dead", lease_duration=30.0, timeout=0.0)
                if item is None:
                    continue
                idle = False
                envelope, lease = item
                try:
                    job = JobMessage.decode(envelope.payload)
                    self.apply_result(
                        ResultMessage(
                            job_id=job.job_id,
                            backend_id="",
                            error="job dead-lettered after repeated delivery failures",
                        )
                    )
                except InvalidInput:
                    pass
                try:
                    self.broker.ack(lease)
                except Exception:
                    pass
            if idle:
                time.sleep(0.05)
