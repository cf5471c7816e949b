"""Inference worker: consume a job, run the backend, publish the result.

Workers are single-owner over their backend instance and communicate only
through the broker and the master's heartbeat channel. Backend failures
nack the job back to the queue; messages that keep failing dead-letter via
broker policy. A simulated crash (``kill``) abandons the in-flight lease
without settling it, so the broker redelivers after expiry.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass
from typing import Callable, Protocol

from paddydx.broker.queue import Broker, Envelope, Lease
from paddydx.errors import InvalidInput, LeaseInvalid
from paddydx.inference.backends import CLASSIFY, ImageInput, ModelBackend
from paddydx.inference.postprocess import (
    DEFAULT_CONF_THRESHOLD,
    DEFAULT_NMS_IOU,
    detect,
)
from paddydx.inference.verify import verify_detections
from paddydx.messages import JobMessage, ResultMessage

WORKER_STATES = ("starting", "idle", "busy", "failed", "stopped")


class BlobReader(Protocol):
    def get(self, digest: str) -> bytes: ...


@dataclass(frozen=True)
class WorkerSpec:
    task_kind: str  # "classification" | "detection"
    backend_id: str
    queue_in: str
    queue_out: str


@dataclass(frozen=True)
class WorkerHandle:
    worker_id: str
    spec: WorkerSpec
    state: str
    last_heartbeat: float


class Worker:
    def __init__(
        self,
        spec: WorkerSpec,
        broker: Broker,
        backend: ModelBackend,
        blobs: BlobReader,
        heartbeat: Callable[[str, float], None],
        clock,
        lease_duration: float = 30.0,
        poll_timeout: float = 0.1,
        heartbeat_interval: float = 2.0,
    ):
        self.spec = spec
        self.worker_id = f"{spec.task_kind[:5]}-{uuid.uuid4().hex[:8]}"
        self._broker = broker
        self._backend = backend
        self._blobs = blobs
        self._heartbeat = heartbeat
        self._clock = clock
        self._lease_duration = lease_duration
        self._poll_timeout = poll_timeout
        self._heartbeat_interval = heartbeat_interval
        self._stop = threading.Event()
        self._killed = threading.Event()
        self._state = "starting"
        self._state_lock = threading.Lock()
        self.last_heartbeat = 0.0
        self._thread = threading.Thread(target=self._run, name=self.worker_id, daemon=True)
        # Liveness is reported by a dedicated pump so long-running jobs
        # don't look like crashes; a real crash (kill) silences it.
        self._pump = threading.Thread(
            target=self._heartbeat_pump, name=f"{self.worker_id}-hb", daemon=True
        )

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        self._thread.start()
        self._pump.start()

    def stop(self) -> None:
        """Graceful drain: the current job finishes, then the loop exits."""
        self._stop.set()

    def kill(self) -> None:
        """Simulated crash: abandon everything immediately, no ack/nack."""
        self._killed.set()
        self._set_state("failed")

    def join(self, timeout: float | None = None) -> None:
        self._thread.join(timeout)

    @property
    def alive(self) -> bool:
        return self._thread.is_alive()

    @property
    def state(self) -> str:
        with self._state_lock:
            return self._state

    def _set_state(self, state: str) -> None:
        with self._state_lock:
            if self._state in ("failed", "stopped") and state not in ("failed", "stopped"):
                return  # terminal states stick
            self._state = state

    def handle(self) -> WorkerHandle:
        return WorkerHandle(
            worker_id=self.worker_id,
            spec=self.spec,
            state=self.state,
            last_heartbeat=self.last_heartbeat,
        )

    # -- main loop ------------------------------------------------------------

    def _beat(self) -> None:
        now = self._clock.now()
        self.last_heartbeat = now
        self._heartbeat(self.worker_id, now)

    def _heartbeat_pump(self) -> None:
        while not self._killed.is_set() and self._thread.is_alive():
            self._beat()
            if self._killed.wait(self._heartbeat_interval / 2.0):
                return

    def _run(self) -> None:
        self._set_state("idle")
        self._beat()
        while not self._stop.is_set() and not self._killed.is_set():
            item = self._broker.consume(
                self.spec.queue_in,
                self.worker_id,
                lease_duration=self._lease_duration,
                timeout=self._poll_timeout,
            )
            if item is None:
                continue
            envelope, lease = item
            self._set_state("busy")
            try:
                self._process(envelope, lease)
            finally:
                self._set_state("idle")
        self._set_state("failed" if self._killed.is_set() else "stopped")

    def _settle_nack(self, lease: Lease) -> None:
        try:
            self._broker.nack(lease, requeue=True)
        except LeaseInvalid:
            pass  # lease expired while we worked; broker already requeued

    def _process(self, envelope: Envelope, lease: Lease) -> None:
        try:
            job = JobMessage.decode(envelope.payload)
        except InvalidInput:
            self._settle_nack(lease)  # poison; dead-letters after max deliveries
            return
        if job.task_kind != self.spec.task_kind:
            self._settle_nack(lease)
            return
        self._broker.publish(
            self.spec.queue_out,
            ResultMessage(
                job_id=job.job_id, backend_id=self._backend.backend_id, event="processing"
            ).encode(),
        )
        try:
            result = self._infer(job)
        except Exception:
            self._settle_nack(lease)
            return
        if self._killed.is_set():
            return  # crashed before settling; lease expires and job is redelivered
        self._broker.publish(self.spec.queue_out, result.encode())
        try:
            self._broker.ack(lease)
        except LeaseInvalid:
            pass  # redelivery will produce a duplicate result; gateway dedups

    def _infer(self, job: JobMessage) -> ResultMessage:
        image = ImageInput(self._blobs.get(job.image_digest))
        if job.task_kind == "classification":
            self._backend.require(CLASSIFY)
            result = self._backend.classify(image)
            return ResultMessage(
                job_id=job.job_id,
                backend_id=self._backend.backend_id,
                classification=result,
            )
        dets = detect(
            self._backend,
            image,
            conf_threshold=job.conf_threshold or DEFAULT_CONF_THRESHOLD,
            nms_iou=job.nms_iou or DEFAULT_NMS_IOU,
        )
        if job.verify and CLASSIFY in self._backend.capabilities:
            dets = verify_detections(image, dets, self._backend)
        return ResultMessage(
            job_id=job.job_id,
            backend_id=self._backend.backend_id,
            detections=tuple(dets),
        )
