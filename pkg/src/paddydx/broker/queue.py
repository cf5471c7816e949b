"""Embedded at-least-once message broker.

Semantics:
    * FIFO queues with exclusive, time-bounded leases per delivered message;
    * unacked leases expire and the message is redelivered (delivery_count
      increments on every delivery);
    * a message failing its ``max_deliveries``-th delivery moves to the
      queue's dead-letter companion ``<name>.dead``;
    * durable queues journal enqueue/ack/dead to disk and are reconstructed
      by replay on startup.

Every published message is therefore acked exactly once or sits in its
queue, a lease, or the dead-letter companion — never silently lost. All
state transitions take the broker lock, making them linearizable.
"""

from __future__ import annotations

import base64
import re
import threading
import time
import uuid
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from paddydx.broker.clock import Clock, MonotonicClock
from paddydx.broker.journal import Journal, replay
from paddydx.errors import InvalidInput, LeaseInvalid, NotFound

QUEUE_NAME_RE = re.compile(r"^[a-z0-9_.\-]{1,64}$")

DEFAULT_LEASE_SECONDS = 30.0
DEFAULT_MAX_DELIVERIES = 5
DEAD_SUFFIX = ".dead"


@dataclass(frozen=True)
class Envelope:
    message_id: str
    queue: str
    payload: bytes
    delivery_count: int
    enqueued_at: float


@dataclass(frozen=True)
class Lease:
    lease_id: str
    message_id: str
    queue: str
    consumer_id: str
    expires_at: float


@dataclass(frozen=True)
class QueueStats:
    published: int
    acked: int
    queued: int
    leased: int
    dead_lettered: int

    @property
    def conserved(self) -> bool:
        return self.published == self.acked + self.queued + self.leased + self.dead_lettered


class _Message:
    __slots__ = ("message_id", "payload", "delivery_count", "enqueued_at")

    def __init__(self, message_id: str, payload: bytes, enqueued_at: float):
        self.message_id = message_id
        self.payload = payload
        self.delivery_count = 0
        self.enqueued_at = enqueued_at


class _Queue:
    def __init__(self, name: str, durable: bool):
        self.name = name
        self.durable = durable
        self.ready: deque[_Message] = deque()
        self.in_flight: dict[str, tuple[Lease, _Message]] = {}
        self.published = 0
        self.acked = 0
        self.dead_lettered = 0


class Broker:
    def __init__(
        self,
        clock: Clock | None = None,
        max_deliveries: int = DEFAULT_MAX_DELIVERIES,
        journal_path: str | Path | None = None,
    ):
        if max_deliveries < 1:
            raise InvalidInput("max_deliveries must be >= 1")
        self._clock = clock or MonotonicClock()
        self._max_deliveries = max_deliveries
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self._queues: dict[str, _Queue] = {}
        self._journal: Journal | None = None
        self._closed = False
        if journal_path is not None:
            self._restore(journal_path)
            self._journal = Journal(journal_path)

    # -- lifecycle ---------------------------------------------------------

    def _restore(self, journal_path: str | Path) -> None:
        pending: dict[str, dict[str, tuple[bytes, float]]] = {}
        for rec in replay(journal_path):
            op = rec["op"]
            queue = rec["queue"]
            if op == "declare":
                self._queues.setdefault(queue, _Queue(queue, durable=True))
                pending.setdefault(queue, {})
            elif op == "enqueue":
                pending.setdefault(queue, {})[rec["message_id"]] = (
                    base64.b64decode(rec["payload"]),
                    rec["enqueued_at"],
                )
            elif op == "ack":
                entry = pending.get(queue, {}).pop(rec["message_id"], None)
                if entry is not None:
                    self._queues[queue].acked += 1
            elif op == "dead":
                entry = pending.get(queue, {}).pop(rec["message_id"], None)
                if entry is not None:
                    q = self._queues[queue]
                    q.dead_lettered += 1
                    dead_name = queue + DEAD_SUFFIX
                    self._queues.setdefault(dead_name, _Queue(dead_name, durable=True))
                    pending.setdefault(dead_name, {})[rec["message_id"]] = entry
        for queue, messages in pending.items():
            q = self._queues.setdefault(queue, _Queue(queue, durable=True))
            for message_id, (payload, enq_at) in messages.items():
                msg = _Message(message_id, payload, enq_at)
                q.ready.append(msg)
                q.published += 1
            q.published += q.acked + q.dead_lettered

    def close(self) -> None:
        with self._lock:
            self._closed = True
            if self._journal is not None:
                self._journal.close()
                self._journal = None
            self._cond.notify_all()

    @property
    def closed(self) -> bool:
        return self._closed

    # -- queue management ----------------------------------------------------

    def declare_queue(self, name: str, durable: bool = False) -> str:
        if not QUEUE_NAME_RE.match(name or ""):
            raise InvalidInput(f"invalid queue name: {name!r}")
        with self._lock:
            self._declare_locked(name, durable)
            return name

    def _declare_locked(self, name: str, durable: bool) -> _Queue:
        q = self._queues.get(name)
        if q is None:
            q = _Queue(name, durable)
            self._queues[name] = q
            if durable and self._journal is not None:
                self._journal.declare(name)
            if not name.endswith(DEAD_SUFFIX):
                self._declare_locked(name + DEAD_SUFFIX, durable)
        return q

    def _get(self, name: str) -> _Queue:
        q = self._queues.get(name)
        if q is None:
            raise NotFound(f"queue not declared: {name!r}")
        return q

    def queues(self) -> list[str]:
        with self._lock:
            return sorted(self._queues)

    # -- produce / consume ---------------------------------------------------

    def publish(self, queue: str, payload: bytes) -> str:
        with self._lock:
            q = self._get(queue)
            message_id = uuid.uuid4().hex
            msg = _Message(message_id, bytes(payload), self._clock.now())
            q.ready.append(msg)
            q.published += 1
            if q.durable and self._journal is not None:
                self._journal.enqueue(queue, message_id, msg.payload, msg.enqueued_at)
            self._cond.notify_all()
            return message_id

    def consume(
        self,
        queue: str,
        consumer_id: str,
        lease_duration: float = DEFAULT_LEASE_SECONDS,
        timeout: float = 0.0,
    ) -> tuple[Envelope, Lease] | None:
        """Lease the oldest ready message; None when none arrives in time."""
        if lease_duration <= 0:
            raise InvalidInput("lease_duration must be positive")
        deadline = time.monotonic() + timeout
        while True:
            with self._lock:
                q = self._get(queue)
                self._sweep_locked(q)
                if q.ready:
                    return self._deliver_locked(q, consumer_id, lease_duration)
                remaining = deadline - time.monotonic()
                if remaining <= 0 or self._closed:
                    return None
                # Short waits keep lazily-swept lease expiry responsive.
                self._cond.wait(min(remaining, 0.05))

    def _deliver_locked(
        self, q: _Queue, consumer_id: str, lease_duration: float
    ) -> tuple[Envelope, Lease]:
        msg = q.ready.popleft()
        msg.delivery_count += 1
        lease = Lease(
            lease_id=uuid.uuid4().hex,
            message_id=msg.message_id,
            queue=q.name,
            consumer_id=consumer_id,
            expires_at=self._clock.now() + lease_duration,
        )
        q.in_flight[msg.message_id] = (lease, msg)
        envelope = Envelope(
            message_id=msg.message_id,
            queue=q.name,
            payload=msg.payload,
            delivery_count=msg.delivery_count,
            enqueued_at=msg.enqueued_at,
        )
        return envelope, lease

    def _sweep_locked(self, q: _Queue) -> None:
        now = self._clock.now()
        expired = [
            (lease, msg) for lease, msg in q.in_flight.values() if lease.expires_at <= now
        ]
        expired.sort(key=lambda pair: pair[0].expires_at)
        for lease, msg in reversed(expired):
            del q.in_flight[msg.message_id]
            if msg.delivery_count >= self._max_deliveries:
                self._dead_letter_locked(q, msg)
            else:
                q.ready.appendleft(msg)
        if expired:
            self._cond.notify_all()

    def _dead_letter_locked(self, q: _Queue, msg: _Message) -> None:
        q.dead_lettered += 1
        dead = self._declare_locked(q.name + DEAD_SUFFIX, q.durable)
        dead.ready.append(msg)
        dead.published += 1
        if q.durable and self._journal is not None:
            self._journal.dead(q.name, msg.message_id)

    # -- settle ----------------------------------------------------------------

    def _validate_lease_locked(self, lease: Lease) -> tuple[_Queue, _Message]:
        q = self._get(lease.queue)
        entry = q.in_flight.get(lease.message_id)
        if entry is None or entry[0].lease_id != lease.lease_id:
            raise LeaseInvalid(f"lease not active for message {lease.message_id}")
        if entry[0].expires_at <= self._clock.now():
            self._sweep_locked(q)
            raise LeaseInvalid(f"lease expired for message {lease.message_id}")
        return q, entry[1]

    def ack(self, lease: Lease) -> None:
        with self._lock:
            q, msg = self._validate_lease_locked(lease)
            del q.in_flight[msg.message_id]
            q.acked += 1
            if q.durable and self._journal is not None:
                self._journal.ack(q.name, msg.message_id)
            self._cond.notify_all()

    def nack(self, lease: Lease, requeue: bool = True) -> None:
        with self._lock:
            q, msg = self._validate_lease_locked(lease)
            del q.in_flight[msg.message_id]
            if requeue and msg.delivery_count < self._max_deliveries:
                q.ready.appendleft(msg)
            else:
                self._dead_letter_locked(q, msg)
            self._cond.notify_all()

    # -- introspection -----------------------------------------------------------

    def stats(self, queue: str) -> QueueStats:
        with self._lock:
            q = self._get(queue)
            return QueueStats(
                published=q.published,
                acked=q.acked,
                queued=len(q.ready),
                leased=len(q.in_flight),
                dead_lettered=q.dead_lettered,
            )
