"""Master supervisor: spawns, monitors, scales, and hot-swaps worker pools.

One supervisory loop watches heartbeats; a worker silent for
``heartbeat_interval * missed_heartbeats_limit`` seconds is dismissed and
(under the ``always`` restart policy) replaced. Hot swap drains and
replaces workers one at a time so the pool never dips by more than one.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable

from paddydx.broker.clock import Clock, MonotonicClock
from paddydx.broker.queue import Broker
from paddydx.errors import InvalidInput, NotFound, Unavailable, Unsupported
from paddydx.inference.backends import CLASSIFY, DETECT, ModelBackend
from paddydx.messages import JOB_QUEUES, RESULTS_QUEUE, TASK_KINDS
from paddydx.orchestrator.worker import BlobReader, Worker, WorkerHandle, WorkerSpec

_CAPABILITY_FOR_KIND = {"classification": CLASSIFY, "detection": DETECT}


class BackendRegistry:
    """Backend factories by id; every worker gets its own instance."""

    def __init__(self):
        self._factories: dict[str, Callable[[], ModelBackend]] = {}

    def register(self, backend_id: str, factory: Callable[[], ModelBackend]) -> None:
        self._factories[backend_id] = factory

    def create(self, backend_id: str) -> ModelBackend:
        factory = self._factories.get(backend_id)
        if factory is None:
            raise NotFound(f"unknown backend id: {backend_id!r}")
        return factory()

    def __contains__(self, backend_id: str) -> bool:
        return backend_id in self._factories


@dataclass
class MasterConfig:
    pool_sizes: dict[str, int] = field(default_factory=dict)
    backend_ids: dict[str, str] = field(default_factory=dict)
    heartbeat_interval: float = 2.0
    missed_heartbeats_limit: int = 3
    restart_policy: str = "always"  # "always" | "never"
    lease_duration: float = 30.0
    poll_timeout: float = 0.1

    def __post_init__(self) -> None:
        for kind, size in self.pool_sizes.items():
            if kind not in TASK_KINDS:
                raise InvalidInput(f"unknown task kind: {kind!r}")
            if size < 0:
                raise InvalidInput("pool_size must be >= 0")
        if self.missed_heartbeats_limit < 1:
            raise InvalidInput("missed_heartbeats_limit must be >= 1")
        if self.restart_policy not in ("always", "never"):
            raise InvalidInput(f"unknown restart policy: {self.restart_policy!r}")


class Master:
    def __init__(
        self,
        broker: Broker,
        registry: BackendRegistry,
        blobs: BlobReader,
        config: MasterConfig,
        clock: Clock | None = None,
    ):
        self._broker = broker
        self._registry = registry
        self._blobs = blobs
        self._config = config
        self._clock = clock or MonotonicClock()
        self._lock = threading.RLock()
        self._pools: dict[str, list[Worker]] = {kind: [] for kind in TASK_KINDS}
        self._heartbeats: dict[str, float] = {}
        self._stop = threading.Event()
        self._supervisor = threading.Thread(target=self._monitor, name="master", daemon=True)
        self._started = False

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> "Master":
        if self._broker is None or self._broker.closed:
            raise Unavailable("broker is not reachable")
        for queue in (*JOB_QUEUES.values(), RESULTS_QUEUE):
            self._broker.declare_queue(queue)
        with self._lock:
            for kind, size in self._config.pool_sizes.items():
                for _ in range(size):
                    self._spawn_locked(kind)
        self._started = True
        self._supervisor.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        with self._lock:
            workers = [w for pool in self._pools.values() for w in pool]
        for w in workers:
            w.stop()
        for w in workers:
            w.join(timeout=5.0)
        if self._started:
            self._supervisor.join(timeout=5.0)

    # -- pool operations ------------------------------------------------------

    def _heartbeat(self, worker_id: str, now: float) -> None:
        self._heartbeats[worker_id] = now

    def _spawn_locked(self, kind: str, backend_id: str | None = None) -> Worker:
        backend_id = backend_id or self._config.backend_ids.get(kind)
        if backend_id is None:
            raise InvalidInput(f"no backend configured for task kind {kind!r}")
        backend = self._registry.create(backend_id)
        self._check_capability(kind, backend)
        spec = WorkerSpec(
            task_kind=kind,
            backend_id=backend_id,
            queue_in=JOB_QUEUES[kind],
            queue_out=RESULTS_QUEUE,
        )
        worker = Worker(
            spec,
            self._broker,
            backend,
            self._blobs,
            heartbeat=self._heartbeat,
            clock=self._clock,
            lease_duration=self._config.lease_duration,
            poll_timeout=self._config.poll_timeout,
            heartbeat_interval=self._config.heartbeat_interval,
        )
        self._pools[kind].append(worker)
        self._heartbeats[worker.worker_id] = self._clock.now()
        worker.start()
        return worker

    @staticmethod
    def _check_capability(kind: str, backend: ModelBackend) -> None:
        needed = _CAPABILITY_FOR_KIND[kind]
        if needed not in backend.capabilities:
            raise Unsupported(
                f"backend {backend.backend_id!r} lacks {needed!r} needed for {kind}"
            )

    def scale(self, kind: str, n: int) -> int:
        """Grow by spawning or shrink by draining; returns the new pool size."""
        if kind not in TASK_KINDS:
            raise InvalidInput(f"unknown task kind: {kind!r}")
        if n < 0:
            raise InvalidInput("pool size must be >= 0")
        with self._lock:
            pool = [w for w in self._pools[kind] if w.state not in ("failed", "stopped")]
            while len(pool) < n:
                pool.append(self._spawn_locked(kind))
            victims = pool[n:]
            self._config.pool_sizes[kind] = n
        for w in victims:
            w.stop()  # drains: current job completes first
        return n

    def hot_swap(self, kind: str, new_backend_id: str) -> None:
        """Replace the pool's backend one worker at a time, without dropping jobs."""
        if kind not in TASK_KINDS:
            raise InvalidInput(f"unknown task kind: {kind!r}")
        if new_backend_id not in self._registry:
            raise NotFound(f"unknown backend id: {new_backend_id!r}")
        self._check_capability(kind, self._registry.create(new_backend_id))
        with self._lock:
            old = [w for w in self._pools[kind] if w.state not in ("failed", "stopped")]
            self._config.backend_ids[kind] = new_backend_id
        for worker in old:
            worker.stop()
            worker.join(timeout=10.0)
            with self._lock:
                self._reap_locked()
                if len(self._alive_locked(kind)) < self._config.pool_sizes.get(kind, 0):
                    self._spawn_locked(kind, new_backend_id)

    def workers(self, kind: str | None = None) -> list[WorkerHandle]:
        with self._lock:
            pools = self._pools.values() if kind is None else [self._pools[kind]]
            return [w.handle() for pool in pools for w in pool]

    def _alive_locked(self, kind: str) -> list[Worker]:
        return [w for w in self._pools[kind] if w.state not in ("failed", "stopped")]

    def _reap_locked(self) -> None:
        for kind in TASK_KINDS:
            for w in list(self._pools[kind]):
                if w.state in ("failed", "stopped") and not w.alive:
                    self._pools[kind].remove(w)
                    self._heartbeats.pop(w.worker_id, None)

    # -- supervision --------------------------------------------------------------

    def _monitor(self) -> None:
        limit = self._config.heartbeat_interval * self._config.missed_heartbeats_limit
        while not self._stop.wait(self._config.heartbeat_interval / 4.0):
            now = self._clock.now()
            with self._lock:
                self._reap_locked()
                for kind in TASK_KINDS:
                    target = self._config.pool_sizes.get(kind, 0)
                    for w in list(self._pools[kind]):
                        if w.state in ("failed", "stopped"):
                            continue
                        last = self._heartbeats.get(w.worker_id, now)
                        if now - last > limit:
                            w.kill()  # dismiss: hung or crashed
                    if self._config.restart_policy == "always":
                        while len(self._alive_locked(kind)) < target and self._config.backend_ids.get(kind):
                            self._spawn_locked(kind)


def start_master(
    broker: Broker,
    registry: BackendRegistry,
    blobs: BlobReader,
    config: MasterConfig,
    clock: Clock | None = None,
) -> Master:
    return Master(broker, registry, blobs, config, clock).start()
