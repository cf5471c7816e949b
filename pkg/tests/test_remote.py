"""Out-of-process worker path: RemoteBroker/RemoteBlobs over the HTTP app."""

import time

import pytest
from fastapi.testclient import TestClient

from conftest import random_image
from paddydx.broker.clock import MonotonicClock
from paddydx.broker.queue import Broker
from paddydx.gateway.http import create_app
from paddydx.gateway.remote import RemoteBlobs, RemoteBroker
from paddydx.gateway.service import GatewayConfig, GatewayService
from paddydx.inference.backends import ImageInput
from paddydx.inference.fixtures import FixtureBackend, FixtureStore
from paddydx.messages import JOB_QUEUES, RESULTS_QUEUE, JobMessage, ResultMessage
from paddydx.orchestrator.worker import Worker, WorkerSpec


@pytest.fixture
def stack(tmp_path, rng):
    broker = Broker()
    service = GatewayService(GatewayConfig(data_dir=tmp_path / "data"), broker)
    app = create_app(service)
    image = ImageInput.from_raster(random_image(rng))
    service.blobs.put(image.data)
    store = FixtureStore.from_dict(
        {"detect": {image.digest: [{"class": 2, "conf": 0.9, "box": [0.5, 0.5, 0.2, 0.2]}]}}
    )
    return broker, service, app, image, store


def test_remote_worker_completes_a_job(stack):
    broker, service, app, image, store = stack
    remote_broker = RemoteBroker("http://gw", client=TestClient(app))
    remote_blobs = RemoteBlobs("http://gw", client=TestClient(app))
    spec = WorkerSpec(
        task_kind="detection",
        backend_id="fixture",
        queue_in=JOB_QUEUES["detection"],
        queue_out=RESULTS_QUEUE,
    )
    worker = Worker(
        spec,
        remote_broker,
        FixtureBackend(store),
        remote_blobs,
        heartbeat=lambda _id, _now: None,
        clock=MonotonicClock(),
        lease_duration=10.0,
        poll_timeout=0.05,
    )
    worker.start()
    try:
        broker.publish(
            JOB_QUEUES["detection"],
            JobMessage(job_id="rj", image_digest=image.digest, task_kind="detection").encode(),
        )
        deadline = time.monotonic() + 10.0
        result = None
        while time.monotonic() < deadline and result is None:
            item = broker.consume(RESULTS_QUEUE, "sink", lease_duration=5.0, timeout=0.1)
            if item is None:
                continue
            envelope, lease = item
            msg = ResultMessage.decode(envelope.payload)
            broker.ack(lease)
            if msg.event == "result":
                result = msg
        assert result is not None
        assert result.job_id == "rj"
        assert result.detections[0].class_index == 2
        deadline = time.monotonic() + 5.0
        while time.monotonic() < deadline and broker.stats(JOB_QUEUES["detection"]).acked < 1:
            time.sleep(0.02)
        stats = broker.stats(JOB_QUEUES["detection"])
        assert stats.acked == 1 and stats.leased == 0 and stats.queued == 0
    finally:
        worker.stop()
        worker.join(timeout=5.0)


def test_remote_blob_missing_is_not_found(stack):
    _, _, app, _, _ = stack
    from paddydx.errors import NotFound

    remote_blobs = RemoteBlobs("http://gw", client=TestClient(app))
    with pytest.raises(NotFound):
        remote_blobs.get("0" * 64)
