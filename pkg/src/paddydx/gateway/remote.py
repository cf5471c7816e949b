"""HTTP clients that mirror the broker/blob interfaces for remote workers.

``paddydx serve worker`` runs in its own process and reaches the gateway's
embedded broker through the ``/internal/broker`` routes; these adapters
satisfy the same duck types the in-process ``Worker`` consumes.
"""

from __future__ import annotations

import base64

import httpx

from paddydx.broker.queue import Envelope, Lease
from paddydx.errors import LeaseInvalid, NotFound, Unavailable


class RemoteBroker:
    def __init__(self, base_url: str, client: httpx.Client | None = None):
        self._client = client or httpx.Client(base_url=base_url, timeout=30.0)

    def _post(self, path: str, body: dict) -> httpx.Response:
        try:
            resp = self._client.post(path, json=body)
        except httpx.HTTPError as exc:
            raise Unavailable(f"gateway unreachable: {exc}") from None
        if resp.status_code == 404:
            raise NotFound(resp.text)
        if resp.status_code == 409:
            raise LeaseInvalid(resp.text)
        resp.raise_for_status()
        return resp

    def declare_queue(self, name: str, durable: bool = False) -> str:
        self._post("/internal/broker/declare", {"queue": name, "durable": durable})
        return name

    def publish(self, queue: str, payload: bytes) -> str:
        resp = self._post(
            "/internal/broker/publish",
            {"queue": queue, "payload_b64": base64.b64encode(payload).decode("ascii")},
        )
        return resp.json()["message_id"]

    def consume(
        self,
        queue: str,
        consumer_id: str,
        lease_duration: float = 30.0,
        timeout: float = 0.0,
    ) -> tuple[Envelope, Lease] | None:
        resp = self._post(
            "/internal/broker/consume",
            {
                "queue": queue,
                "consumer_id": consumer_id,
                "lease_duration": lease_duration,
                "timeout": timeout,
            },
        )
        if resp.status_code == 204:
            return None
        doc = resp.json()
        env = doc["envelope"]
        envelope = Envelope(
            message_id=env["message_id"],
            queue=env["queue"],
            payload=base64.b64decode(env["payload_b64"]),
            delivery_count=env["delivery_count"],
            enqueued_at=env["enqueued_at"],
        )
        lease = Lease(
            lease_id=doc["lease_id"],
            message_id=envelope.message_id,
            queue=envelope.queue,
            consumer_id=consumer_id,
            expires_at=0.0,  # expiry is tracked by the gateway process
        )
        return envelope, lease

    def ack(self, lease: Lease) -> None:
        self._post("/internal/broker/ack", {"lease_id": lease.lease_id})

    def nack(self, lease: Lease, requeue: bool = True) -> None:
        self._post("/internal/broker/nack", {"lease_id": lease.lease_id, "requeue": requeue})

    @property
    def closed(self) -> bool:
        return False


class RemoteBlobs:
    def __init__(self, base_url: str, client: httpx.Client | None = None):
        self._client = client or httpx.Client(base_url=base_url, timeout=30.0)

    def get(self, digest: str) -> bytes:
        resp = self._client.get(f"/internal/blobs/{digest}")
        if resp.status_code == 404:
            raise NotFound(f"no blob with digest {digest}")
        resp.raise_for_status()
        return resp.content
