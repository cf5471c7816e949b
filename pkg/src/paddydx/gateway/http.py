"""HTTP surface of the gateway (JSON over FastAPI, bearer-token auth).

Public routes implement the farmer-facing contract; ``/internal/...``
routes expose the embedded broker and blob store so workers can run in
separate processes. Internal routes are meant for the operator network
and carry no user auth.
"""

from __future__ import annotations

import base64
import threading

from fastapi import FastAPI, File, Form, Header, Request, UploadFile
from fastapi.responses import JSONResponse, Response

from paddydx.broker.queue import Lease
from paddydx.core.geometry import GeoPoint
from paddydx.errors import (
    Conflict,
    Forbidden,
    InvalidInput,
    LeaseInvalid,
    NotFound,
    PaddydxError,
    PayloadTooLarge,
    Unauthorized,
    Unavailable,
    Unsupported,
    UnsupportedMedia,
)
from paddydx.gateway.service import GatewayService

_STATUS_CODES = [
    (Unauthorized, 401),
    (Forbidden, 403),
    (NotFound, 404),
    (Conflict, 409),
    (LeaseInvalid, 409),
    (PayloadTooLarge, 413),
    (UnsupportedMedia, 415),
    (Unavailable, 503),
    (InvalidInput, 400),
    (Unsupported, 400),
]


def _status_for(exc: PaddydxError) -> int:
    for klass, code in _STATUS_CODES:
        if isinstance(exc, klass):
            return code
    return 500


def _bearer(authorization: str | None) -> str | None:
    if authorization and authorization.startswith("Bearer "):
        return authorization[len("Bearer ") :]
    return None


def create_app(service: GatewayService) -> FastAPI:
    app = FastAPI(title="paddydx gateway")
    leases: dict[str, Lease] = {}
    leases_lock = threading.Lock()

    @app.exception_handler(PaddydxError)
    async def _platform_error(_req: Request, exc: PaddydxError):
        return JSONResponse(status_code=_status_for(exc), content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    # -- auth ---------------------------------------------------------------

    @app.post("/auth/register", status_code=201)
    async def register(body: dict):
        user_id = service.register(body.get("username", ""), body.get("password", ""))
        return {"user_id": user_id}

    @app.post("/auth/login")
    async def login(body: dict):
        token = service.login(body.get("username", ""), body.get("password", ""))
        return {"token": token, "token_type": "bearer"}

    # -- uploads / jobs -------------------------------------------------------

    @app.post("/images", status_code=201)
    async def upload_image(
        file: UploadFile = File(...),
        lat: float | None = Form(None),
        lon: float | None = Form(None),
        authorization: str | None = Header(None),
    ):
        data = await file.read()
        geo = None
        if lat is not None and lon is not None:
            geo = GeoPoint(latitude=lat, longitude=lon)
        elif (lat is None) != (lon is None):
            raise InvalidInput("lat and lon must be provided together")
        upload_id = service.upload_image(_bearer(authorization), data, geo=geo)
        return {"upload_id": upload_id}

    @app.post("/jobs", status_code=202)
    async def create_job(body: dict, authorization: str | None = Header(None)):
        job_id = service.create_job(
            _bearer(authorization),
            upload_id=body.get("upload_id", ""),
            task_kind=body.get("task_kind", ""),
            verify=bool(body.get("verify", False)),
            conf_threshold=body.get("conf_threshold"),
            nms_iou=body.get("nms_iou"),
        )
        return {"job_id": job_id}

    @app.get("/jobs/{job_id}")
    async def job_status(job_id: str, authorization: str | None = Header(None)):
        return service.job_status(_bearer(authorization), job_id)

    @app.get("/jobs/{job_id}/result")
    async def job_result(job_id: str, authorization: str | None = Header(None)):
        try:
            return service.get_result(_bearer(authorization), job_id)
        except Conflict as exc:
            return JSONResponse(
                status_code=409,
                content={"detail": "result not ready", "status": str(exc)},
            )

    # -- outbreaks / treatments -------------------------------------------------

    @app.get("/outbreaks")
    async def outbreaks(
        min_lat: float,
        min_lon: float,
        max_lat: float,
        max_lon: float,
        since: float = 0.0,
        authorization: str | None = Header(None),
    ):
        return service.list_outbreaks(
            _bearer(authorization), min_lat, min_lon, max_lat, max_lon, since
        )

    @app.get("/treatments/{slug}")
    async def treatment(slug: str):
        return service.treatment(slug)

    # -- internal: broker + blobs for out-of-process workers ------------------------

    @app.post("/internal/broker/declare")
    async def broker_declare(body: dict):
        service.broker.declare_queue(body["queue"], durable=bool(body.get("durable", False)))
        return {"queue": body["queue"]}

    @app.post("/internal/broker/publish")
    async def broker_publish(body: dict):
        payload = base64.b64decode(body["payload_b64"])
        message_id = service.broker.publish(body["queue"], payload)
        return {"message_id": message_id}

    @app.post("/internal/broker/consume")
    async def broker_consume(body: dict):
        item = service.broker.consume(
            body["queue"],
            body.get("consumer_id", "remote"),
            lease_duration=float(body.get("lease_duration", 30.0)),
            timeout=min(float(body.get("timeout", 0.0)), 25.0),
        )
        if item is None:
            return Response(status_code=204)
        envelope, lease = item
        with leases_lock:
            leases[lease.lease_id] = lease
        return {
            "envelope": {
                "message_id": envelope.message_id,
                "queue": envelope.queue,
                "payload_b64": base64.b64encode(envelope.payload).decode("ascii"),
                "delivery_count": envelope.delivery_count,
                "enqueued_at": envelope.enqueued_at,
            },
            "lease_id": lease.lease_id,
        }

    def _take_lease(lease_id: str) -> Lease:
        with leases_lock:
            lease = leases.pop(lease_id, None)
        if lease is None:
            raise LeaseInvalid(f"unknown lease id: {lease_id}")
        return lease

    @app.post("/internal/broker/ack", status_code=204)
    async def broker_ack(body: dict):
        service.broker.ack(_take_lease(body["lease_id"]))
        return Response(status_code=204)

    @app.post("/internal/broker/nack", status_code=204)
    async def broker_nack(body: dict):
        service.broker.nack(_take_lease(body["lease_id"]), requeue=bool(body.get("requeue", True)))
        return Response(status_code=204)

    @app.get("/internal/blobs/{digest}")
    async def blob(digest: str):
        return Response(content=service.blobs.get(digest), media_type="application/octet-stream")

    return app
