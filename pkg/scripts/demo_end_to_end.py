#!/usr/bin/env python3
"""Run the whole platform in one process and push a diagnosis through it.

Spins up the embedded broker, the gateway service, and a small worker pool
on the heuristic backend; registers a user, uploads a synthetic leaf image
with a saturated lesion patch, runs a detection job with two-stage
verification, and prints the diagnosis with treatment advice and the
resulting outbreak map entry.
"""

from __future__ import annotations

import sys
import tempfile
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from paddydx.broker.queue import Broker
from paddydx.core.geometry import GeoPoint
from paddydx.core.image import RasterImage, encode_png
from paddydx.gateway.service import GatewayConfig, GatewayService
from paddydx.inference.heuristic import HeuristicBackend
from paddydx.orchestrator.master import BackendRegistry, MasterConfig, start_master


def leaf_image(rng) -> bytes:
    pixels = np.zeros((128, 128, 3), dtype=np.uint8)
    pixels[:, :, 1] = rng.integers(70, 110, size=(128, 128))  # leafy green base
    pixels[40:80, 30:90] = (190, 80, 20)  # lesion-like saturated patch
    return encode_png(RasterImage(pixels))


def main() -> int:
    rng = np.random.default_rng(7)
    with tempfile.TemporaryDirectory() as tmp:
        broker = Broker()
        service = GatewayService(GatewayConfig(data_dir=Path(tmp)), broker)
        service.start_consumers()
        registry = BackendRegistry()
        registry.register("heuristic", HeuristicBackend)
        master = start_master(
            broker,
            registry,
            service.blobs,
            MasterConfig(
                pool_sizes={"classification": 1, "detection": 1},
                backend_ids={"classification": "heuristic", "detection": "heuristic"},
                heartbeat_interval=0.2,
                poll_timeout=0.05,
            ),
        )
        try:
            service.register("demo_farmer", "demo-password")
            token = service.login("demo_farmer", "demo-password")
            upload_id = service.upload_image(
                token, leaf_image(rng), geo=GeoPoint(27.7, 85.3)
            )
            job_id = service.create_job(token, upload_id, "detection", verify=True)
            print(f"job {job_id} submitted")

            deadline = time.monotonic() + 20.0
            while time.monotonic() < deadline:
                status = service.job_status(token, job_id)["status"]
                print(f"  status: {status}")
                if status in ("done", "failed"):
                    break
                time.sleep(0.25)

            result = service.get_result(token, job_id)
            print(f"backend: {result['backend_id']}")
            for det in result["detections"]:
                box = det["box"]
                print(
                    f"  {det['class_slug']}  conf={det['confidence']:.2f} "
                    f"[{det['status']}]  at ({box['cx']:.2f}, {box['cy']:.2f})"
                )
            for treatment in result["treatments"]:
                print(f"treatment for {treatment['slug']}: {treatment['summary']}")
                for action in treatment["actions"]:
                    print(f"  - {action}")
            outbreaks = service.list_outbreaks(token, -90, -180, 90, 180)
            print(f"outbreaks on the map: {outbreaks}")
        finally:
            master.stop()
            service.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
