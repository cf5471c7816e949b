import random

import pytest

from conftest import one_hot_probs, random_image
from paddydx.broker.clock import ManualClock
from paddydx.broker.queue import Broker
from paddydx.core.geometry import GeoPoint, NormalizedBox
from paddydx.core.image import encode_png
from paddydx.core.taxonomy import class_index, detection_index
from paddydx.errors import (
    Conflict,
    Forbidden,
    InvalidInput,
    NotFound,
    PayloadTooLarge,
    Unauthorized,
    UnsupportedMedia,
)
from paddydx.gateway.service import GatewayConfig, GatewayService
from paddydx.inference.backends import ClassificationResult, Detection
from paddydx.messages import JOB_QUEUES, JobMessage, ResultMessage


@pytest.fixture
def clock():
    return ManualClock(start=1000.0)


@pytest.fixture
def service(tmp_path, clock):
    broker = Broker(clock=ManualClock())
    svc = GatewayService(
        GatewayConfig(data_dir=tmp_path / "data", token_ttl_seconds=3600.0),
        broker,
        clock=clock,
    )
    yield svc


@pytest.fixture
def png(rng):
    return encode_png(random_image(rng))


def make_user(service, name="farmer_one", password="secret-pass"):
    service.register(name, password)
    return service.login(name, password)


def detection_result(job_id, classes=("blast",), backend_id="fix"):
    dets = tuple(
        Detection(
            class_index=detection_index(slug),
            confidence=0.9,
            box=NormalizedBox(0.5, 0.5, 0.2, 0.2),
            status="kept",
        )
        for slug in classes
    )
    return ResultMessage(job_id=job_id, backend_id=backend_id, detections=dets)


class TestAuth:
    def test_register_then_login(self, service):
        token = make_user(service)
        assert service.job_status.__self__ is service  # smoke
        assert isinstance(token, str) and len(token) == 64

    def test_wrong_password_does_not_reveal_field(self, service):
        service.register("farmer_one", "secret-pass")
        with pytest.raises(Unauthorized) as by_password:
            service.login("farmer_one", "wrong-password")
        with pytest.raises(Unauthorized) as by_username:
            service.login("no_such_user", "secret-pass")
        assert str(by_password.value) == str(by_username.value)

    def test_duplicate_username_conflicts(self, service):
        service.register("farmer_one", "secret-pass")
        with pytest.raises(Conflict):
            service.register("farmer_one", "other-pass-123")

    def test_username_and_password_rules(self, service):
        with pytest.raises(InvalidInput):
            service.register("Bad Name", "secret-pass")
        with pytest.raises(InvalidInput):
            service.register("ok_name", "short")

    def test_token_expiry(self, service, clock, png):
        token = make_user(service)
        clock.advance(3601.0)
        with pytest.raises(Unauthorized):
            service.upload_image(token, png)


class TestUploads:
    def test_valid_png_stored_content_addressed(self, service, png):
        import hashlib

        token = make_user(service)
        upload_id = service.upload_image(token, png)
        assert service.blobs.get(hashlib.sha256(png).hexdigest()) == png
        assert upload_id

    def test_duplicate_bytes_reuse_blob(self, service, png, tmp_path):
        token = make_user(service)
        a = service.upload_image(token, png)
        b = service.upload_image(token, png)
        assert a != b
        blob_files = [p for p in service.blobs.root.iterdir() if p.is_file()]
        assert len(blob_files) == 1

    def test_text_file_rejected(self, service):
        token = make_user(service)
        with pytest.raises(UnsupportedMedia):
            service.upload_image(token, b"just some text, not an image")

    def test_oversize_rejected(self, tmp_path, clock, png):
        broker = Broker(clock=ManualClock())
        small = GatewayService(
            GatewayConfig(data_dir=tmp_path / "d", max_upload_bytes=10),
            broker,
            clock=clock,
        )
        token = make_user(small)
        with pytest.raises(PayloadTooLarge):
            small.upload_image(token, png)

    def test_requires_token(self, service, png):
        with pytest.raises(Unauthorized):
            service.upload_image("bogus", png)


class TestJobs:
    def test_create_job_publishes_message(self, service, png):
        token = make_user(service)
        upload_id = service.upload_image(token, png)
        job_id = service.create_job(token, upload_id, "detection", verify=True)
        assert service.job_status(token, job_id)["status"] == "queued"
        item = service.broker.consume(JOB_QUEUES["detection"], "t", lease_duration=5.0)
        assert item is not None
        msg = JobMessage.decode(item[0].payload)
        assert msg.job_id == job_id and msg.verify is True

    def test_foreign_upload_forbidden(self, service, png):
        token_a = make_user(service, "farmer_one")
        token_b = make_user(service, "farmer_two")
        upload_id = service.upload_image(token_a, png)
        with pytest.raises(Forbidden):
            service.create_job(token_b, upload_id, "detection")

    def test_unknown_upload(self, service):
        token = make_user(service)
        with pytest.raises(NotFound):
            service.create_job(token, "missing", "detection")

    def test_result_not_ready_conflicts_with_status(self, service, png):
        token = make_user(service)
        upload_id = service.upload_image(token, png)
        job_id = service.create_job(token, upload_id, "detection")
        with pytest.raises(Conflict) as exc:
            service.get_result(token, job_id)
        assert str(exc.value) == "queued"

    def test_foreign_job_forbidden(self, service, png):
        token_a = make_user(service, "farmer_one")
        token_b = make_user(service, "farmer_two")
        upload_id = service.upload_image(token_a, png)
        job_id = service.create_job(token_a, upload_id, "detection")
        with pytest.raises(Forbidden):
            service.job_status(token_b, job_id)
        with pytest.raises(Forbidden):
            service.get_result(token_b, job_id)


class TestResultApplication:
    def _job(self, service, png, token=None, geo=None):
        token = token or make_user(service)
        upload_id = service.upload_image(token, png, geo=geo)
        job_id = service.create_job(token, upload_id, "detection")
        return token, job_id

    def test_done_with_treatment_join(self, service, png):
        token, job_id = self._job(service, png)
        service.apply_result(detection_result(job_id, classes=("blast", "tungro")))
        result = service.get_result(token, job_id)
        slugs = {t["slug"] for t in result["treatments"]}
        assert slugs == {"blast", "tungro"}
        assert service.job_status(token, job_id)["status"] == "done"

    def test_duplicate_result_applied_once(self, service, png):
        token, job_id = self._job(service, png)
        msg = detection_result(job_id)
        assert service.apply_result(msg) is True
        assert service.apply_result(msg) is False
        result = service.get_result(token, job_id)
        assert len(result["detections"]) == 1

    def test_processing_event_is_monotone(self, service, png):
        token, job_id = self._job(service, png)
        processing = ResultMessage(job_id=job_id, backend_id="fix", event="processing")
        assert service.apply_result(processing) is True
        assert service.job_status(token, job_id)["status"] == "processing"
        service.apply_result(detection_result(job_id))
        # late/duplicate progress events never regress a done job
        assert service.apply_result(processing) is False
        assert service.job_status(token, job_id)["status"] == "done"

    def test_error_marks_failed(self, service, png):
        token, job_id = self._job(service, png)
        service.apply_result(ResultMessage(job_id=job_id, backend_id="fix", error="boom"))
        status = service.job_status(token, job_id)
        assert status["status"] == "failed"
        assert status["error"] == "boom"

    def test_normal_only_classification_gets_healthy_entry(self, service, png):
        token = make_user(service)
        upload_id = service.upload_image(token, png)
        job_id = service.create_job(token, upload_id, "classification")
        msg = ResultMessage(
            job_id=job_id,
            backend_id="fix",
            classification=ClassificationResult.from_probs(
                one_hot_probs(class_index("normal"))
            ),
        )
        service.apply_result(msg)
        result = service.get_result(token, job_id)
        assert len(result["treatments"]) == 1
        assert result["treatments"][0]["slug"] == "normal"
        assert result["treatments"][0]["actions"] == []

    def test_unknown_job_result_dropped(self, service):
        assert service.apply_result(detection_result("ghost")) is False


class TestOutbreaks:
    def _geo_job(self, service, png, lat, lon, classes=("blast",), token=None):
        token = token or make_user(service)
        upload_id = service.upload_image(token, png, geo=GeoPoint(lat, lon))
        job_id = service.create_job(token, upload_id, "detection")
        service.apply_result(detection_result(job_id, classes=classes))
        return token

    def test_groups_counts_and_centroid(self, service, rng):
        token = make_user(service)
        points = [(10.0, 20.0), (11.0, 21.0), (12.0, 22.0)]
        for lat, lon in points:
            png = encode_png(random_image(rng))
            self._geo_job(service, png, lat, lon, token=token)
        groups = service.list_outbreaks(token, 0.0, 0.0, 30.0, 30.0)
        assert len(groups) == 1
        group = groups[0]
        assert group["class"] == "blast"
        assert group["count"] == 3
        assert group["centroid"]["latitude"] == pytest.approx(11.0)
        assert group["centroid"]["longitude"] == pytest.approx(21.0)

    def test_edge_point_included(self, service, png):
        token = self._geo_job(service, png, 10.0, 20.0)
        groups = service.list_outbreaks(token, 10.0, 20.0, 10.0, 20.0)
        assert groups and groups[0]["count"] == 1

    def test_window_filter(self, service, png, clock):
        token = self._geo_job(service, png, 10.0, 20.0)
        later = clock.now() + 100.0
        assert service.list_outbreaks(token, 0, 0, 30, 30, since=later) == []

    def test_geoless_uploads_produce_no_reports(self, service, png):
        token = make_user(service)
        upload_id = service.upload_image(token, png)
        job_id = service.create_job(token, upload_id, "detection")
        service.apply_result(detection_result(job_id))
        assert service.list_outbreaks(token, -90, -180, 90, 180) == []

    def test_normal_never_reports(self, service, png):
        token = make_user(service)
        upload_id = service.upload_image(token, png, geo=GeoPoint(1.0, 1.0))
        job_id = service.create_job(token, upload_id, "classification")
        service.apply_result(
            ResultMessage(
                job_id=job_id,
                backend_id="fix",
                classification=ClassificationResult.from_probs(
                    one_hot_probs(class_index("normal"))
                ),
            )
        )
        assert service.list_outbreaks(token, -90, -180, 90, 180) == []

    def test_inverted_rectangle_rejected(self, service):
        token = make_user(service)
        with pytest.raises(InvalidInput):
            service.list_outbreaks(token, 10.0, 0.0, 5.0, 20.0)


class TestTreatmentLookup:
    def test_known_slug(self, service):
        entry = service.treatment("blast")
        assert entry["slug"] == "blast" and entry["actions"]

    def test_unknown_slug(self, service):
        with pytest.raises(NotFound):
            service.treatment("rice_smut")


class TestAuthorizationIsolation:
    def test_interleaved_users_never_cross(self, service, rng):
        token_a = make_user(service, "farmer_one")
        token_b = make_user(service, "farmer_two")
        owned = {token_a: {"uploads": [], "jobs": []}, token_b: {"uploads": [], "jobs": []}}
        r = random.Random(7)
        for _ in range(60):
            token = token_a if r.random() < 0.5 else token_b
            other = token_b if token is token_a else token_a
            action = r.random()
            if action < 0.4 or not owned[token]["uploads"]:
                png = encode_png(random_image(rng))
                owned[token]["uploads"].append(service.upload_image(token, png))
            elif action < 0.7:
                upload_id = r.choice(owned[token]["uploads"])
                owned[token]["jobs"].append(service.create_job(token, upload_id, "detection"))
            elif owned[token]["jobs"]:
                job_id = r.choice(owned[token]["jobs"])
                assert service.job_status(token, job_id)["job_id"] == job_id
            # the other user must never see this user's resources
            if owned[token]["uploads"]:
                with pytest.raises(Forbidden):
                    service.create_job(other, r.choice(owned[token]["uploads"]), "detection")
            if owned[token]["jobs"]:
                with pytest.raises(Forbidden):
                    service.job_status(other, r.choice(owned[token]["jobs"]))


class TestPersistence:
    def test_records_survive_restart(self, tmp_path, clock, png):
        broker = Broker(clock=ManualClock())
        config = GatewayConfig(data_dir=tmp_path / "data")
        service = GatewayService(config, broker, clock=clock)
        token = make_user(service)
        upload_id = service.upload_image(token, png)
        job_id = service.create_job(token, upload_id, "detection")
        service.apply_result(detection_result(job_id))
        service.repo.close()

        reopened = GatewayService(config, Broker(clock=ManualClock()), clock=clock)
        token2 = reopened.login("farmer_one", "secret-pass")
        assert reopened.job_status(token2, job_id)["status"] == "done"
        assert reopened.get_result(token2, job_id)["job_id"] == job_id
