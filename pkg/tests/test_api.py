import base64
import io
import itertools
import json
import threading
import time

import pytest
from PIL import Image

from posebooth.api.app import sign_payload
from posebooth.pipeline.backend import BackendTransportError
from posebooth.pose.extract import ExtractionContext, NoPoseFoundError, StubPoseExtractor
from posebooth.pose.model import parse_pose
from posebooth.store import scan_for_bytes

SENTINEL = b"\xde\xadCAPTURE-SENTINEL-7f9a\xbe\xef"


def png_bytes(size=(16, 16), color=(10, 20, 30)) -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", size, color).save(buf, format="PNG")
    return buf.getvalue()


class WebhookStyleBackend:
    delivery = "webhook"

    def __init__(self):
        self._counter = itertools.count(1)
        self.submitted = []

    def submit(self, payload):
        self.submitted.append(payload)
        return f"job-{next(self._counter)}"

    def poll(self, job_id):
        return None


class TestKioskEndpoints:
    def test_full_scripted_walk(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        assert client.get("/feed").json()["new_count"] == 0
        response = walk_session(client, clock)
        assert response["code"]
        assert response["job_id"]
        feed = client.get("/feed").json()
        assert feed["new_count"] == 1
        assert feed["entries"][0]["booth"] == "public"

    def test_select_in_consent_phase_is_409(self, make_app):
        app, client, clock, cfg = make_app()
        response = client.post("/station/pub-1/select", json={"artwork_id": "fga-lake-dusk"})
        assert response.status_code == 409
        assert response.json()["error"] == "illegal_phase"
        assert response.json()["phase"] == "consent"

    def test_capture_before_countdown_is_409(self, make_app):
        app, client, clock, cfg = make_app()
        client.post("/station/pub-1/consent")
        response = client.post("/station/pub-1/capture", content=b"bytes")
        assert response.status_code == 409

    def test_unknown_station_404(self, make_app):
        app, client, clock, cfg = make_app()
        assert client.get("/station/ghost/status").status_code == 404

    def test_unknown_artwork_404(self, make_app):
        app, client, clock, cfg = make_app()
        client.post("/station/pub-1/consent")
        response = client.post("/station/pub-1/select", json={"artwork_id": "nope"})
        assert response.status_code == 404

    def test_oversized_capture_is_413(self, make_app, walk_session):
        app, client, clock, cfg = make_app(upload_limit_bytes=1024)
        client.post("/station/pub-1/consent")
        gallery = client.get("/station/pub-1/catalog").json()
        client.post("/station/pub-1/select", json={"artwork_id": gallery["entries"][0]["id"]})
        client.post("/station/pub-1/start")
        clock.advance(10.0)
        response = client.post("/station/pub-1/capture", content=b"x" * 2048)
        assert response.status_code == 413

    def test_sentinel_capture_never_persisted(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        walk_session(client, clock, capture=SENTINEL)
        app.state.log.flush()
        assert scan_for_bytes(cfg.store_dir, SENTINEL) == 0

    def test_status_view_tracks_countdown(self, make_app):
        app, client, clock, cfg = make_app()
        client.post("/station/pub-1/consent")
        gallery = client.get("/station/pub-1/catalog").json()
        client.post("/station/pub-1/select", json={"artwork_id": gallery["entries"][0]["id"]})
        client.post("/station/pub-1/start")
        clock.advance(5.8)
        status = client.get("/station/pub-1/status").json()
        assert status["phase"] == "countdown"
        assert status["seconds_remaining"] == 4
        assert status["camera_active"]

    def test_auto_reset_after_sixty_seconds(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        walk_session(client, clock)
        assert client.get("/station/pub-1/status").json()["phase"] == "submitted"
        clock.advance(60.0)
        assert client.get("/station/pub-1/status").json()["phase"] == "consent"

    def test_catalog_endpoint_lists_servable_artworks(self, make_app):
        app, client, clock, cfg = make_app()
        client.post("/station/pub-1/consent")
        entries = client.get("/station/pub-1/catalog").json()["entries"]
        assert len(entries) == 4
        image = client.get(entries[0]["image_url"])
        assert image.status_code == 200

    def test_result_endpoints_serve_image_and_pose(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        walk_session(client, clock)
        entry = client.get("/feed").json()["entries"][0]
        image = client.get(entry["image_url"])
        assert image.status_code == 200
        assert image.headers["content-type"] == "image/png"
        pose = client.get(entry["pose_url"])
        assert pose.status_code == 200
        assert parse_pose(pose.text).persons

    def test_healthz(self, make_app):
        app, client, clock, cfg = make_app()
        body = client.get("/healthz").json()
        assert body["status"] == "ok"
        assert body["stations"] == 2


class TestPoseRetryFlow:
    class FlakyExtractor:
        """No pose on the first n calls, then the canonical stub."""

        def __init__(self, failures: int):
            self.failures = failures
            self.calls = 0
            self._stub = StubPoseExtractor()

        def extract(self, image, context):
            self.calls += 1
            if self.calls <= self.failures:
                raise NoPoseFoundError("nobody in frame")
            return self._stub.extract(image, context)

    def _to_capturing(self, client, clock, station="pub-1"):
        client.post(f"/station/{station}/consent")
        gallery = client.get(f"/station/{station}/catalog").json()
        client.post(f"/station/{station}/select", json={"artwork_id": gallery["entries"][0]["id"]})
        client.post(f"/station/{station}/start")
        clock.advance(10.0)
        client.get(f"/station/{station}/status")

    def test_two_retry_prompts_then_success(self, make_app):
        app, client, clock, cfg = make_app(extractor=self.FlakyExtractor(failures=2))
        self._to_capturing(client, clock)
        first = client.post("/station/pub-1/capture", content=b"frame")
        assert first.status_code == 422
        assert first.json() == {"error": "no_pose_found", "retries_used": 1}
        second = client.post("/station/pub-1/capture", content=b"frame")
        assert second.status_code == 422
        assert second.json()["retries_used"] == 2
        third = client.post("/station/pub-1/capture", content=b"frame")
        assert third.status_code == 200
        pose_doc = client.get(
            client.get("/feed").json()["entries"][0]["pose_url"]
        ).text
        assert len(parse_pose(pose_doc).persons) == 1

    def test_pose_free_after_two_failed_retries(self, make_app):
        app, client, clock, cfg = make_app(extractor=self.FlakyExtractor(failures=99))
        self._to_capturing(client, clock)
        assert client.post("/station/pub-1/capture", content=b"f").status_code == 422
        assert client.post("/station/pub-1/capture", content=b"f").status_code == 422
        third = client.post("/station/pub-1/capture", content=b"f")
        assert third.status_code == 200
        pose_doc = client.get(client.get("/feed").json()["entries"][0]["pose_url"]).text
        assert parse_pose(pose_doc).persons == ()


class TestBackendFailure:
    class DeadBackend:
        delivery = "webhook"

        def submit(self, payload):
            raise BackendTransportError("connection refused")

        def poll(self, job_id):
            return None

    def test_unreachable_backend_is_503_with_failure_banner(self, make_app):
        app, client, clock, cfg = make_app(backend=self.DeadBackend())
        app.state.pipeline._sleep = lambda s: None
        client.post("/station/pub-1/consent")
        gallery = client.get("/station/pub-1/catalog").json()
        client.post("/station/pub-1/select", json={"artwork_id": gallery["entries"][0]["id"]})
        client.post("/station/pub-1/start")
        clock.advance(10.0)
        client.get("/station/pub-1/status")
        response = client.post("/station/pub-1/capture", content=b"frame")
        assert response.status_code == 503
        assert response.json()["error"] == "backend_unreachable"
        status = client.get("/station/pub-1/status").json()
        assert status["error_banner"]


class TestWebhook:
    def _submitted_job(self, make_app):
        backend = WebhookStyleBackend()
        app, client, clock, cfg = make_app(backend=backend)
        client.post("/station/pub-1/consent")
        gallery = client.get("/station/pub-1/catalog").json()
        client.post("/station/pub-1/select", json={"artwork_id": gallery["entries"][0]["id"]})
        client.post("/station/pub-1/start")
        clock.advance(10.0)
        client.get("/station/pub-1/status")
        capture = client.post("/station/pub-1/capture", content=b"frame").json()
        return app, client, cfg, capture["job_id"]

    def _completion_body(self, job_id):
        return json.dumps(
            {
                "job_id": job_id,
                "status": "succeeded",
                "image": base64.b64encode(png_bytes()).decode(),
                "error": None,
            }
        ).encode()

    def _post(self, client, cfg, body, signature=None):
        headers = {"Content-Type": "application/json"}
        if signature is not None:
            headers["X-Signature"] = signature
        return client.post("/webhook/generation", content=body, headers=headers)

    def test_valid_first_delivery_persists(self, make_app):
        app, client, cfg, job_id = self._submitted_job(make_app)
        body = self._completion_body(job_id)
        response = self._post(client, cfg, body, sign_payload(cfg.webhook_secret, body))
        assert response.status_code == 200
        assert response.json()["ok"]
        assert client.get("/feed").json()["new_count"] == 1
        status = client.get("/station/pub-1/status").json()
        assert status["phase"] == "submitted"

    def test_redelivery_is_idempotent(self, make_app):
        app, client, cfg, job_id = self._submitted_job(make_app)
        body = self._completion_body(job_id)
        signature = sign_payload(cfg.webhook_secret, body)
        first = self._post(client, cfg, body, signature).json()
        second = self._post(client, cfg, body, signature).json()
        assert second["result_id"] == first["result_id"]
        assert second["duplicate"]
        assert client.get("/feed").json()["new_count"] == 1

    def test_tampered_payload_rejected(self, make_app):
        app, client, cfg, job_id = self._submitted_job(make_app)
        body = self._completion_body(job_id)
        signature = sign_payload(cfg.webhook_secret, body)
        tampered = body[:-5] + b"X" + body[-4:]
        assert self._post(client, cfg, tampered, signature).status_code == 401

    def test_missing_signature_rejected(self, make_app):
        app, client, cfg, job_id = self._submitted_job(make_app)
        assert self._post(client, cfg, self._completion_body(job_id)).status_code == 401

    def test_malformed_payload_is_400(self, make_app):
        app, client, cfg, job_id = self._submitted_job(make_app)
        body = b"{not json"
        response = self._post(client, cfg, body, sign_payload(cfg.webhook_secret, body))
        assert response.status_code == 400

    def test_unknown_job_is_404(self, make_app):
        app, client, cfg, job_id = self._submitted_job(make_app)
        body = self._completion_body("job-unknown")
        response = self._post(client, cfg, body, sign_payload(cfg.webhook_secret, body))
        assert response.status_code == 404

    def test_no_unsigned_payload_reaches_finalize(self, make_app):
        import random

        app, client, cfg, job_id = self._submitted_job(make_app)
        calls = []
        original = app.state.pipeline.finalize
        app.state.pipeline.finalize = lambda payload: calls.append(payload) or original(payload)
        rng = random.Random(9)
        for _ in range(50):
            body = bytes(rng.randrange(256) for _ in range(rng.randrange(1, 200)))
            signature = "".join(rng.choice("0123456789abcdef") for _ in range(64))
            response = self._post(client, cfg, body, rng.choice([None, signature, ""]))
            assert response.status_code == 401
        assert calls == []


class TestFeedEndpoint:
    def test_timeout_window_returns_empty(self, make_app):
        app, client, clock, cfg = make_app()
        start = time.monotonic()
        body = client.get("/feed", params={"cursor": "0", "timeout": 0.2}).json()
        assert time.monotonic() - start >= 0.15
        assert body["new_count"] == 0

    def test_parked_poll_wakes_on_append(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        results = {}

        def poll():
            results["body"] = client.get("/feed", params={"cursor": "0", "timeout": 10}).json()
            results["woke_at"] = time.monotonic()

        poller = threading.Thread(target=poll)
        poller.start()
        time.sleep(0.15)  # let the poller park
        walk_session(client, clock)
        append_time = time.monotonic()
        poller.join(timeout=5)
        assert results["body"]["new_count"] == 1
        assert results["woke_at"] - append_time < 0.2

    def test_two_viewers_receive_the_same_entry(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        outputs = []

        def poll():
            outputs.append(client.get("/feed", params={"cursor": "0", "timeout": 10}).json())

        threads = [threading.Thread(target=poll) for _ in range(2)]
        for t in threads:
            t.start()
        time.sleep(0.15)
        walk_session(client, clock)
        for t in threads:
            t.join(timeout=5)
        assert len(outputs) == 2
        ids = {tuple(e["result_id"] for e in body["entries"]) for body in outputs}
        assert len(ids) == 1

    def test_booth_filter_hides_private_entries(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        walk_session(client, clock, station="priv-1")
        assert client.get("/feed", params={"booth": "public"}).json()["new_count"] == 0
        private = client.get("/feed", params={"booth": "private"}).json()
        assert private["new_count"] == 1
        assert private["entries"][0]["booth"] == "private"

    def test_malformed_cursor_triggers_resync(self, make_app, walk_session):
        app, client, clock, cfg = make_app()
        walk_session(client, clock)
        body = client.get("/feed", params={"cursor": "bogus-id"}).json()
        assert body["resync"]
        assert body["new_count"] == 1

    def test_timeout_capped_by_config(self, make_app):
        app, client, clock, cfg = make_app(long_poll_timeout=1.0)
        start = time.monotonic()
        client.get("/feed", params={"cursor": "0", "timeout": 30})
        assert time.monotonic() - start < 2.0


class TestSingleOrigin:
    def test_static_ui_and_api_share_one_listener(self, make_app, tmp_path):
        static = tmp_path / "ui-dist"
        static.mkdir()
        (static / "index.html").write_text("<html><body>kiosk</body></html>")
        app, client, clock, cfg = make_app(static_dir=static)
        page = client.get("/ui/")
        assert page.status_code == 200
        assert "kiosk" in page.text
        assert client.get("/healthz").status_code == 200


class TestConfig:
    def test_webhook_secret_required_outside_test_mode(self, make_config):
        with pytest.raises(ValueError):
            make_config(webhook_secret="", test_mode=False)
        cfg = make_config(webhook_secret="", test_mode=True)
        assert cfg.code_hash_secret  # falls back to a non-empty default

    def test_long_poll_timeout_bounds(self, make_config):
        with pytest.raises(ValueError):
            make_config(long_poll_timeout=0.0)
        with pytest.raises(ValueError):
            make_config(long_poll_timeout=61.0)

    def test_station_booths_validated(self, make_config):
        with pytest.raises(ValueError):
            make_config(stations={"s1": "balcony"})
        with pytest.raises(ValueError):
            make_config(stations={})
