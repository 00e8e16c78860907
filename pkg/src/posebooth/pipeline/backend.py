"""Generation backends: the wire protocol client and a deterministic mock.

The wire format is documented in docs/backend-protocol.md; any inference
server speaking it can be dropped in. The mock regenerates images as a pure
function of (style image, pose, seed) so end-to-end tests are byte-stable.
"""

from __future__ import annotations

import base64
import colorsys
import io
import itertools
import threading
from typing import Protocol

import httpx
from PIL import Image

from ..pose.model import PoseSkeleton, pose_from_dict
from ..pose.render import render_skeleton
from .request import GenerationRequest

MOCK_TINT_ALPHA = 0.25


class BackendError(Exception):
    """Base class for backend failures."""


class BackendTransportError(BackendError):
    """Backend unreachable or timed out; retryable."""


class BackendRejectedError(BackendError):
    """Backend refused the request; permanent for this job."""


class GenerationBackend(Protocol):
    """delivery declares how completions arrive: inline, webhook, or poll."""

    delivery: str

    def submit(self, payload: dict) -> str: ...

    def poll(self, job_id: str) -> dict | None: ...


def _seed_tint(seed: int) -> tuple[int, int, int]:
    # Knuth multiplicative hash spreads consecutive seeds across the hue wheel.
    hue = (seed * 2654435761 % 2**32) / 2**32
    r, g, b = colorsys.hsv_to_rgb(hue, 0.6, 1.0)
    return (round(r * 255), round(g * 255), round(b * 255))


def generate_from_payload(payload: dict) -> bytes:
    """Deterministic stand-in for a diffusion backend, driven by the wire payload.

    The style image is resampled to the requested size, tinted by a
    seed-derived hue, and the pose skeleton is composited on top.
    """
    size = (int(payload["width"]), int(payload["height"]))
    style_image = base64.b64decode(payload["style_image"])
    skel = pose_from_dict(payload["pose"])
    seed = int(payload["seed"])

    with Image.open(io.BytesIO(style_image)) as img:
        base = img.convert("RGB").resize(size, Image.NEAREST)
    tint = Image.new("RGB", size, _seed_tint(seed))
    blended = Image.blend(base, tint, MOCK_TINT_ALPHA).convert("RGBA")
    overlay = render_skeleton(skel, size)
    composed = Image.alpha_composite(blended, overlay).convert("RGB")

    buf = io.BytesIO()
    composed.save(buf, format="PNG")
    return buf.getvalue()


def mock_generate(req: GenerationRequest) -> bytes:
    """Image the mock backend would produce for this request."""
    return generate_from_payload(req.to_payload())


class MockGenerationBackend:
    """In-process backend: jobs complete synchronously with zero latency."""

    delivery = "inline"

    def __init__(self):
        self._counter = itertools.count(1)
        self._completions: dict[str, dict] = {}
        self._lock = threading.Lock()

    def submit(self, payload: dict) -> str:
        image = generate_from_payload(payload)
        with self._lock:
            job_id = f"mock-{next(self._counter)}"
            self._completions[job_id] = {
                "job_id": job_id,
                "status": "succeeded",
                "image": base64.b64encode(image).decode("ascii"),
                "error": None,
            }
        return job_id

    def poll(self, job_id: str) -> dict | None:
        with self._lock:
            return self._completions.get(job_id)


class HttpGenerationBackend:
    """Client for an external generation service speaking the documented protocol."""

    def __init__(
        self,
        url: str,
        webhook_url: str | None = None,
        timeout: float = 30.0,
        client: httpx.Client | None = None,
    ):
        self.url = url.rstrip("/")
        self.webhook_url = webhook_url
        self.delivery = "webhook" if webhook_url else "poll"
        self._client = client or httpx.Client(timeout=timeout)

    def submit(self, payload: dict) -> str:
        body = dict(payload)
        if self.webhook_url:
            body["webhook_url"] = self.webhook_url
        try:
            response = self._client.post(self.url, json=body)
        except (httpx.TransportError, httpx.TimeoutException) as exc:
            raise BackendTransportError(f"generation backend unreachable: {exc}") from exc
        if response.status_code >= 500:
            raise BackendTransportError(f"generation backend returned {response.status_code}")
        if response.status_code >= 400:
            raise BackendRejectedError(
                f"generation backend rejected request: {response.status_code} {response.text[:200]}"
            )
        job_id = response.json().get("job_id")
        if not job_id:
            raise BackendRejectedError("generation backend response missing job_id")
        return str(job_id)

    def poll(self, job_id: str) -> dict | None:
        try:
            response = self._client.get(f"{self.url}/{job_id}")
        except (httpx.TransportError, httpx.TimeoutException) as exc:
            raise BackendTransportError(f"generation backend unreachable: {exc}") from exc
        if response.status_code >= 400:
            raise BackendError(f"job status query failed: {response.status_code}")
        payload = response.json()
        if payload.get("status") == "pending":
            return None
        return payload
