"""Pluggable post-processing chain applied to raw generator output.

Default chain: two 2x upscales followed by an identity face enhancer, so
the final image has 4x the linear dimensions of the generator output.
External upscaler/enhancer services can replace any stage.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from typing import Protocol, Sequence

import httpx
from PIL import Image

logger = logging.getLogger(__name__)


class Stage(Protocol):
    name: str

    def apply(self, image: bytes) -> bytes: ...


class Upscale2x:
    """Built-in nearest-neighbor 2x resampler."""

    name = "upscale2x"

    def apply(self, image: bytes) -> bytes:
        with Image.open(io.BytesIO(image)) as img:
            img.load()
            resized = img.resize((img.width * 2, img.height * 2), Image.NEAREST)
        buf = io.BytesIO()
        resized.save(buf, format="PNG")
        return buf.getvalue()


class IdentityFaceEnhance:
    """Placeholder face enhancer: returns its input byte-identically."""

    name = "face-enhance"

    def apply(self, image: bytes) -> bytes:
        return image


class HttpImageStage:
    """Adapter for an external image-to-image service (upscaler, enhancer)."""

    def __init__(self, name: str, url: str, timeout: float = 60.0, client: httpx.Client | None = None):
        self.name = name
        self.url = url
        self._client = client or httpx.Client(timeout=timeout)

    def apply(self, image: bytes) -> bytes:
        response = self._client.post(
            self.url, content=image, headers={"Content-Type": "application/octet-stream"}
        )
        response.raise_for_status()
        return response.content


def default_stages() -> list[Stage]:
    return [Upscale2x(), Upscale2x(), IdentityFaceEnhance()]


@dataclass(frozen=True)
class PostprocessResult:
    image: bytes
    degraded: bool = False
    failed_stage: str | None = None


def postprocess(image: bytes, stages: Sequence[Stage]) -> PostprocessResult:
    """Run the stage chain; a stage failure finalizes with the pre-failure image."""
    current = image
    for stage in stages:
        try:
            current = stage.apply(current)
        except Exception as exc:
            logger.warning("post-processing stage %s failed: %s", stage.name, exc)
            return PostprocessResult(image=current, degraded=True, failed_stage=stage.name)
    return PostprocessResult(image=current)


def image_dimensions(image: bytes) -> tuple[int, int]:
    with Image.open(io.BytesIO(image)) as img:
        return img.size
