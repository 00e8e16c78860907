"""Pluggable pose extraction: an external-service client and a deterministic stub.

The stub makes end-to-end runs reproducible: its output is a pure function
of the seed carried in the extraction context, never of the image content.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Protocol

import httpx

from .model import (
    JOINT_NAMES,
    NUM_KEYPOINTS,
    Keypoint,
    Person,
    PoseParseError,
    PoseSkeleton,
)


class ExtractionError(Exception):
    """Base class for extraction failures."""


class TransportError(ExtractionError):
    """External extractor unreachable or timed out; safe to retry."""


class NoPoseFoundError(ExtractionError):
    """Extractor found no persons; the session offers a retry."""


# Canonical standing figure, arms hanging by the hips. Rated LOW by the
# dynamism codebook: no raised limbs, wrist span within shoulder span * 1.5.
CANONICAL_STANDING = (
    (0.50, 0.20),  # nose
    (0.50, 0.30),  # neck
    (0.42, 0.30),  # r_shoulder
    (0.40, 0.42),  # r_elbow
    (0.40, 0.54),  # r_wrist
    (0.58, 0.30),  # l_shoulder
    (0.60, 0.42),  # l_elbow
    (0.60, 0.54),  # l_wrist
    (0.45, 0.55),  # r_hip
    (0.44, 0.70),  # r_knee
    (0.44, 0.85),  # r_ankle
    (0.55, 0.55),  # l_hip
    (0.56, 0.70),  # l_knee
    (0.56, 0.85),  # l_ankle
    (0.48, 0.18),  # r_eye
    (0.52, 0.18),  # l_eye
    (0.46, 0.19),  # r_ear
    (0.54, 0.19),  # l_ear
)

assert len(CANONICAL_STANDING) == NUM_KEYPOINTS == len(JOINT_NAMES)


def canonical_standing_skeleton(capture_size: tuple[int, int] = (640, 480)) -> PoseSkeleton:
    person = Person(tuple(Keypoint(x, y, 1.0) for x, y in CANONICAL_STANDING))
    return PoseSkeleton(persons=(person,), capture_size=capture_size)


@dataclass(frozen=True)
class ExtractionContext:
    """Request-scoped extraction inputs; seed drives the stub."""

    capture_size: tuple[int, int] = (640, 480)
    seed: int = 0


class PoseExtractor(Protocol):
    """Implementations must be safe for concurrent calls."""

    def extract(self, image: bytes, context: ExtractionContext) -> PoseSkeleton: ...


class StubPoseExtractor:
    """Canonical standing skeleton, jittered as a pure function of the seed.

    Seed 0 returns the canonical skeleton exactly. ``always_empty`` simulates
    an extractor that never finds a person (retry-path testing).
    """

    def __init__(self, always_empty: bool = False):
        self.always_empty = always_empty

    def extract(self, image: bytes, context: ExtractionContext) -> PoseSkeleton:
        if not image:
            raise ExtractionError("empty capture image")
        if self.always_empty:
            raise NoPoseFoundError("stub configured to find no persons")
        if context.seed == 0:
            return canonical_standing_skeleton(context.capture_size)
        rng = random.Random(context.seed)
        jittered = tuple(
            Keypoint(
                min(1.0, max(0.0, x + rng.uniform(-0.05, 0.05))),
                min(1.0, max(0.0, y + rng.uniform(-0.05, 0.05))),
                1.0,
            )
            for x, y in CANONICAL_STANDING
        )
        return PoseSkeleton(persons=(Person(jittered),), capture_size=context.capture_size)


def parse_extractor_response(payload: dict, capture_size: tuple[int, int]) -> PoseSkeleton:
    """Normalize an external detector response into a skeleton.

    Expected payload: {"persons": [{"keypoints": [[x_px, y_px, c] * 18]}]}
    with pixel coordinates relative to the submitted capture.
    """
    raw_persons = payload.get("persons")
    if raw_persons is None:
        raise PoseParseError("extractor response missing field 'persons'")
    if not raw_persons:
        raise NoPoseFoundError("extractor found no persons")
    w, h = capture_size
    persons = []
    for raw in raw_persons:
        keypoints = []
        for x, y, c in raw["keypoints"]:
            if c > 0:
                keypoints.append(
                    Keypoint(min(1.0, max(0.0, x / w)), min(1.0, max(0.0, y / h)), float(c))
                )
            else:
                keypoints.append(Keypoint(0.0, 0.0, 0.0))
        persons.append(Person(tuple(keypoints)))
    return PoseSkeleton(persons=tuple(persons), capture_size=capture_size)


class HttpPoseExtractor:
    """Client for an external keypoint-detection service.

    POSTs the capture as the request body and expects the JSON shape
    accepted by parse_extractor_response.
    """

    def __init__(self, url: str, timeout: float = 10.0, client: httpx.Client | None = None):
        self.url = url
        self._client = client or httpx.Client(timeout=timeout)

    def extract(self, image: bytes, context: ExtractionContext) -> PoseSkeleton:
        if not image:
            raise ExtractionError("empty capture image")
        try:
            response = self._client.post(
                self.url,
                content=image,
                headers={"Content-Type": "application/octet-stream"},
            )
            response.raise_for_status()
        except (httpx.TransportError, httpx.TimeoutException) as exc:
            raise TransportError(f"pose extractor unreachable: {exc}") from exc
        except httpx.HTTPStatusError as exc:
            raise ExtractionError(f"pose extractor rejected request: {exc}") from exc
        return parse_extractor_response(response.json(), context.capture_size)
