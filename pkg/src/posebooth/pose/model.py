"""Body-prompt data model: anonymized multi-person keypoint skeletons.

A skeleton carries 18 joints per person in the fixed COCO-18 ordering and
nothing else: no facial landmarks beyond eyes/ears/nose, no finger data.
Coordinates are normalized to [0, 1] with y increasing downward, so the
same skeleton works across capture and render resolutions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

NUM_KEYPOINTS = 18

# COCO-18 joint indices (openpose ordering).
NOSE = 0
NECK = 1
R_SHOULDER = 2
R_ELBOW = 3
R_WRIST = 4
L_SHOULDER = 5
L_ELBOW = 6
L_WRIST = 7
R_HIP = 8
R_KNEE = 9
R_ANKLE = 10
L_HIP = 11
L_KNEE = 12
L_ANKLE = 13
R_EYE = 14
L_EYE = 15
R_EAR = 16
L_EAR = 17

JOINT_NAMES = (
    "nose", "neck",
    "r_shoulder", "r_elbow", "r_wrist",
    "l_shoulder", "l_elbow", "l_wrist",
    "r_hip", "r_knee", "r_ankle",
    "l_hip", "l_knee", "l_ankle",
    "r_eye", "l_eye", "r_ear", "l_ear",
)

# Bone list connecting the 18 joints (joint index pairs).
BONES = (
    (NECK, R_SHOULDER), (NECK, L_SHOULDER),
    (R_SHOULDER, R_ELBOW), (R_ELBOW, R_WRIST),
    (L_SHOULDER, L_ELBOW), (L_ELBOW, L_WRIST),
    (NECK, R_HIP), (R_HIP, R_KNEE), (R_KNEE, R_ANKLE),
    (NECK, L_HIP), (L_HIP, L_KNEE), (L_KNEE, L_ANKLE),
    (NECK, NOSE),
    (NOSE, R_EYE), (R_EYE, R_EAR),
    (NOSE, L_EYE), (L_EYE, L_EAR),
)


class PoseError(Exception):
    """Base class for pose document errors."""


class PoseParseError(PoseError):
    """Malformed pose document; message names the offending field."""


class PoseSchemaError(PoseError):
    """Structurally valid JSON but wrong shape (e.g. keypoint count != 18)."""


class PoseRangeError(PoseError):
    """Coordinate outside [0, 1] on a keypoint with confidence > 0."""


@dataclass(frozen=True)
class Keypoint:
    """One joint. confidence == 0 marks a missing joint; x/y are then ignored."""

    x: float
    y: float
    confidence: float

    @property
    def visible(self) -> bool:
        return self.confidence > 0


@dataclass(frozen=True)
class Person:
    """Exactly 18 keypoints in COCO-18 order, at least one visible."""

    keypoints: tuple[Keypoint, ...]

    def __post_init__(self) -> None:
        if len(self.keypoints) != NUM_KEYPOINTS:
            raise PoseSchemaError(
                f"person must have exactly {NUM_KEYPOINTS} keypoints, got {len(self.keypoints)}"
            )
        if not any(k.visible for k in self.keypoints):
            raise PoseSchemaError("person has no keypoint with confidence > 0")
        for i, k in enumerate(self.keypoints):
            if k.visible and not (0.0 <= k.x <= 1.0 and 0.0 <= k.y <= 1.0):
                raise PoseRangeError(
                    f"keypoint {i} ({JOINT_NAMES[i]}) outside [0,1]: x={k.x}, y={k.y}"
                )

    def joint(self, index: int) -> Keypoint:
        return self.keypoints[index]


@dataclass(frozen=True)
class PoseSkeleton:
    """The body prompt: ordered persons plus the originating frame size.

    An empty persons list is representable; it backs the pose-free
    degenerate path when no pose could be detected.
    """

    persons: tuple[Person, ...]
    capture_size: tuple[int, int]

    def __post_init__(self) -> None:
        w, h = self.capture_size
        if w <= 0 or h <= 0:
            raise PoseSchemaError(f"capture_size must be positive, got {self.capture_size}")


def parse_pose(doc: str | bytes) -> PoseSkeleton:
    """Parse the wire format:

    {"persons": [{"keypoints": [[x, y, c] * 18]}], "capture_size": [w, h]}
    """
    try:
        data = json.loads(doc)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise PoseParseError(f"invalid JSON: {exc}") from exc
    return pose_from_dict(data)


def pose_from_dict(data: Any) -> PoseSkeleton:
    if not isinstance(data, dict):
        raise PoseParseError("document root must be an object")
    if "persons" not in data:
        raise PoseParseError("missing field 'persons'")
    if "capture_size" not in data:
        raise PoseParseError("missing field 'capture_size'")

    raw_size = data["capture_size"]
    if (
        not isinstance(raw_size, (list, tuple))
        or len(raw_size) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw_size)
    ):
        raise PoseParseError("field 'capture_size' must be [width, height] integers")

    raw_persons = data["persons"]
    if not isinstance(raw_persons, list):
        raise PoseParseError("field 'persons' must be a list")

    persons = []
    for p_idx, raw_person in enumerate(raw_persons):
        if not isinstance(raw_person, dict) or "keypoints" not in raw_person:
            raise PoseParseError(f"persons[{p_idx}] missing field 'keypoints'")
        raw_kps = raw_person["keypoints"]
        if not isinstance(raw_kps, list):
            raise PoseParseError(f"persons[{p_idx}].keypoints must be a list")
        if len(raw_kps) != NUM_KEYPOINTS:
            raise PoseSchemaError(
                f"persons[{p_idx}] must have exactly {NUM_KEYPOINTS} keypoints, got {len(raw_kps)}"
            )
        keypoints = []
        for k_idx, triple in enumerate(raw_kps):
            if (
                not isinstance(triple, (list, tuple))
                or len(triple) != 3
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in triple)
            ):
                raise PoseParseError(
                    f"persons[{p_idx}].keypoints[{k_idx}] must be an [x, y, confidence] triple"
                )
            keypoints.append(Keypoint(float(triple[0]), float(triple[1]), float(triple[2])))
        persons.append(Person(tuple(keypoints)))

    return PoseSkeleton(persons=tuple(persons), capture_size=(raw_size[0], raw_size[1]))


def pose_to_dict(skel: PoseSkeleton) -> dict:
    return {
        "persons": [
            {"keypoints": [[k.x, k.y, k.confidence] for k in person.keypoints]}
            for person in skel.persons
        ],
        "capture_size": [skel.capture_size[0], skel.capture_size[1]],
    }


def serialize_pose(skel: PoseSkeleton) -> str:
    """Inverse of parse_pose; floats round-trip bit-exactly through json."""
    return json.dumps(pose_to_dict(skel), separators=(",", ":"))
