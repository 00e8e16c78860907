"""Skeleton builders shared by the pose, dynamism, and acceptance tests."""

from __future__ import annotations

import random

from posebooth.pose.extract import CANONICAL_STANDING
from posebooth.pose.model import (
    L_ANKLE,
    L_WRIST,
    NUM_KEYPOINTS,
    Keypoint,
    Person,
    PoseSkeleton,
)


def person_from_coords(coords, confidence=1.0) -> Person:
    return Person(tuple(Keypoint(x, y, confidence) for x, y in coords))


def standing_person() -> Person:
    return person_from_coords(CANONICAL_STANDING)


def standing_skeleton(capture_size=(640, 480)) -> PoseSkeleton:
    return PoseSkeleton(persons=(standing_person(),), capture_size=capture_size)


def with_joint(person: Person, index: int, x: float, y: float, confidence: float = 1.0) -> Person:
    keypoints = list(person.keypoints)
    keypoints[index] = Keypoint(x, y, confidence)
    return Person(tuple(keypoints))


def raised_wrist_person() -> Person:
    # Left wrist above head height: one raised limb.
    return with_joint(standing_person(), L_WRIST, 0.60, 0.10)


def raised_ankle_person() -> Person:
    # Left ankle above the opposite (right) knee at y=0.70.
    return with_joint(standing_person(), L_ANKLE, 0.60, 0.60)


def single(person: Person, capture_size=(640, 480)) -> PoseSkeleton:
    return PoseSkeleton(persons=(person,), capture_size=capture_size)


def random_person(rng: random.Random, lo=0.25, hi=0.75) -> Person:
    coords = [(rng.uniform(lo, hi), rng.uniform(lo, hi)) for _ in range(NUM_KEYPOINTS)]
    return person_from_coords(coords)


def transform_person(person: Person, scale: float, dx: float, dy: float) -> Person | None:
    """Uniform scale about the origin plus translation; confidences preserved.

    Returns None when the transform pushes a visible joint out of [0, 1]
    (such a skeleton would violate the coordinate invariant).
    """
    coords = [(k.x * scale + dx, k.y * scale + dy, k.confidence) for k in person.keypoints]
    for x, y, c in coords:
        if c > 0 and not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            return None
    return Person(tuple(Keypoint(x, y, c) for x, y, c in coords))
