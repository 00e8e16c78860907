"""Ordinal expressiveness rating of a pose, per the deployment codebook.

Rules operate on relative comparisons and ratios only, so ratings are
invariant under uniform translation and scaling of the keypoints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import (
    L_ANKLE,
    L_HIP,
    L_KNEE,
    L_SHOULDER,
    L_WRIST,
    R_ANKLE,
    R_HIP,
    R_KNEE,
    R_SHOULDER,
    R_WRIST,
    Person,
    PoseSkeleton,
)

# Raised-arm hysteresis: fraction of the person bounding-box height a wrist
# must clear above the shoulder to count as raised.
RAISED_ARM_MARGIN = 0.02

# Wide stance: wrist horizontal span exceeding this multiple of shoulder span.
WIDE_STANCE_RATIO = 1.5


class DynamismRating(enum.IntEnum):
    """Three ordered categories; higher is more expressive."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3

    def __str__(self) -> str:  # noqa: D105
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "DynamismRating":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown dynamism rating {label!r}") from None


@dataclass(frozen=True)
class PersonDynamism:
    rating: DynamismRating
    raised_arms: int
    raised_legs: int
    wide_stance: bool
    insufficient_keypoints: bool


def _bbox_height(person: Person) -> float:
    ys = [k.y for k in person.keypoints if k.visible]
    return max(ys) - min(ys)


def classify_person(person: Person) -> PersonDynamism:
    margin = RAISED_ARM_MARGIN * _bbox_height(person)
    kp = person.joint

    arm_pairs = ((R_WRIST, R_SHOULDER), (L_WRIST, L_SHOULDER))
    raised_arms = 0
    arms_evaluable = False
    for wrist_i, shoulder_i in arm_pairs:
        wrist, shoulder = kp(wrist_i), kp(shoulder_i)
        if wrist.visible and shoulder.visible:
            arms_evaluable = True
            if wrist.y < shoulder.y - margin:
                raised_arms += 1

    # A leg counts as raised when the ankle sits above the same-side hip or
    # above the opposite knee.
    leg_rules = ((R_ANKLE, R_HIP, L_KNEE), (L_ANKLE, L_HIP, R_KNEE))
    raised_legs = 0
    legs_evaluable = False
    for ankle_i, hip_i, opp_knee_i in leg_rules:
        ankle, hip, opp_knee = kp(ankle_i), kp(hip_i), kp(opp_knee_i)
        if not ankle.visible:
            continue
        raised = False
        if hip.visible:
            legs_evaluable = True
            raised = raised or ankle.y < hip.y
        if opp_knee.visible:
            legs_evaluable = True
            raised = raised or ankle.y < opp_knee.y
        if raised:
            raised_legs += 1

    wrists = (kp(R_WRIST), kp(L_WRIST))
    shoulders = (kp(R_SHOULDER), kp(L_SHOULDER))
    stance_evaluable = all(k.visible for k in wrists + shoulders)
    wide_stance = False
    if stance_evaluable:
        wrist_span = abs(wrists[0].x - wrists[1].x)
        shoulder_span = abs(shoulders[0].x - shoulders[1].x)
        wide_stance = wrist_span > WIDE_STANCE_RATIO * shoulder_span

    insufficient = not (arms_evaluable or legs_evaluable or stance_evaluable)

    if raised_legs >= 1:
        rating = DynamismRating.HIGH
    elif raised_arms >= 2:
        # Both arms up reads as more than a single raised limb.
        rating = DynamismRating.HIGH
    elif raised_arms == 1 or wide_stance:
        rating = DynamismRating.MEDIUM
    else:
        rating = DynamismRating.LOW

    return PersonDynamism(
        rating=rating,
        raised_arms=raised_arms,
        raised_legs=raised_legs,
        wide_stance=wide_stance,
        insufficient_keypoints=insufficient,
    )


def classify_dynamism(skel: PoseSkeleton) -> DynamismRating:
    """Maximum per-person rating; LOW for a personless skeleton."""
    ratings = [classify_person(p).rating for p in skel.persons]
    return max(ratings, default=DynamismRating.LOW)
