"""Pose skeletons: parsing, rendering, dynamism rating, extraction."""

from .dynamism import (
    DynamismRating,
    PersonDynamism,
    classify_dynamism,
    classify_person,
)
from .extract import (
    CANONICAL_STANDING,
    ExtractionContext,
    ExtractionError,
    HttpPoseExtractor,
    NoPoseFoundError,
    PoseExtractor,
    StubPoseExtractor,
    TransportError,
    canonical_standing_skeleton,
    parse_extractor_response,
)
from .model import (
    BONES,
    JOINT_NAMES,
    NUM_KEYPOINTS,
    Keypoint,
    Person,
    PoseError,
    PoseParseError,
    PoseRangeError,
    PoseSchemaError,
    PoseSkeleton,
    parse_pose,
    pose_from_dict,
    pose_to_dict,
    serialize_pose,
)
from .render import PERSON_COLORS, render_skeleton, render_skeleton_png

__all__ = [
    "BONES",
    "CANONICAL_STANDING",
    "DynamismRating",
    "ExtractionContext",
    "ExtractionError",
    "HttpPoseExtractor",
    "JOINT_NAMES",
    "Keypoint",
    "NUM_KEYPOINTS",
    "NoPoseFoundError",
    "PERSON_COLORS",
    "Person",
    "PersonDynamism",
    "PoseError",
    "PoseExtractor",
    "PoseParseError",
    "PoseRangeError",
    "PoseSchemaError",
    "PoseSkeleton",
    "StubPoseExtractor",
    "TransportError",
    "canonical_standing_skeleton",
    "classify_dynamism",
    "classify_person",
    "parse_extractor_response",
    "parse_pose",
    "pose_from_dict",
    "pose_to_dict",
    "render_skeleton",
    "render_skeleton_png",
    "serialize_pose",
]
