"""Generation request composition and result types.

A request carries exactly four generator inputs: the pose skeleton, the
artwork style reference, the artwork caption as prompt, and the
deployment-wide negative prompt. The raw camera capture rides along only
for the in-process hand-off and is excluded from every serialized form.
"""

from __future__ import annotations

import base64
import time
from dataclasses import dataclass, field, replace

from ..catalog import ArtworkEntry, StyleRef, style_ref
from ..pose.model import PoseSkeleton, pose_to_dict

DEFAULT_STEPS = 50
DEFAULT_CFG = 8.0
DEFAULT_BASE_SIZE = (512, 512)

# Deployment config in spirit: quality/safety steering terms kept out of the
# positive prompt path. Operators override per deployment.
DEFAULT_NEGATIVE_PROMPT = (
    "nsfw, nudity, lowres, bad anatomy, extra limbs, missing limbs, "
    "watermark, text, signature, blurry, deformed face"
)

BOOTHS = ("public", "private")


class RequestError(Exception):
    """Invalid request composition inputs."""


class ConfigurationError(RequestError):
    """Catalog/config data unusable for composing a request."""


@dataclass(frozen=True)
class GenerationParams:
    steps: int = DEFAULT_STEPS
    cfg: float = DEFAULT_CFG
    seed: int = 0
    base_size: tuple[int, int] = DEFAULT_BASE_SIZE
    negative_prompt: str = DEFAULT_NEGATIVE_PROMPT

    def validate(self) -> None:
        if self.steps <= 0:
            raise RequestError(f"steps must be positive, got {self.steps}")
        if self.cfg <= 0:
            raise RequestError(f"cfg must be positive, got {self.cfg}")
        w, h = self.base_size
        if w <= 0 or h <= 0:
            raise RequestError(f"base_size must be positive, got {self.base_size}")


@dataclass(frozen=True)
class GenerationRequest:
    pose: PoseSkeleton
    style: StyleRef
    prompt: str
    params: GenerationParams
    session_id: str
    booth: str
    pose_free: bool = False
    # Transient capture bytes: held for the pipeline hand-off only, never
    # serialized or persisted. compare=False keeps equality capture-blind.
    capture: bytes = field(default=b"", repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.prompt:
            raise ConfigurationError("prompt must be non-empty")
        if self.booth not in BOOTHS:
            raise RequestError(f"booth must be one of {BOOTHS}, got {self.booth!r}")
        if not self.pose.persons and not self.pose_free:
            raise RequestError("pose has no persons and request is not flagged pose-free")

    def to_payload(self, webhook_url: str | None = None, job_ref: str | None = None) -> dict:
        """Wire form for the generation backend; excludes the capture."""
        payload = {
            "prompt": self.prompt,
            "negative_prompt": self.params.negative_prompt,
            "steps": self.params.steps,
            "cfg": self.params.cfg,
            "seed": self.params.seed,
            "width": self.params.base_size[0],
            "height": self.params.base_size[1],
            "pose": pose_to_dict(self.pose),
            "style_image": base64.b64encode(self.style.image).decode("ascii"),
        }
        if webhook_url is not None:
            payload["webhook_url"] = webhook_url
        if job_ref is not None:
            payload["job_ref"] = job_ref
        return payload

    def without_capture(self) -> "GenerationRequest":
        return replace(self, capture=b"")


@dataclass(frozen=True)
class GeneratedResult:
    result_id: str
    image: bytes
    pose: PoseSkeleton
    artwork_id: str
    booth: str
    code: str
    created_at: float = field(default_factory=time.time)


def compose_request(
    entry: ArtworkEntry,
    skel: PoseSkeleton,
    capture: bytes,
    params: GenerationParams,
    session_id: str,
    booth: str,
    pose_free: bool = False,
) -> GenerationRequest:
    """Assemble the four generator inputs from a catalog entry and a skeleton."""
    params.validate()
    if not entry.safety_approved:
        raise ConfigurationError(f"artwork {entry.id} is not servable")
    ref = style_ref(entry)
    if not ref.caption:
        raise ConfigurationError(f"artwork {entry.id} has an empty caption prompt")
    return GenerationRequest(
        pose=skel,
        style=ref,
        prompt=ref.caption,
        params=params,
        session_id=session_id,
        booth=booth,
        pose_free=pose_free,
        capture=capture,
    )
