"""Generation pipeline: request composition, backends, post-processing, jobs."""

from .backend import (
    BackendError,
    BackendRejectedError,
    BackendTransportError,
    GenerationBackend,
    HttpGenerationBackend,
    MockGenerationBackend,
    generate_from_payload,
    mock_generate,
)
from .jobs import (
    MAX_SUBMIT_ATTEMPTS,
    RETRY_DELAYS,
    JobRecord,
    JobState,
    PersistError,
    Pipeline,
    PipelineError,
    SubmitFailedError,
    UnknownJobError,
)
from .postprocess import (
    HttpImageStage,
    IdentityFaceEnhance,
    PostprocessResult,
    Stage,
    Upscale2x,
    default_stages,
    image_dimensions,
    postprocess,
)
from .request import (
    BOOTHS,
    DEFAULT_BASE_SIZE,
    DEFAULT_CFG,
    DEFAULT_NEGATIVE_PROMPT,
    DEFAULT_STEPS,
    ConfigurationError,
    GeneratedResult,
    GenerationParams,
    GenerationRequest,
    RequestError,
    compose_request,
)

__all__ = [
    "BOOTHS",
    "BackendError",
    "BackendRejectedError",
    "BackendTransportError",
    "ConfigurationError",
    "DEFAULT_BASE_SIZE",
    "DEFAULT_CFG",
    "DEFAULT_NEGATIVE_PROMPT",
    "DEFAULT_STEPS",
    "GeneratedResult",
    "GenerationBackend",
    "GenerationParams",
    "GenerationRequest",
    "HttpGenerationBackend",
    "HttpImageStage",
    "IdentityFaceEnhance",
    "JobRecord",
    "JobState",
    "MAX_SUBMIT_ATTEMPTS",
    "MockGenerationBackend",
    "PersistError",
    "Pipeline",
    "PipelineError",
    "PostprocessResult",
    "RETRY_DELAYS",
    "RequestError",
    "Stage",
    "SubmitFailedError",
    "UnknownJobError",
    "Upscale2x",
    "compose_request",
    "default_stages",
    "generate_from_payload",
    "image_dimensions",
    "mock_generate",
    "postprocess",
]
