"""Deployment configuration for the HTTP service."""

from __future__ import annotations

import json
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from ..pipeline.request import DEFAULT_NEGATIVE_PROMPT
from ..session import CAPTURE_GRACE_SECONDS, COUNTDOWN_SECONDS, RESET_SECONDS

DEFAULT_UPLOAD_LIMIT = 8 * 1024 * 1024


class ApiConfig(BaseModel):
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000

    # Shared token authenticating generation-backend webhooks.
    webhook_secret: str = ""
    test_mode: bool = False

    long_poll_timeout: float = Field(default=25.0, ge=1.0, le=60.0)

    # None selects the deterministic in-process mock backend.
    backend_url: str | None = None
    pose_extractor_url: str | None = None

    inline_results: bool = False

    stations: dict[str, str] = Field(default_factory=lambda: {"station-1": "public"})

    catalog_manifest: Path
    wordlist_a: Path
    wordlist_b: Path
    store_dir: Path
    static_dir: Path | None = None

    upload_limit_bytes: int = DEFAULT_UPLOAD_LIMIT
    code_hash_secret: str = ""

    steps: int = 50
    cfg: float = 8.0
    seed: int = 0
    pose_seed: int = 0
    base_width: int = 512
    base_height: int = 512
    negative_prompt: str = DEFAULT_NEGATIVE_PROMPT
    capture_width: int = 640
    capture_height: int = 480

    countdown_seconds: float = COUNTDOWN_SECONDS
    reset_seconds: float = RESET_SECONDS
    capture_grace_seconds: float = CAPTURE_GRACE_SECONDS

    @field_validator("stations")
    @classmethod
    def _check_booths(cls, value: dict[str, str]) -> dict[str, str]:
        if not value:
            raise ValueError("at least one station must be registered")
        for station, booth in value.items():
            if booth not in ("public", "private"):
                raise ValueError(f"station {station!r} has unknown booth {booth!r}")
        return value

    @model_validator(mode="after")
    def _check_secret(self) -> "ApiConfig":
        if not self.test_mode and not self.webhook_secret:
            raise ValueError("webhook_secret must be non-empty outside test mode")
        if not self.code_hash_secret:
            # Codes stay linkable by operators via the webhook secret by default.
            object.__setattr__(self, "code_hash_secret", self.webhook_secret or "test-secret")
        return self

    @classmethod
    def from_file(cls, path: Path | str) -> "ApiConfig":
        config_path = Path(path)
        data = json.loads(config_path.read_text(encoding="utf-8"))
        config = cls.model_validate(data)
        # Paths in the file are relative to the file itself.
        return config.model_copy(
            update={
                name: (config_path.parent / getattr(config, name)).resolve()
                for name in ("catalog_manifest", "wordlist_a", "wordlist_b", "store_dir", "static_dir")
                if getattr(config, name) is not None
                and not Path(getattr(config, name)).is_absolute()
            }
        )
