"""Request/response models for the HTTP surface."""

from __future__ import annotations

from pydantic import BaseModel


class GalleryArtwork(BaseModel):
    id: str
    title: str
    artist: str
    collection: str
    subject_count: int
    dynamism: str
    image_url: str


class StationStatus(BaseModel):
    phase: str
    station_id: str
    booth: str
    gallery_order: list[str] = []
    selected_artwork: str | None = None
    seconds_remaining: int | None = None
    camera_active: bool = False
    code: str | None = None
    result_id: str | None = None
    error_banner: str | None = None
    pose_retries: int = 0


class CatalogResponse(BaseModel):
    station_id: str
    entries: list[GalleryArtwork]


class SelectRequest(BaseModel):
    artwork_id: str


class CaptureResponse(BaseModel):
    code: str
    job_id: str
    status: StationStatus


class FeedEntryModel(BaseModel):
    result_id: str
    created_at: float
    booth: str
    artwork_id: str
    image_url: str
    pose_url: str
    code_hash: str


class FeedResponse(BaseModel):
    entries: list[FeedEntryModel]
    new_count: int
    next_cursor: int
    resync: bool = False


class WebhookAck(BaseModel):
    ok: bool
    result_id: str | None = None
    duplicate: bool = False


class HealthResponse(BaseModel):
    status: str
    version: str
    stations: int
    feed_length: int


class ErrorResponse(BaseModel):
    error: str
    detail: str | None = None
    phase: str | None = None
    retries_used: int | None = None
