"""HTTP surface binding kiosks, viewers, and the generation webhook.

Kiosk UI, viewer UI, and the API are served from one listener (one
origin), so no proxy or CORS workaround is needed in front of the service.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import logging
import random
import threading

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.concurrency import run_in_threadpool

from .. import __version__
from ..catalog import CatalogStorageError, load_catalog
from ..clock import Clock, SystemClock
from ..codes import CodeCapacityError, CodeIssuer, load_wordlist
from ..pipeline.backend import (
    BackendRejectedError,
    GenerationBackend,
    HttpGenerationBackend,
    MockGenerationBackend,
)
from ..pipeline.jobs import Pipeline, SubmitFailedError, UnknownJobError
from ..pipeline.postprocess import default_stages
from ..pipeline.request import GenerationParams
from ..pose.extract import HttpPoseExtractor, PoseExtractor, StubPoseExtractor, TransportError
from ..service import (
    IllegalPhaseError,
    KioskService,
    PoseRetryPrompt,
    UnknownArtworkError,
    UnknownStationError,
)
from ..session import Timings
from ..store import LOG_FILE, InteractionLog, ResultStore, StoreError
from .config import ApiConfig
from .schemas import (
    CaptureResponse,
    CatalogResponse,
    FeedEntryModel,
    FeedResponse,
    GalleryArtwork,
    HealthResponse,
    SelectRequest,
    StationStatus,
    WebhookAck,
)

logger = logging.getLogger(__name__)

TICK_INTERVAL = 0.5
SIGNATURE_HEADER = "x-signature"


def sign_payload(secret: str, body: bytes) -> str:
    return hmac.new(secret.encode("utf-8"), body, hashlib.sha256).hexdigest()


def _error(status_code: int, error: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status_code, content={"error": error, **extra})


def create_app(
    config: ApiConfig,
    clock: Clock | None = None,
    backend: GenerationBackend | None = None,
    extractor: PoseExtractor | None = None,
    code_rng: random.Random | None = None,
) -> FastAPI:
    clock = clock or SystemClock()
    catalog = load_catalog(config.catalog_manifest)
    store = ResultStore(config.store_dir, code_hash_secret=config.code_hash_secret, clock=clock)
    store.recover()
    log = InteractionLog(config.store_dir / LOG_FILE)
    issuer = CodeIssuer(
        load_wordlist(config.wordlist_a),
        load_wordlist(config.wordlist_b),
        clock=clock,
        rng=code_rng or random.Random(config.seed),
    )

    if backend is None:
        if config.backend_url:
            backend = HttpGenerationBackend(
                config.backend_url,
                webhook_url=f"http://{config.listen_host}:{config.listen_port}/webhook/generation",
            )
        else:
            backend = MockGenerationBackend()
    if extractor is None:
        if config.pose_extractor_url:
            extractor = HttpPoseExtractor(config.pose_extractor_url)
        else:
            extractor = StubPoseExtractor()

    pipeline = Pipeline(backend=backend, stages=default_stages(), store=store, clock=clock)
    service = KioskService(
        catalog=catalog,
        pipeline=pipeline,
        store=store,
        log=log,
        code_issuer=issuer,
        extractor=extractor,
        clock=clock,
        stations=config.stations,
        params=GenerationParams(
            steps=config.steps,
            cfg=config.cfg,
            seed=config.seed,
            base_size=(config.base_width, config.base_height),
            negative_prompt=config.negative_prompt,
        ),
        timings=Timings(
            countdown=config.countdown_seconds,
            reset=config.reset_seconds,
            capture_grace=config.capture_grace_seconds,
        ),
        inline_results=config.inline_results,
        pose_seed=config.pose_seed,
        capture_size=(config.capture_width, config.capture_height),
    )

    app = FastAPI(title="posebooth", version=__version__)
    app.state.config = config
    app.state.service = service
    app.state.store = store
    app.state.pipeline = pipeline
    app.state.log = log
    app.state.clock = clock

    _register_error_handlers(app)
    _register_routes(app, config, service, store, pipeline, catalog)

    # Real deployments need a clock ticker so countdown/reset deadlines fire
    # without kiosk polling; simulated clocks drive ticks explicitly instead.
    if isinstance(clock, SystemClock):
        _attach_ticker(app, service)

    if config.static_dir is not None and config.static_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def _register_error_handlers(app: FastAPI) -> None:
    @app.exception_handler(UnknownStationError)
    async def _unknown_station(request: Request, exc: UnknownStationError):
        return _error(404, "unknown_station", detail=str(exc))

    @app.exception_handler(UnknownArtworkError)
    async def _unknown_artwork(request: Request, exc: UnknownArtworkError):
        return _error(404, "unknown_artwork", detail=str(exc))

    @app.exception_handler(IllegalPhaseError)
    async def _illegal_phase(request: Request, exc: IllegalPhaseError):
        return _error(409, "illegal_phase", detail=str(exc), phase=exc.phase)

    @app.exception_handler(PoseRetryPrompt)
    async def _pose_retry(request: Request, exc: PoseRetryPrompt):
        return _error(422, "no_pose_found", retries_used=exc.retries_used)

    @app.exception_handler(SubmitFailedError)
    async def _submit_failed(request: Request, exc: SubmitFailedError):
        return _error(503, "backend_unreachable", detail=str(exc))

    @app.exception_handler(TransportError)
    async def _extractor_down(request: Request, exc: TransportError):
        return _error(503, "pose_extractor_unreachable", detail=str(exc))

    @app.exception_handler(BackendRejectedError)
    async def _backend_rejected(request: Request, exc: BackendRejectedError):
        return _error(502, "backend_rejected", detail=str(exc))

    @app.exception_handler(CodeCapacityError)
    async def _codes_exhausted(request: Request, exc: CodeCapacityError):
        return _error(500, "code_capacity_exhausted", detail=str(exc))

    @app.exception_handler(CatalogStorageError)
    async def _catalog_storage(request: Request, exc: CatalogStorageError):
        return _error(500, "artwork_unreadable", detail=str(exc))

    @app.exception_handler(StoreError)
    async def _store_error(request: Request, exc: StoreError):
        return _error(500, "store_error", detail=str(exc))


def _status_model(service: KioskService, station_id: str) -> StationStatus:
    view, runtime = service.status(station_id)
    return StationStatus(
        phase=view.phase,
        station_id=view.station_id,
        booth=view.booth,
        gallery_order=list(view.gallery_order),
        selected_artwork=view.selected_artwork,
        seconds_remaining=view.seconds_remaining,
        camera_active=view.camera_active,
        code=view.code,
        result_id=view.result_id,
        error_banner=runtime.error_banner,
        pose_retries=runtime.pose_retries,
    )


def _register_routes(
    app: FastAPI,
    config: ApiConfig,
    service: KioskService,
    store: ResultStore,
    pipeline: Pipeline,
    catalog,
) -> None:
    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(
            status="ok",
            version=__version__,
            stations=len(service.stations),
            feed_length=store.feed_length,
        )

    @app.post("/station/{station_id}/consent", response_model=StationStatus)
    def consent(station_id: str) -> StationStatus:
        service.consent(station_id)
        return _status_model(service, station_id)

    @app.get("/station/{station_id}/catalog", response_model=CatalogResponse)
    def station_catalog(station_id: str) -> CatalogResponse:
        view, _ = service.status(station_id)
        order = view.gallery_order or tuple(e.id for e in catalog.servable)
        entries = []
        for artwork_id in order:
            entry = catalog.get(artwork_id)
            entries.append(
                GalleryArtwork(
                    id=entry.id,
                    title=entry.title,
                    artist=entry.artist,
                    collection=entry.collection,
                    subject_count=entry.subject_count,
                    dynamism=str(entry.dynamism),
                    image_url=f"/artworks/{entry.id}/image",
                )
            )
        return CatalogResponse(station_id=station_id, entries=entries)

    @app.post("/station/{station_id}/select", response_model=StationStatus)
    def select(station_id: str, body: SelectRequest) -> StationStatus:
        service.select(station_id, body.artwork_id)
        return _status_model(service, station_id)

    @app.post("/station/{station_id}/start", response_model=StationStatus)
    def start(station_id: str) -> StationStatus:
        service.start_countdown(station_id)
        return _status_model(service, station_id)

    @app.post("/station/{station_id}/capture", response_model=CaptureResponse)
    async def capture(station_id: str, request: Request) -> Response:
        declared = request.headers.get("content-length")
        if declared and int(declared) > config.upload_limit_bytes:
            return _error(413, "capture_too_large", detail=f"limit {config.upload_limit_bytes} bytes")
        body = await request.body()
        if len(body) > config.upload_limit_bytes:
            return _error(413, "capture_too_large", detail=f"limit {config.upload_limit_bytes} bytes")
        if not body:
            return _error(400, "empty_capture")
        code, job_id, _ = await run_in_threadpool(service.capture, station_id, body)
        return JSONResponse(
            CaptureResponse(
                code=code, job_id=job_id, status=_status_model(service, station_id)
            ).model_dump()
        )

    @app.get("/station/{station_id}/status", response_model=StationStatus)
    def status(station_id: str) -> StationStatus:
        return _status_model(service, station_id)

    @app.get("/feed", response_model=FeedResponse)
    def feed(
        cursor: str | None = None,
        booth: str | None = None,
        timeout: float = Query(default=0.0, ge=0.0),
    ) -> FeedResponse:
        timeout = min(timeout, config.long_poll_timeout)
        parsed_cursor: int | str | None = None
        if cursor not in (None, ""):
            parsed_cursor = int(cursor) if cursor.lstrip("-").isdigit() else cursor
        if timeout > 0:
            page = store.wait_for_entries(parsed_cursor, booth, timeout)
        else:
            page = store.feed_since(parsed_cursor, booth)
        return FeedResponse(
            entries=[
                FeedEntryModel(
                    result_id=e.result_id,
                    created_at=e.created_at,
                    booth=e.booth,
                    artwork_id=e.artwork_id,
                    image_url=f"/results/{e.result_id}/image.png",
                    pose_url=f"/results/{e.result_id}/pose.json",
                    code_hash=e.code_hash,
                )
                for e in page.entries
            ],
            new_count=page.new_count,
            next_cursor=page.next_cursor,
            resync=page.resync,
        )

    @app.post("/webhook/generation", response_model=WebhookAck)
    async def webhook_generation(request: Request) -> Response:
        body = await request.body()
        signature = request.headers.get(SIGNATURE_HEADER, "")
        expected = sign_payload(config.webhook_secret, body)
        if not signature or not hmac.compare_digest(signature, expected):
            logger.warning("webhook rejected: bad signature")
            return _error(401, "bad_signature")
        try:
            completion = json.loads(body)
        except json.JSONDecodeError:
            return _error(400, "malformed_payload")
        if not isinstance(completion, dict) or "job_id" not in completion:
            return _error(400, "malformed_payload")
        record = pipeline.job(str(completion["job_id"]))
        already_done = record is not None and record.result is not None
        try:
            result = await run_in_threadpool(pipeline.finalize, completion)
        except UnknownJobError as exc:
            logger.warning("webhook for unknown job: %s", exc)
            return _error(404, "unknown_job", detail=str(exc))
        if result is None:
            return JSONResponse(WebhookAck(ok=True, result_id=None).model_dump())
        return JSONResponse(
            WebhookAck(ok=True, result_id=result.result_id, duplicate=already_done).model_dump()
        )

    @app.get("/artworks/{artwork_id}/image")
    def artwork_image(artwork_id: str) -> FileResponse:
        try:
            entry = catalog.get(artwork_id)
        except KeyError:
            raise UnknownArtworkError(artwork_id) from None
        if not entry.safety_approved:
            raise UnknownArtworkError(artwork_id)
        return FileResponse(entry.image_path)

    @app.get("/results/{result_id}/image.png")
    def result_image(result_id: str) -> Response:
        return Response(content=store.read_image(result_id), media_type="image/png")

    @app.get("/results/{result_id}/pose.json")
    def result_pose(result_id: str) -> Response:
        return Response(content=store.read_pose(result_id), media_type="application/json")


def _attach_ticker(app: FastAPI, service: KioskService) -> None:
    stop = threading.Event()

    def _run() -> None:
        while not stop.wait(TICK_INTERVAL):
            for station_id in list(service.stations):
                try:
                    service.tick(station_id)
                except Exception:  # pragma: no cover - ticker must never die
                    logger.exception("ticker failed for station %s", station_id)
            service.log.flush()

    thread = threading.Thread(target=_run, name="posebooth-ticker", daemon=True)

    @app.on_event("startup")
    def _start_ticker() -> None:
        thread.start()

    @app.on_event("shutdown")
    def _stop_ticker() -> None:
        stop.set()
