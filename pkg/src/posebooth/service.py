"""Deployment orchestrator: wires catalog, sessions, codes, pipeline, store.

One KioskService instance runs a whole deployment: independent per-station
state machines, a shared code registry, one pipeline, one store. Session
events for a station are serialized under a per-station lock; the pipeline
and feed run concurrently across stations.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field, replace

from .catalog import Catalog
from .clock import Clock
from .codes import CodeIssuer
from .pipeline.jobs import Pipeline
from .pipeline.request import GeneratedResult, GenerationParams, compose_request
from .pose.extract import ExtractionContext, NoPoseFoundError, PoseExtractor
from .pose.model import PoseSkeleton
from .session import (
    ArtworkSelected,
    CaptureTaken,
    ConsentGiven,
    Event,
    KioskView,
    Phase,
    SessionState,
    StartCountdown,
    SubmissionAcked,
    Tick,
    Timings,
    Transition,
    advance,
    initial_state,
    snapshot,
)
from .store import InteractionLog, LogEvent, ResultStore

logger = logging.getLogger(__name__)

MAX_POSE_RETRIES = 2


class ServiceError(Exception):
    pass


class UnknownStationError(ServiceError):
    pass


class UnknownArtworkError(ServiceError):
    pass


class IllegalPhaseError(ServiceError):
    def __init__(self, message: str, phase: str):
        super().__init__(message)
        self.phase = phase


class PoseRetryPrompt(ServiceError):
    """No pose detected; the visitor is asked to try again."""

    def __init__(self, retries_used: int):
        super().__init__(f"no pose found (attempt {retries_used})")
        self.retries_used = retries_used


@dataclass
class StationRuntime:
    state: SessionState
    lock: threading.RLock = field(default_factory=threading.RLock)
    pose_retries: int = 0
    inflight_job: str | None = None
    pending_result: str | None = None
    error_banner: str | None = None


class KioskService:
    def __init__(
        self,
        catalog: Catalog,
        pipeline: Pipeline,
        store: ResultStore,
        log: InteractionLog,
        code_issuer: CodeIssuer,
        extractor: PoseExtractor,
        clock: Clock,
        stations: dict[str, str],
        params: GenerationParams,
        timings: Timings = Timings(),
        inline_results: bool = False,
        pose_seed: int = 0,
        capture_size: tuple[int, int] = (640, 480),
    ):
        self.catalog = catalog
        self.pipeline = pipeline
        self.store = store
        self.log = log
        self.codes = code_issuer
        self.extractor = extractor
        self.clock = clock
        self.timings = timings
        self.inline_results = inline_results
        self.params = params
        self.pose_seed = pose_seed
        self.capture_size = capture_size
        self._generation_index = 0
        self._index_lock = threading.Lock()
        self.stations: dict[str, StationRuntime] = {
            sid: StationRuntime(state=initial_state(sid, booth, gallery_seed=i))
            for i, (sid, booth) in enumerate(sorted(stations.items()))
        }
        pipeline.on_result = self._on_result

    def _runtime(self, station_id: str) -> StationRuntime:
        runtime = self.stations.get(station_id)
        if runtime is None:
            raise UnknownStationError(f"station {station_id!r} is not registered")
        return runtime

    def _next_generation_index(self) -> int:
        with self._index_lock:
            index = self._generation_index
            self._generation_index += 1
            return index

    def _apply(self, runtime: StationRuntime, event: Event) -> Transition:
        """Apply one event under the station lock; log it; handle resets."""
        now = self.clock.now()
        before = runtime.state
        transition = advance(before, event, now, self.timings)
        runtime.state = transition.state

        self.log.append(
            LogEvent(
                timestamp=now,
                station_id=before.station_id,
                event=type(event).__name__,
                phase=transition.state.phase.value,
                level="event" if transition.accepted else "diagnostic",
            )
        )
        if not transition.accepted:
            logger.debug("station %s rejected %s: %s",
                         before.station_id, type(event).__name__, transition.diagnostic)

        if before.phase is not Phase.CONSENT and transition.state.phase is Phase.CONSENT:
            runtime.pose_retries = 0
            runtime.inflight_job = None
            runtime.pending_result = None
            runtime.error_banner = None

        # A result that finished before the code screen was armed gets acked
        # as soon as the session reaches SUBMITTED.
        if (
            transition.state.phase is Phase.SUBMITTED
            and runtime.pending_result is not None
            and transition.state.result_id is None
        ):
            acked = advance(
                runtime.state, SubmissionAcked(runtime.pending_result), now, self.timings
            )
            runtime.state = acked.state
        return transition

    def tick(self, station_id: str) -> KioskView:
        runtime = self._runtime(station_id)
        with runtime.lock:
            self._apply(runtime, Tick())
            return self._view(runtime)

    def _view(self, runtime: StationRuntime) -> KioskView:
        return snapshot(
            runtime.state, self.catalog, self.clock.now(), inline_results=self.inline_results
        )

    def consent(self, station_id: str) -> KioskView:
        runtime = self._runtime(station_id)
        with runtime.lock:
            self._apply(runtime, Tick())
            transition = self._apply(runtime, ConsentGiven())
            if not transition.accepted:
                raise IllegalPhaseError(transition.diagnostic, runtime.state.phase.value)
            return self._view(runtime)

    def select(self, station_id: str, artwork_id: str) -> KioskView:
        runtime = self._runtime(station_id)
        try:
            entry = self.catalog.get(artwork_id)
        except KeyError:
            raise UnknownArtworkError(f"unknown artwork {artwork_id!r}") from None
        if not entry.safety_approved:
            raise UnknownArtworkError(f"artwork {artwork_id!r} is not servable")
        with runtime.lock:
            self._apply(runtime, Tick())
            transition = self._apply(runtime, ArtworkSelected(artwork_id))
            if not transition.accepted:
                raise IllegalPhaseError(transition.diagnostic, runtime.state.phase.value)
            return self._view(runtime)

    def start_countdown(self, station_id: str) -> KioskView:
        runtime = self._runtime(station_id)
        with runtime.lock:
            self._apply(runtime, Tick())
            transition = self._apply(runtime, StartCountdown())
            if not transition.accepted:
                raise IllegalPhaseError(transition.diagnostic, runtime.state.phase.value)
            return self._view(runtime)

    def capture(self, station_id: str, image: bytes) -> tuple[str, str, KioskView]:
        """Extract the pose, compose and submit the request, issue the code.

        The capture bytes live only on this call path; they are never
        persisted and never serialized into the backend payload.
        """
        runtime = self._runtime(station_id)
        with runtime.lock:
            self._apply(runtime, Tick())
            state = runtime.state
            if state.phase is not Phase.CAPTURING:
                raise IllegalPhaseError(
                    f"capture not legal in phase {state.phase.value}", state.phase.value
                )
            if runtime.inflight_job is not None:
                raise IllegalPhaseError("a generation is already in flight", state.phase.value)

            generation_index = self._next_generation_index()
            skel, pose_free = self._extract(runtime, image, generation_index)

            entry = self.catalog.get(state.selected_artwork)
            params = replace(self.params, seed=self.params.seed + generation_index)
            session_id = f"{station_id}:{generation_index}"
            request = compose_request(
                entry=entry,
                skel=skel,
                capture=image,
                params=params,
                session_id=session_id,
                booth=state.booth,
                pose_free=pose_free,
            )
            code = self.codes.issue()
            try:
                job_id = self.pipeline.submit(request, code=code.text)
            except Exception as exc:
                runtime.error_banner = "generation failed, please try again"
                logger.error("station %s submit failed: %s", station_id, exc)
                raise
            # Inline backends finalize during submit; don't re-mark those in flight.
            if runtime.pending_result != job_id:
                runtime.inflight_job = job_id
            runtime.pose_retries = 0
            transition = self._apply(runtime, CaptureTaken(code.text))
            if not transition.accepted:  # pragma: no cover - guarded by phase check above
                raise IllegalPhaseError(transition.diagnostic, runtime.state.phase.value)
            return code.text, job_id, self._view(runtime)

    def _extract(
        self, runtime: StationRuntime, image: bytes, generation_index: int
    ) -> tuple[PoseSkeleton, bool]:
        context = ExtractionContext(
            capture_size=self.capture_size, seed=self.pose_seed + generation_index
        )
        try:
            return self.extractor.extract(image, context), False
        except NoPoseFoundError:
            runtime.pose_retries += 1
            if runtime.pose_retries <= MAX_POSE_RETRIES:
                raise PoseRetryPrompt(runtime.pose_retries) from None
            # Degenerate path: proceed on style + prompt alone.
            logger.info(
                "station %s proceeding pose-free after %d failed extractions",
                runtime.state.station_id, runtime.pose_retries,
            )
            return PoseSkeleton(persons=(), capture_size=self.capture_size), True

    def status(self, station_id: str) -> tuple[KioskView, StationRuntime]:
        runtime = self._runtime(station_id)
        with runtime.lock:
            self._apply(runtime, Tick())
            return self._view(runtime), runtime

    def _on_result(self, result: GeneratedResult, session_id: str) -> None:
        station_id = session_id.rsplit(":", 1)[0]
        runtime = self.stations.get(station_id)
        if runtime is None:
            return
        with runtime.lock:
            if runtime.inflight_job == result.result_id:
                runtime.inflight_job = None
            runtime.pending_result = result.result_id
            if runtime.state.phase is Phase.SUBMITTED and runtime.state.result_id is None:
                transition = advance(
                    runtime.state,
                    SubmissionAcked(result.result_id),
                    self.clock.now(),
                    self.timings,
                )
                runtime.state = transition.state
