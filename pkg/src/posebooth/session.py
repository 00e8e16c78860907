"""Kiosk session state machine: a linear flow with injected clocks.

Phases walk the four kiosk screens: consent, artwork gallery, camera
countdown, and pickup-code display with timed auto-reset. advance() is a
pure function of (state, event, now); all side effects (issuing codes,
submitting jobs) happen in the service layer and arrive via event payloads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Union

from .catalog import Catalog, shuffled_view

COUNTDOWN_SECONDS = 10.0
RESET_SECONDS = 60.0
# Safety valve: if the capture never arrives (station abandoned mid-pose),
# the session resets instead of parking in Capturing forever.
CAPTURE_GRACE_SECONDS = 15.0


class Phase(enum.Enum):
    CONSENT = "consent"
    GALLERY = "gallery"
    COUNTDOWN = "countdown"
    CAPTURING = "capturing"
    SUBMITTED = "submitted"
    # Transient: a due reset passes through RESET on its way back to CONSENT
    # within a single advance() call; it is never returned.
    RESET = "reset"


@dataclass(frozen=True)
class ConsentGiven:
    pass


@dataclass(frozen=True)
class ArtworkSelected:
    artwork_id: str


@dataclass(frozen=True)
class StartCountdown:
    pass


@dataclass(frozen=True)
class CaptureTaken:
    code: str


@dataclass(frozen=True)
class SubmissionAcked:
    result_id: str


@dataclass(frozen=True)
class Tick:
    pass


Event = Union[ConsentGiven, ArtworkSelected, StartCountdown, CaptureTaken, SubmissionAcked, Tick]


@dataclass(frozen=True)
class Timings:
    countdown: float = COUNTDOWN_SECONDS
    reset: float = RESET_SECONDS
    capture_grace: float = CAPTURE_GRACE_SECONDS


@dataclass(frozen=True)
class SessionState:
    station_id: str
    booth: str
    phase: Phase = Phase.CONSENT
    selected_artwork: str | None = None
    countdown_deadline: float | None = None
    capture_deadline: float | None = None
    reset_deadline: float | None = None
    code: str | None = None
    result_id: str | None = None
    gallery_seed: int = 0
    last_event_at: float = float("-inf")


@dataclass(frozen=True)
class Transition:
    state: SessionState
    accepted: bool
    diagnostic: str | None = None


def initial_state(station_id: str, booth: str, gallery_seed: int = 0) -> SessionState:
    return SessionState(station_id=station_id, booth=booth, gallery_seed=gallery_seed)


def _rejected(state: SessionState, event: Event, why: str | None = None) -> Transition:
    diag = why or f"event {type(event).__name__} not legal in phase {state.phase.value}"
    return Transition(state=state, accepted=False, diagnostic=diag)


def _to_consent(state: SessionState, now: float, bump_seed: bool) -> SessionState:
    return replace(
        state,
        phase=Phase.CONSENT,
        selected_artwork=None,
        countdown_deadline=None,
        capture_deadline=None,
        reset_deadline=None,
        code=None,
        result_id=None,
        gallery_seed=state.gallery_seed + 1 if bump_seed else state.gallery_seed,
        last_event_at=now,
    )


def advance(state: SessionState, event: Event, now: float, timings: Timings = Timings()) -> Transition:
    """Apply one event; unchanged state (with diagnostic) for illegal pairs."""
    if now < state.last_event_at:
        return _rejected(state, event, f"clock regression: {now} < {state.last_event_at}")

    phase = state.phase

    if isinstance(event, Tick):
        new = replace(state, last_event_at=now)
        if phase is Phase.COUNTDOWN and now >= state.countdown_deadline:
            new = replace(
                new,
                phase=Phase.CAPTURING,
                countdown_deadline=None,
                capture_deadline=now + timings.capture_grace,
            )
        elif phase is Phase.CAPTURING and now >= state.capture_deadline:
            return Transition(
                state=_to_consent(state, now, bump_seed=False),
                accepted=True,
                diagnostic="capture window expired; session reset",
            )
        elif phase is Phase.SUBMITTED and now >= state.reset_deadline:
            # Passes through RESET: the timed exit screen collapses into the
            # return to CONSENT, with a fresh gallery seed for the next visitor.
            return Transition(state=_to_consent(state, now, bump_seed=True), accepted=True)
        return Transition(state=new, accepted=True)

    if isinstance(event, ConsentGiven):
        if phase is Phase.CONSENT:
            return Transition(
                state=replace(state, phase=Phase.GALLERY, last_event_at=now), accepted=True
            )
        return _rejected(state, event)

    if isinstance(event, ArtworkSelected):
        if phase is Phase.GALLERY:
            return Transition(
                state=replace(state, selected_artwork=event.artwork_id, last_event_at=now),
                accepted=True,
            )
        return _rejected(state, event)

    if isinstance(event, StartCountdown):
        if phase is Phase.GALLERY:
            if state.selected_artwork is None:
                return _rejected(state, event, "no artwork selected")
            return Transition(
                state=replace(
                    state,
                    phase=Phase.COUNTDOWN,
                    countdown_deadline=now + timings.countdown,
                    last_event_at=now,
                ),
                accepted=True,
            )
        return _rejected(state, event)

    if isinstance(event, CaptureTaken):
        if phase is Phase.CAPTURING:
            return Transition(
                state=replace(
                    state,
                    phase=Phase.SUBMITTED,
                    capture_deadline=None,
                    reset_deadline=now + timings.reset,
                    code=event.code,
                    last_event_at=now,
                ),
                accepted=True,
            )
        return _rejected(state, event)

    if isinstance(event, SubmissionAcked):
        if phase is Phase.SUBMITTED:
            return Transition(
                state=replace(state, result_id=event.result_id, last_event_at=now), accepted=True
            )
        return _rejected(state, event)

    return _rejected(state, event, f"unknown event {type(event).__name__}")


@dataclass(frozen=True)
class KioskView:
    """What the kiosk UI needs to draw the current screen."""

    phase: str
    station_id: str
    booth: str
    gallery_order: tuple[str, ...]
    selected_artwork: str | None
    seconds_remaining: int | None
    camera_active: bool
    code: str | None
    result_id: str | None


def snapshot(
    state: SessionState,
    catalog: Catalog,
    now: float,
    inline_results: bool = False,
) -> KioskView:
    gallery_order: tuple[str, ...] = ()
    if state.phase is Phase.GALLERY:
        gallery_order = tuple(shuffled_view(catalog, state.gallery_seed))

    seconds_remaining = None
    if state.phase is Phase.COUNTDOWN and state.countdown_deadline is not None:
        seconds_remaining = max(0, math.floor(state.countdown_deadline - now))

    camera_active = state.phase in (Phase.COUNTDOWN, Phase.CAPTURING)
    inset = state.selected_artwork if state.phase in (Phase.COUNTDOWN, Phase.CAPTURING) else None

    return KioskView(
        phase=state.phase.value,
        station_id=state.station_id,
        booth=state.booth,
        gallery_order=gallery_order,
        selected_artwork=inset if inset else state.selected_artwork,
        seconds_remaining=seconds_remaining,
        camera_active=camera_active,
        code=state.code if state.phase is Phase.SUBMITTED else None,
        result_id=state.result_id if inline_results else None,
    )
