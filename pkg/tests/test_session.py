import random

import pytest

from posebooth.catalog import shuffled_view
from posebooth.session import (
    ArtworkSelected,
    CaptureTaken,
    ConsentGiven,
    Phase,
    StartCountdown,
    SubmissionAcked,
    Tick,
    Timings,
    advance,
    initial_state,
    snapshot,
)

T0 = 1_000.0


def fresh(booth="public"):
    return initial_state("st-1", booth, gallery_seed=0)


def walk_to(phase: Phase, now=T0, timings=Timings()):
    """Drive a fresh session to the requested phase; returns (state, now)."""
    state = fresh()
    if phase is Phase.CONSENT:
        return state, now
    state = advance(state, ConsentGiven(), now).state
    if phase is Phase.GALLERY:
        return state, now
    state = advance(state, ArtworkSelected("art-1"), now).state
    state = advance(state, StartCountdown(), now).state
    if phase is Phase.COUNTDOWN:
        return state, now
    now += timings.countdown
    state = advance(state, Tick(), now).state
    if phase is Phase.CAPTURING:
        return state, now
    state = advance(state, CaptureTaken("word-pair"), now).state
    assert state.phase is Phase.SUBMITTED
    return state, now


class TestTransitions:
    def test_consent_to_gallery(self):
        result = advance(fresh(), ConsentGiven(), T0)
        assert result.accepted
        assert result.state.phase is Phase.GALLERY

    def test_consent_given_in_gallery_rejected_with_diagnostic(self):
        state, now = walk_to(Phase.GALLERY)
        result = advance(state, ConsentGiven(), now)
        assert not result.accepted
        assert result.state == state
        assert "ConsentGiven" in result.diagnostic

    def test_selection_keeps_gallery_until_start(self):
        state, now = walk_to(Phase.GALLERY)
        result = advance(state, ArtworkSelected("a-9"), now)
        assert result.accepted
        assert result.state.phase is Phase.GALLERY
        assert result.state.selected_artwork == "a-9"

    def test_start_without_selection_rejected(self):
        state, now = walk_to(Phase.GALLERY)
        result = advance(state, StartCountdown(), now)
        assert not result.accepted

    def test_countdown_deadline_is_now_plus_ten(self):
        state, now = walk_to(Phase.COUNTDOWN)
        assert state.countdown_deadline == now + 10.0

    def test_countdown_fires_exactly_at_deadline(self):
        state, now = walk_to(Phase.COUNTDOWN)
        early = advance(state, Tick(), now + 9.999)
        assert early.state.phase is Phase.COUNTDOWN
        fired = advance(state, Tick(), now + 10.0)
        assert fired.state.phase is Phase.CAPTURING

    def test_capture_sets_code_and_reset_deadline(self):
        state, now = walk_to(Phase.CAPTURING)
        result = advance(state, CaptureTaken("lake-stone"), now)
        assert result.state.phase is Phase.SUBMITTED
        assert result.state.code == "lake-stone"
        assert result.state.reset_deadline == now + 60.0

    def test_reset_fires_exactly_at_sixty_seconds(self):
        state, now = walk_to(Phase.SUBMITTED)
        early = advance(state, Tick(), now + 59.999)
        assert early.state.phase is Phase.SUBMITTED
        fired = advance(state, Tick(), now + 60.0)
        assert fired.state.phase is Phase.CONSENT

    def test_reset_clears_selection_and_code(self):
        state, now = walk_to(Phase.SUBMITTED)
        result = advance(state, Tick(), now + 60.001)
        cleared = result.state
        assert cleared.phase is Phase.CONSENT
        assert cleared.selected_artwork is None
        assert cleared.code is None
        assert cleared.reset_deadline is None

    def test_reset_bumps_gallery_seed(self):
        state, now = walk_to(Phase.SUBMITTED)
        after = advance(state, Tick(), now + 60.0).state
        assert after.gallery_seed == state.gallery_seed + 1

    def test_capture_window_expiry_resets_without_seed_bump(self):
        state, now = walk_to(Phase.CAPTURING)
        result = advance(state, Tick(), now + Timings().capture_grace)
        assert result.state.phase is Phase.CONSENT
        assert result.state.gallery_seed == state.gallery_seed
        assert "capture window" in result.diagnostic

    def test_submission_acked_records_result(self):
        state, now = walk_to(Phase.SUBMITTED)
        result = advance(state, SubmissionAcked("r-1"), now)
        assert result.accepted
        assert result.state.phase is Phase.SUBMITTED
        assert result.state.result_id == "r-1"

    def test_submission_acked_elsewhere_rejected(self):
        state, now = walk_to(Phase.GALLERY)
        assert not advance(state, SubmissionAcked("r-1"), now).accepted

    def test_clock_regression_rejected(self):
        state = advance(fresh(), ConsentGiven(), T0).state
        result = advance(state, ArtworkSelected("a"), T0 - 1.0)
        assert not result.accepted
        assert "regression" in result.diagnostic

    def test_capture_taken_outside_capturing_rejected(self):
        state, now = walk_to(Phase.GALLERY)
        assert not advance(state, CaptureTaken("x"), now).accepted

    def test_advance_is_pure(self):
        state, now = walk_to(Phase.COUNTDOWN)
        a = advance(state, Tick(), now + 3.0)
        b = advance(state, Tick(), now + 3.0)
        assert a == b


class TestSnapshot:
    def test_countdown_seconds_floor(self, demo_assets):
        from posebooth.catalog import load_catalog

        catalog = load_catalog(demo_assets["manifest"])
        state, now = walk_to(Phase.COUNTDOWN)
        view = snapshot(state, catalog, now + 5.8)  # 4.2 s remaining
        assert view.seconds_remaining == 4
        assert view.camera_active
        assert view.selected_artwork == "art-1"

    def test_submitted_view_has_code_and_no_camera(self, demo_assets):
        from posebooth.catalog import load_catalog

        catalog = load_catalog(demo_assets["manifest"])
        state, now = walk_to(Phase.SUBMITTED)
        view = snapshot(state, catalog, now)
        assert view.code == "word-pair"
        assert not view.camera_active
        assert view.seconds_remaining is None

    def test_gallery_order_changes_after_generation(self):
        # Fresh seed after a completed generation: the next visitor's gallery
        # ordering differs from the previous one.
        from test_catalog import synthetic_catalog

        catalog = synthetic_catalog(10)
        state, now = walk_to(Phase.SUBMITTED)
        before = shuffled_view(catalog, state.gallery_seed)
        after_state = advance(state, Tick(), now + 60.0).state
        after = shuffled_view(catalog, after_state.gallery_seed)
        assert before != after

    def test_result_id_exposed_only_with_inline_results(self, demo_assets):
        from posebooth.catalog import load_catalog

        catalog = load_catalog(demo_assets["manifest"])
        state, now = walk_to(Phase.SUBMITTED)
        state = advance(state, SubmissionAcked("r-9"), now).state
        assert snapshot(state, catalog, now).result_id is None
        assert snapshot(state, catalog, now, inline_results=True).result_id == "r-9"


EVENT_POOL = [
    ConsentGiven(),
    ArtworkSelected("a-1"),
    ArtworkSelected("a-2"),
    StartCountdown(),
    CaptureTaken("code-x"),
    SubmissionAcked("r-x"),
]


class TestLiveness:
    def test_no_stuck_state_under_random_schedules(self):
        # From any state random events can reach, ticks alone must return the
        # session to a resting screen (consent/gallery) within one full cycle.
        timings = Timings()
        bound = timings.countdown + timings.capture_grace + timings.reset + 5.0
        rng = random.Random(20_240)
        for trial in range(200):
            state = fresh()
            now = T0
            for _ in range(rng.randint(1, 25)):
                now += rng.uniform(0.0, 5.0)
                event = rng.choice(EVENT_POOL + [Tick()] * 3)
                state = advance(state, event, now, timings).state
            deadline = now + bound
            while now < deadline and state.phase not in (Phase.CONSENT, Phase.GALLERY):
                now += 0.5
                state = advance(state, Tick(), now, timings).state
            assert state.phase in (Phase.CONSENT, Phase.GALLERY), f"stuck in {state.phase}"

    def test_full_cycle_duration_is_seventy_seconds_plus_capture(self):
        # Leaving the gallery at t0 with an immediate capture returns to
        # consent exactly 70 s later: 10 s countdown + 60 s reset.
        state, t0 = walk_to(Phase.COUNTDOWN)
        now = t0 + 10.0
        state = advance(state, Tick(), now).state
        state = advance(state, CaptureTaken("c"), now).state
        state = advance(state, Tick(), now + 59.999).state
        assert state.phase is Phase.SUBMITTED
        state = advance(state, Tick(), now + 60.0).state
        assert state.phase is Phase.CONSENT
        assert (now + 60.0) - t0 == 70.0
