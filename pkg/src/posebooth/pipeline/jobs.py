"""Job orchestration: submission with bounded retry, idempotent finalization.

Job lifecycle is a DAG: pending -> completed | failed, with no transition
out of a terminal state. Duplicate completions for the same job are no-ops
returning the already-finalized result.
"""

from __future__ import annotations

import base64
import enum
import logging
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..clock import Clock, SystemClock
from ..pose.model import PoseSkeleton
from .backend import BackendTransportError, GenerationBackend
from .postprocess import Stage, postprocess
from .request import GeneratedResult, GenerationRequest

logger = logging.getLogger(__name__)

MAX_SUBMIT_ATTEMPTS = 3
RETRY_DELAYS = (0.5, 1.0, 2.0)


class PipelineError(Exception):
    pass


class SubmitFailedError(PipelineError):
    """Transport kept failing after all retry attempts; caller may retry later."""


class UnknownJobError(PipelineError):
    """Completion delivered for a job this deployment never submitted."""


class PersistError(PipelineError):
    """Result storage failed; the job is marked failed."""


class JobState(enum.Enum):
    PENDING = "pending"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class JobRecord:
    job_id: str
    pose: PoseSkeleton
    artwork_id: str
    booth: str
    session_id: str
    code: str
    state: JobState = JobState.PENDING
    result: GeneratedResult | None = None
    error: str | None = None
    degraded: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


class Pipeline:
    """Binds a generation backend, the post-processing chain, and the store."""

    def __init__(
        self,
        backend: GenerationBackend,
        stages: Sequence[Stage],
        store,
        clock: Clock | None = None,
        on_result: Callable[[GeneratedResult, str], None] | None = None,
        sleep: Callable[[float], None] = time.sleep,
        webhook_url: str | None = None,
    ):
        self.backend = backend
        self.stages = list(stages)
        self.store = store
        self.clock = clock or SystemClock()
        self.on_result = on_result
        self._sleep = sleep
        self.webhook_url = webhook_url
        self._jobs: dict[str, JobRecord] = {}
        self._registry_lock = threading.Lock()

    def submit(self, req: GenerationRequest, code: str) -> str:
        """Send the request to the backend; returns the opaque job id.

        Transport errors are retried with the bounded backoff schedule;
        after MAX_SUBMIT_ATTEMPTS the error surfaces as SubmitFailedError.
        """
        payload = req.to_payload(webhook_url=self.webhook_url)
        last_error: Exception | None = None
        for attempt in range(1, MAX_SUBMIT_ATTEMPTS + 1):
            try:
                job_id = self.backend.submit(payload)
                break
            except BackendTransportError as exc:
                last_error = exc
                if attempt < MAX_SUBMIT_ATTEMPTS:
                    delay = RETRY_DELAYS[attempt - 1]
                    logger.warning(
                        "backend submit attempt %d/%d failed (%s); retrying in %.1fs",
                        attempt, MAX_SUBMIT_ATTEMPTS, exc, delay,
                    )
                    self._sleep(delay)
        else:
            raise SubmitFailedError(
                f"backend unreachable after {MAX_SUBMIT_ATTEMPTS} attempts: {last_error}"
            ) from last_error

        record = JobRecord(
            job_id=job_id,
            pose=req.pose,
            artwork_id=req.style.artwork_id,
            booth=req.booth,
            session_id=req.session_id,
            code=code,
        )
        with self._registry_lock:
            self._jobs[job_id] = record

        if self.backend.delivery == "inline":
            completion = self.backend.poll(job_id)
            if completion is not None:
                self.finalize(completion)
        return job_id

    def finalize(self, completion: dict) -> GeneratedResult | None:
        """Apply a completion delivery; idempotent per job id.

        Returns the result for succeeded jobs (existing one on duplicates),
        None when the delivery was ignored (failure report, terminal job).
        """
        job_id = completion.get("job_id")
        with self._registry_lock:
            record = self._jobs.get(job_id)
        if record is None:
            raise UnknownJobError(f"completion for unknown job {job_id!r}")

        with record.lock:
            if record.state is JobState.COMPLETED:
                return record.result
            if record.state is JobState.FAILED:
                logger.info("ignoring completion for failed job %s", job_id)
                return None

            if completion.get("status") != "succeeded":
                record.state = JobState.FAILED
                record.error = str(completion.get("error") or "backend reported failure")
                logger.warning("job %s failed: %s", job_id, record.error)
                return None

            raw_image = base64.b64decode(completion["image"])
            processed = postprocess(raw_image, self.stages)
            if processed.degraded:
                record.degraded = True
                logger.warning(
                    "job %s finalized with degraded image (stage %s failed)",
                    job_id, processed.failed_stage,
                )

            result = GeneratedResult(
                result_id=job_id,
                image=processed.image,
                pose=record.pose,
                artwork_id=record.artwork_id,
                booth=record.booth,
                code=record.code,
                created_at=self.clock.now(),
            )
            try:
                self.store.persist_result(result)
            except Exception as exc:
                record.state = JobState.FAILED
                record.error = f"persist failed: {exc}"
                raise PersistError(record.error) from exc

            record.state = JobState.COMPLETED
            record.result = result

        if self.on_result is not None:
            self.on_result(result, record.session_id)
        return result

    def poll_pending(self) -> int:
        """For poll-delivery backends: fetch and finalize ready completions."""
        with self._registry_lock:
            pending = [r.job_id for r in self._jobs.values() if r.state is JobState.PENDING]
        finalized = 0
        for job_id in pending:
            completion = self.backend.poll(job_id)
            if completion is not None:
                if self.finalize(completion) is not None:
                    finalized += 1
        return finalized

    def job(self, job_id: str) -> JobRecord | None:
        with self._registry_lock:
            return self._jobs.get(job_id)
