"""Privacy-preserving result store and viewer feed.

Layout: one flat directory per result (final image + pose document) plus an
append-only JSON-lines feed index. A feed entry becomes visible only after
both files are durable, so readers never observe partial results. Raw
camera captures are never handed to this module; pickup codes are stored
only as keyed hashes.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import logging
import os
import shutil
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .clock import Clock, SystemClock
from .pipeline.request import GeneratedResult
from .pose.model import serialize_pose

logger = logging.getLogger(__name__)

FEED_FILE = "feed.jsonl"
RESULTS_DIR = "results"
LOG_FILE = "interactions.jsonl"


class StoreError(Exception):
    pass


@dataclass(frozen=True)
class FeedEntry:
    result_id: str
    created_at: float
    booth: str
    artwork_id: str
    image_ref: str
    pose_ref: str
    code_hash: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "result_id": self.result_id,
                "created_at": self.created_at,
                "booth": self.booth,
                "artwork_id": self.artwork_id,
                "image_ref": self.image_ref,
                "pose_ref": self.pose_ref,
                "code_hash": self.code_hash,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "FeedEntry":
        data = json.loads(line)
        return cls(
            result_id=data["result_id"],
            created_at=float(data["created_at"]),
            booth=data["booth"],
            artwork_id=data["artwork_id"],
            image_ref=data["image_ref"],
            pose_ref=data["pose_ref"],
            code_hash=data["code_hash"],
        )


@dataclass(frozen=True)
class FeedPage:
    entries: tuple[FeedEntry, ...]
    new_count: int
    next_cursor: int
    resync: bool = False


def _fsync_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class ResultStore:
    """Single writer (the pipeline finalizer), many concurrent readers."""

    def __init__(self, root: Path | str, code_hash_secret: str, clock: Clock | None = None):
        self.root = Path(root)
        self.results_root = self.root / RESULTS_DIR
        self.feed_path = self.root / FEED_FILE
        self.results_root.mkdir(parents=True, exist_ok=True)
        self._secret = code_hash_secret.encode("utf-8")
        self.clock = clock or SystemClock()
        self._entries: list[FeedEntry] = []
        self._index: dict[str, int] = {}
        self._cond = threading.Condition()
        # Test hook: invoked after result files are written, before the feed
        # append; lets tests simulate a crash between the two.
        self._after_files_hook: Callable[[], None] | None = None
        self._load_feed()

    def _load_feed(self) -> None:
        if not self.feed_path.exists():
            return
        for line in self.feed_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            entry = FeedEntry.from_json(line)
            self._index[entry.result_id] = len(self._entries)
            self._entries.append(entry)

    def code_hash(self, code: str) -> str:
        """Keyed hash: operators holding the secret can link codes, feed readers cannot."""
        return hmac.new(self._secret, code.encode("utf-8"), hashlib.sha256).hexdigest()

    def persist_result(self, result: GeneratedResult) -> str:
        """Write image + pose durably, then publish the feed entry atomically."""
        with self._cond:
            if result.result_id in self._index:
                return result.result_id

        result_dir = self.results_root / result.result_id
        try:
            result_dir.mkdir(parents=True, exist_ok=True)
            _fsync_write(result_dir / "image.png", result.image)
            _fsync_write(
                result_dir / "pose.json", serialize_pose(result.pose).encode("utf-8")
            )
        except OSError as exc:
            raise StoreError(f"failed to write result files: {exc}") from exc

        if self._after_files_hook is not None:
            self._after_files_hook()

        entry = FeedEntry(
            result_id=result.result_id,
            created_at=result.created_at,
            booth=result.booth,
            artwork_id=result.artwork_id,
            image_ref=f"{RESULTS_DIR}/{result.result_id}/image.png",
            pose_ref=f"{RESULTS_DIR}/{result.result_id}/pose.json",
            code_hash=self.code_hash(result.code),
        )
        try:
            with open(self.feed_path, "a", encoding="utf-8") as fh:
                fh.write(entry.to_json() + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StoreError(f"failed to append feed entry: {exc}") from exc

        with self._cond:
            self._index[entry.result_id] = len(self._entries)
            self._entries.append(entry)
            self._cond.notify_all()
        return result.result_id

    def _position(self, cursor: int | str | None) -> tuple[int, bool]:
        """Resolve a cursor (entry count or last-seen id) to a feed position."""
        if cursor is None:
            return 0, False
        if isinstance(cursor, int):
            if 0 <= cursor <= len(self._entries):
                return cursor, False
            return 0, True
        index = self._index.get(cursor)
        if index is None:
            return 0, True
        return index + 1, False

    def feed_since(self, cursor: int | str | None = None, booth: str | None = None) -> FeedPage:
        """Entries strictly after the cursor, in feed order (snapshot semantics)."""
        with self._cond:
            position, resync = self._position(cursor)
            tail = tuple(self._entries[position:])
            next_cursor = len(self._entries)
        if booth is not None:
            tail = tuple(e for e in tail if e.booth == booth)
        return FeedPage(entries=tail, new_count=len(tail), next_cursor=next_cursor, resync=resync)

    def wait_for_entries(
        self, cursor: int | str | None, booth: str | None, timeout: float
    ) -> FeedPage:
        """Long-poll helper: parks until an entry lands after the cursor or timeout.

        Entries outside the booth filter still advance the cursor, so pollers
        never rescan them.
        """
        deadline = time.monotonic() + timeout
        while True:
            with self._cond:
                position, resync = self._position(cursor)
                if resync or len(self._entries) > position:
                    break
                remaining = deadline - time.monotonic()
                if remaining <= 0 or not self._cond.wait(timeout=remaining):
                    break
        return self.feed_since(cursor, booth)

    @property
    def feed_length(self) -> int:
        with self._cond:
            return len(self._entries)

    def read_image(self, result_id: str) -> bytes:
        path = self.results_root / result_id / "image.png"
        try:
            return path.read_bytes()
        except OSError as exc:
            raise StoreError(f"missing image for {result_id}: {exc}") from exc

    def read_pose(self, result_id: str) -> str:
        path = self.results_root / result_id / "pose.json"
        try:
            return path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StoreError(f"missing pose for {result_id}: {exc}") from exc

    def recover(self) -> list[str]:
        """Garbage-collect result directories that never reached the feed."""
        with self._cond:
            known = set(self._index)
        removed = []
        for entry_dir in sorted(self.results_root.iterdir()):
            if entry_dir.is_dir() and entry_dir.name not in known:
                shutil.rmtree(entry_dir)
                removed.append(entry_dir.name)
        if removed:
            logger.info("recovered store: removed %d orphaned result(s)", len(removed))
        return removed


def scan_for_bytes(root: Path | str, needle: bytes) -> int:
    """Count occurrences of a byte pattern across every file under root."""
    if not needle:
        raise ValueError("needle must be non-empty")
    hits = 0
    for path in sorted(Path(root).rglob("*")):
        if path.is_file():
            hits += path.read_bytes().count(needle)
    return hits


@dataclass(frozen=True)
class LogEvent:
    timestamp: float
    station_id: str
    event: str
    phase: str
    level: str = "event"  # "event" | "diagnostic"

    def to_json(self) -> str:
        return json.dumps(
            {
                "timestamp": self.timestamp,
                "station_id": self.station_id,
                "event": self.event,
                "phase": self.phase,
                "level": self.level,
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "LogEvent":
        data = json.loads(line)
        return cls(
            timestamp=float(data["timestamp"]),
            station_id=data["station_id"],
            event=data["event"],
            phase=data["phase"],
            level=data.get("level", "event"),
        )


@dataclass
class _LogQueue:
    limit: int
    items: deque = field(default_factory=deque)
    dropped: int = 0


class InteractionLog:
    """Append-only interaction log with a bounded hand-off queue.

    append() only enqueues, so the session critical path never waits on
    disk; flush() (called by a background flusher or tests) drains to the
    JSON-lines file. On overflow the oldest diagnostic-level entries are
    dropped first and a counter is incremented.
    """

    def __init__(self, path: Path | str, queue_limit: int = 1024):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._queue = _LogQueue(limit=queue_limit)
        self._lock = threading.Lock()
        self._watermarks: dict[str, float] = {}

    @property
    def dropped_count(self) -> int:
        with self._lock:
            return self._queue.dropped

    def append(self, event: LogEvent) -> bool:
        """Enqueue one event; False if rejected for a per-station clock regression."""
        with self._lock:
            last = self._watermarks.get(event.station_id)
            if last is not None and event.timestamp < last:
                logger.warning(
                    "rejected log event for %s: timestamp %s < %s",
                    event.station_id, event.timestamp, last,
                )
                return False
            self._watermarks[event.station_id] = event.timestamp

            if len(self._queue.items) >= self._queue.limit:
                victim = None
                for i, queued in enumerate(self._queue.items):
                    if queued.level == "diagnostic":
                        victim = i
                        break
                if victim is not None:
                    del self._queue.items[victim]
                else:
                    self._queue.items.popleft()
                self._queue.dropped += 1
            self._queue.items.append(event)
        return True

    def flush(self) -> int:
        with self._lock:
            pending = list(self._queue.items)
            self._queue.items.clear()
        if not pending:
            return 0
        with open(self.path, "a", encoding="utf-8") as fh:
            for event in pending:
                fh.write(event.to_json() + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        return len(pending)

    def read_all(self) -> list[LogEvent]:
        self.flush()
        if not self.path.exists():
            return []
        return [
            LogEvent.from_json(line)
            for line in self.path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]


def replay_phases(events: Iterable[LogEvent], station_id: str) -> list[str]:
    """Phase sequence one station went through, as recorded in the log."""
    return [e.phase for e in events if e.station_id == station_id]
