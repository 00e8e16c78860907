"""Two-word pickup codes from curated wordlists.

Codes link a kiosk session to its generated result (and, in study use, to
the follow-up interview), so every pair must be unique for the whole
deployment across all stations and booths.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from pathlib import Path

from .clock import Clock, SystemClock

# Random draws before falling back to a deterministic scan for a free pair;
# keeps issuance O(1) in the common case and live near capacity.
MAX_RANDOM_TRIES = 64


class CodeCapacityError(Exception):
    """Every word pair has been issued; deploy with larger wordlists."""


@dataclass(frozen=True)
class PickupCode:
    word_a: str
    word_b: str
    issued_at: float

    @property
    def text(self) -> str:
        return f"{self.word_a}-{self.word_b}"


def load_wordlist(path: Path | str) -> tuple[str, ...]:
    """One word per line, UTF-8; blank lines and #-comments are skipped."""
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.append(word)
    if not words:
        raise ValueError(f"wordlist {path} is empty")
    return tuple(words)


class CodeIssuer:
    """Linearizable registry of issued codes, shared by all stations."""

    def __init__(
        self,
        words_a: tuple[str, ...],
        words_b: tuple[str, ...],
        clock: Clock | None = None,
        rng: random.Random | None = None,
    ):
        if not words_a or not words_b:
            raise ValueError("both wordlists must be non-empty")
        self.words_a = tuple(words_a)
        self.words_b = tuple(words_b)
        self.clock = clock or SystemClock()
        self._rng = rng or random.Random()
        self._issued: set[tuple[int, int]] = set()
        self._lock = threading.Lock()

    @property
    def capacity(self) -> int:
        return len(self.words_a) * len(self.words_b)

    @property
    def issued_count(self) -> int:
        with self._lock:
            return len(self._issued)

    def issue(self) -> PickupCode:
        with self._lock:
            if len(self._issued) >= self.capacity:
                raise CodeCapacityError(
                    f"all {self.capacity} word pairs issued; use larger wordlists"
                )
            pair = None
            for _ in range(MAX_RANDOM_TRIES):
                candidate = (
                    self._rng.randrange(len(self.words_a)),
                    self._rng.randrange(len(self.words_b)),
                )
                if candidate not in self._issued:
                    pair = candidate
                    break
            if pair is None:
                free = [
                    (i, j)
                    for i in range(len(self.words_a))
                    for j in range(len(self.words_b))
                    if (i, j) not in self._issued
                ]
                pair = free[self._rng.randrange(len(free))]
            self._issued.add(pair)

        return PickupCode(
            word_a=self.words_a[pair[0]],
            word_b=self.words_b[pair[1]],
            issued_at=self.clock.now(),
        )
