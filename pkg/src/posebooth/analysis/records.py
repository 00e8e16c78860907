"""Session records: the per-participant rows the analysis CLI consumes.

CSV header (documented wire format):

    code,booth,group,strategy,artwork_source,artwork_dynamism,pose_dynamism,
    narrative_origin,big5_openness,big5_conscientiousness,big5_extraversion,
    big5_agreeableness,big5_neuroticism,pleasantness,enjoyment

Likert and Big-Five cells may be blank; blank means not collected.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from ..pose.dynamism import DynamismRating

BOOTH_VALUES = ("public", "private")
GROUP_VALUES = ("group", "alone")
STRATEGY_VALUES = ("imitate", "reimagine", "none")
SOURCE_VALUES = ("finnish-golden-age", "wikiart")
ORIGIN_VALUES = ("model", "user", "both", "na")

TRAITS = ("openness", "conscientiousness", "extraversion", "agreeableness", "neuroticism")

CSV_HEADER = (
    "code",
    "booth",
    "group",
    "strategy",
    "artwork_source",
    "artwork_dynamism",
    "pose_dynamism",
    "narrative_origin",
    "big5_openness",
    "big5_conscientiousness",
    "big5_extraversion",
    "big5_agreeableness",
    "big5_neuroticism",
    "pleasantness",
    "enjoyment",
)


class RecordError(Exception):
    pass


@dataclass(frozen=True)
class SessionRecord:
    code: str
    booth: str
    group: str
    strategy: str
    artwork_source: str
    artwork_dynamism: DynamismRating
    pose_dynamism: DynamismRating
    narrative_origin: str
    big5: tuple[float, float, float, float, float] | None = None
    pleasantness: int | None = None
    enjoyment: int | None = None

    def __post_init__(self) -> None:
        checks = (
            ("booth", self.booth, BOOTH_VALUES),
            ("group", self.group, GROUP_VALUES),
            ("strategy", self.strategy, STRATEGY_VALUES),
            ("artwork_source", self.artwork_source, SOURCE_VALUES),
            ("narrative_origin", self.narrative_origin, ORIGIN_VALUES),
        )
        for name, value, allowed in checks:
            if value not in allowed:
                raise RecordError(f"{name} must be one of {allowed}, got {value!r}")
        if self.big5 is not None:
            if len(self.big5) != 5:
                raise RecordError("big5 must hold five trait scores")
            for trait, score in zip(TRAITS, self.big5):
                if not 1.0 <= score <= 5.0:
                    raise RecordError(f"big5 {trait} must be in [1,5], got {score}")
        for name, value in (("pleasantness", self.pleasantness), ("enjoyment", self.enjoyment)):
            if value is not None and not 1 <= value <= 5:
                raise RecordError(f"{name} must be in 1..5, got {value}")


def _opt_float(cell: str) -> float | None:
    cell = cell.strip()
    return float(cell) if cell else None


def _opt_int(cell: str) -> int | None:
    cell = cell.strip()
    return int(cell) if cell else None


def load_records(path: Path | str) -> list[SessionRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise RecordError(f"records file missing columns: {sorted(missing)}")
        for row_num, row in enumerate(reader, start=2):
            try:
                big5_cells = [_opt_float(row[f"big5_{t}"]) for t in TRAITS]
                if all(v is None for v in big5_cells):
                    big5 = None
                elif any(v is None for v in big5_cells):
                    raise RecordError("big5 scores must be all present or all blank")
                else:
                    big5 = tuple(big5_cells)
                records.append(
                    SessionRecord(
                        code=row["code"].strip(),
                        booth=row["booth"].strip(),
                        group=row["group"].strip(),
                        strategy=row["strategy"].strip(),
                        artwork_source=row["artwork_source"].strip(),
                        artwork_dynamism=DynamismRating.from_label(row["artwork_dynamism"]),
                        pose_dynamism=DynamismRating.from_label(row["pose_dynamism"]),
                        narrative_origin=row["narrative_origin"].strip(),
                        big5=big5,
                        pleasantness=_opt_int(row["pleasantness"]),
                        enjoyment=_opt_int(row["enjoyment"]),
                    )
                )
            except (RecordError, ValueError, KeyError) as exc:
                raise RecordError(f"row {row_num}: {exc}") from exc
    return records


def write_records(path: Path | str, records: list[SessionRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            big5 = r.big5 or (None,) * 5
            writer.writerow(
                [
                    r.code,
                    r.booth,
                    r.group,
                    r.strategy,
                    r.artwork_source,
                    str(r.artwork_dynamism),
                    str(r.pose_dynamism),
                    r.narrative_origin,
                    *["" if v is None else v for v in big5],
                    "" if r.pleasantness is None else r.pleasantness,
                    "" if r.enjoyment is None else r.enjoyment,
                ]
            )
