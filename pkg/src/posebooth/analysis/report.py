"""Descriptive tabulation and trait/choice correlation reports.

Ordinal and binary codings used for correlations (documented because rank
correlation needs numeric encodings):

    booth:            public=0, private=1
    group:            alone=0,  group=1
    artwork_source:   finnish-golden-age=0, wikiart=1
    dynamism ratings: low=1, medium=2, high=3
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path
from statistics import mean, stdev

from .records import (
    GROUP_VALUES,
    ORIGIN_VALUES,
    STRATEGY_VALUES,
    TRAITS,
    SessionRecord,
)
from .stats import (
    InfiniteEffectSizeError,
    UndefinedCorrelationError,
    build_rating_matrix,
    cohen_d_from_r,
    fleiss_kappa,
    spearman,
)

SIGNIFICANCE_LEVEL = 0.05

CHOICES = ("booth", "group", "artwork_source", "artwork_dynamism", "pose_dynamism")

_CHOICE_CODING = {
    "booth": lambda r: 0.0 if r.booth == "public" else 1.0,
    "group": lambda r: 0.0 if r.group == "alone" else 1.0,
    "artwork_source": lambda r: 0.0 if r.artwork_source == "finnish-golden-age" else 1.0,
    "artwork_dynamism": lambda r: float(int(r.artwork_dynamism)),
    "pose_dynamism": lambda r: float(int(r.pose_dynamism)),
}

# Agreement the original three-rater deployment coding achieved, reported
# next to replication values for context (not as an equality target).
BASELINE_AGREEMENT = {
    "artwork_dynamism": 0.96,
    "pose_dynamism": 0.86,
    "narrative_change": 0.88,
}

MIN_CORRELATION_N = 10


def _mean_sd(values: list[float]) -> dict:
    if not values:
        return {"mean": None, "sd": None, "n": 0}
    return {
        "mean": mean(values),
        "sd": stdev(values) if len(values) > 1 else None,
        "n": len(values),
    }


def tabulate(records: list[SessionRecord]) -> dict:
    """Counts, splits, proportions, and scale summaries for a record set.

    Narrative-origin proportions are reported over two denominators: all
    records, and only the records where a narrative change was coded
    (origin != na).
    """
    n = len(records)

    cells = Counter((r.booth, r.strategy, r.group) for r in records)
    by_cell = [
        {"booth": booth, "strategy": strategy, "group": group, "count": count}
        for (booth, strategy, group), count in sorted(
            cells.items(), key=lambda item: (-item[1], item[0])
        )
    ]

    origin_counts = Counter(r.narrative_origin for r in records)
    coded_n = sum(count for origin, count in origin_counts.items() if origin != "na")
    origin = {
        "counts": {origin: origin_counts.get(origin, 0) for origin in ORIGIN_VALUES},
        "n_all": n,
        "n_coded": coded_n,
        "proportions_all": {
            o: (origin_counts.get(o, 0) / n if n else 0.0) for o in ORIGIN_VALUES
        },
        "proportions_coded": {
            o: (origin_counts.get(o, 0) / coded_n if coded_n else 0.0)
            for o in ORIGIN_VALUES
            if o != "na"
        },
    }

    booth_totals = Counter(r.booth for r in records)
    source_split = Counter(r.artwork_source for r in records)
    group_split = Counter(r.group for r in records)
    strategy_split = Counter(r.strategy for r in records)

    big5 = {}
    for i, trait in enumerate(TRAITS):
        big5[trait] = _mean_sd([r.big5[i] for r in records if r.big5 is not None])

    likert = {
        "pleasantness": _mean_sd([float(r.pleasantness) for r in records if r.pleasantness]),
        "enjoyment": _mean_sd([float(r.enjoyment) for r in records if r.enjoyment]),
    }

    dynamism = {
        "artwork": Counter(str(r.artwork_dynamism) for r in records),
        "pose": Counter(str(r.pose_dynamism) for r in records),
    }

    return {
        "n": n,
        "by_booth_strategy_group": by_cell,
        "booth_totals": {"public": booth_totals.get("public", 0), "private": booth_totals.get("private", 0)},
        "source_split": {s: source_split.get(s, 0) for s in ("finnish-golden-age", "wikiart")},
        "group_split": {g: group_split.get(g, 0) for g in GROUP_VALUES},
        "strategy_split": {s: strategy_split.get(s, 0) for s in STRATEGY_VALUES},
        "narrative_origin": origin,
        "big5": big5,
        "likert": likert,
        "dynamism": {k: dict(v) for k, v in dynamism.items()},
    }


def correlate_choices(
    records: list[SessionRecord],
    permutations: int | None = None,
    seed: int = 0,
) -> list[dict]:
    """Rank correlations between each Big-Five trait and each coded choice.

    Emits the full trait x choice grid; pairs that cannot be computed
    (insufficient n, constant column) appear as skipped rows with a
    diagnostic instead of silently vanishing.
    """
    usable = [r for r in records if r.big5 is not None]
    rows = []
    for t_idx, trait in enumerate(TRAITS):
        for choice in CHOICES:
            if len(usable) < MIN_CORRELATION_N:
                rows.append(
                    {
                        "trait": trait,
                        "choice": choice,
                        "skipped": True,
                        "reason": f"need >= {MIN_CORRELATION_N} records with big5, got {len(usable)}",
                    }
                )
                continue
            xs = [r.big5[t_idx] for r in usable]
            ys = [_CHOICE_CODING[choice](r) for r in usable]
            try:
                result = spearman(xs, ys, permutations=permutations, seed=seed)
            except UndefinedCorrelationError as exc:
                rows.append(
                    {"trait": trait, "choice": choice, "skipped": True, "reason": str(exc)}
                )
                continue
            try:
                d = cohen_d_from_r(result.rho)
            except InfiniteEffectSizeError:
                d = None
            row = {
                "trait": trait,
                "choice": choice,
                "skipped": False,
                "n": result.n,
                "rho": result.rho,
                "p_value": result.p_value,
                "d": d,
                "significant": result.p_value < SIGNIFICANCE_LEVEL,
            }
            if result.p_permutation is not None:
                row["p_permutation"] = result.p_permutation
            rows.append(row)
    return rows


def load_rating_assignments(path: Path | str) -> dict[str, tuple[list[list[str]], list[str]]]:
    """Read a rater-level CSV (subject,rater,variable,category) into
    per-variable assignment lists plus their category orderings."""
    by_variable: dict[str, dict[str, list[str]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"subject", "rater", "variable", "category"}
        missing = required - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"ratings file missing columns: {sorted(missing)}")
        for row in reader:
            variable = row["variable"].strip()
            subject = row["subject"].strip()
            by_variable.setdefault(variable, {}).setdefault(subject, []).append(
                row["category"].strip()
            )
    out = {}
    for variable, subjects in by_variable.items():
        categories = sorted({c for labels in subjects.values() for c in labels})
        assignments = [labels for _, labels in sorted(subjects.items())]
        out[variable] = (assignments, categories)
    return out


def kappa_report(path: Path | str) -> dict:
    """Per-variable agreement, side by side with the original deployment's levels."""
    report = {}
    for variable, (assignments, categories) in load_rating_assignments(path).items():
        matrix = build_rating_matrix(assignments, categories)
        report[variable] = {
            "kappa": fleiss_kappa(matrix),
            "n_subjects": len(assignments),
            "n_raters": int(matrix.sum(axis=1)[0]),
            "categories": categories,
            "baseline": BASELINE_AGREEMENT.get(variable),
        }
    return report


def build_report(
    records: list[SessionRecord],
    permutations: int | None = None,
    seed: int = 0,
    ratings_path: Path | str | None = None,
) -> dict:
    report = {
        "tabulation": tabulate(records),
        "correlations": correlate_choices(records, permutations=permutations, seed=seed),
    }
    if ratings_path is not None:
        report["agreement"] = kappa_report(ratings_path)
    return report
