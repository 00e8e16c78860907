"""Agreement and correlation statistics for deployment coding data.

Implements multi-rater chance-corrected agreement, rank correlation with
mid-rank tie handling and a two-sided t-approximated p-value (optionally
cross-checked by a seeded permutation test), and the r-to-d effect-size
conversion d = 2r / sqrt(1 - r^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import t as student_t


class StatsError(Exception):
    pass


class UndefinedKappaError(StatsError):
    """Chance agreement is 1 while observed agreement is not: kappa undefined."""


class UndefinedCorrelationError(StatsError):
    """At least one input vector is constant; ranks carry no information."""


class InfiniteEffectSizeError(StatsError):
    """|r| = 1 maps to an unbounded effect size."""


def validate_rating_matrix(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise StatsError(f"rating matrix must be 2-D, got shape {m.shape}")
    n, q = m.shape
    if n < 2:
        raise StatsError(f"need at least 2 subjects, got {n}")
    if np.any(m < 0) or np.any(m != np.round(m)):
        raise StatsError("rating matrix entries must be non-negative integers")
    row_sums = m.sum(axis=1)
    if not np.all(row_sums == row_sums[0]):
        raise StatsError("every subject must be rated by the same number of raters")
    k = int(row_sums[0])
    if k < 2:
        raise StatsError(f"need at least 2 raters, got {k}")
    return m


def fleiss_kappa(matrix) -> float:
    """Chance-corrected agreement for n subjects x q categories, k raters each.

    kappa = (P_bar - P_e) / (1 - P_e), with per-subject agreement averaged
    into P_bar and chance agreement P_e from the category marginals.
    """
    m = validate_rating_matrix(matrix)
    n, _ = m.shape
    k = int(m.sum(axis=1)[0])

    p_categories = m.sum(axis=0) / (n * k)
    p_subjects = ((m * m).sum(axis=1) - k) / (k * (k - 1))
    p_bar = float(p_subjects.mean())
    p_e = float((p_categories * p_categories).sum())

    if 1.0 - p_e < 1e-12:
        if 1.0 - p_bar < 1e-12:
            return 1.0
        raise UndefinedKappaError("all raters used one category but agreement is not perfect")
    return (p_bar - p_e) / (1.0 - p_e)


def build_rating_matrix(
    assignments: Sequence[Sequence[str]], categories: Sequence[str]
) -> np.ndarray:
    """Counts matrix from per-subject rater label lists."""
    index = {c: i for i, c in enumerate(categories)}
    matrix = np.zeros((len(assignments), len(categories)), dtype=int)
    for row, labels in enumerate(assignments):
        for label in labels:
            try:
                matrix[row, index[label]] += 1
            except KeyError:
                raise StatsError(f"label {label!r} not in categories {list(categories)}") from None
    return matrix


def midranks(values: Sequence[float]) -> np.ndarray:
    """Average (mid) ranks, 1-based; ties share the mean of their positions."""
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="mergesort")
    ranks = np.empty(len(arr), dtype=float)
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    p_value: float
    n: int
    d: float | None = None
    p_permutation: float | None = None

    def __post_init__(self) -> None:
        if abs(self.rho) > 1.0:
            raise StatsError(f"|rho| must be <= 1, got {self.rho}")


def _rank_pearson(rx: np.ndarray, ry: np.ndarray) -> float:
    rho = float(np.corrcoef(rx, ry)[0, 1])
    # Floating error can push perfectly monotone data past +/-1.
    return max(-1.0, min(1.0, rho))


def _t_approx_p(rho: float, n: int) -> float:
    if abs(rho) >= 1.0:
        return 0.0
    t_stat = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return float(2.0 * student_t.sf(abs(t_stat), df=n - 2))


def spearman(
    x: Sequence[float],
    y: Sequence[float],
    permutations: int | None = None,
    seed: int = 0,
) -> CorrelationResult:
    """Rank correlation with mid-rank ties and a two-sided p-value.

    permutations > 0 adds a seeded resampling p-value alongside the
    t-approximation.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise StatsError("inputs must be equal-length 1-D sequences")
    n = len(xa)
    if n < 3:
        raise StatsError(f"need at least 3 observations, got {n}")
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise UndefinedCorrelationError("constant input vector")

    rx, ry = midranks(xa), midranks(ya)
    rho = _rank_pearson(rx, ry)
    p_value = _t_approx_p(rho, n)

    p_permutation = None
    if permutations:
        rng = np.random.default_rng(seed)
        hits = 0
        for _ in range(permutations):
            permuted = rng.permutation(ry)
            if abs(_rank_pearson(rx, permuted)) >= abs(rho) - 1e-12:
                hits += 1
        p_permutation = (hits + 1) / (permutations + 1)

    return CorrelationResult(rho=rho, p_value=p_value, n=n, p_permutation=p_permutation)


def cohen_d_from_r(r: float) -> float:
    """d = 2r / sqrt(1 - r^2); odd in r, unbounded as |r| -> 1."""
    if abs(r) > 1.0:
        raise StatsError(f"|r| must be <= 1, got {r}")
    if abs(r) == 1.0:
        raise InfiniteEffectSizeError("|r| = 1 gives an infinite effect size")
    return 2.0 * r / math.sqrt(1.0 - r * r)
