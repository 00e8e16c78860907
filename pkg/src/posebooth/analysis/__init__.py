"""Offline coding and statistics toolkit for deployment data."""

from .records import (
    BOOTH_VALUES,
    CSV_HEADER,
    GROUP_VALUES,
    ORIGIN_VALUES,
    SOURCE_VALUES,
    STRATEGY_VALUES,
    TRAITS,
    RecordError,
    SessionRecord,
    load_records,
    write_records,
)
from .report import (
    BASELINE_AGREEMENT,
    CHOICES,
    SIGNIFICANCE_LEVEL,
    build_report,
    correlate_choices,
    kappa_report,
    tabulate,
)
from .stats import (
    CorrelationResult,
    InfiniteEffectSizeError,
    StatsError,
    UndefinedCorrelationError,
    UndefinedKappaError,
    build_rating_matrix,
    cohen_d_from_r,
    fleiss_kappa,
    midranks,
    spearman,
    validate_rating_matrix,
)

__all__ = [
    "BASELINE_AGREEMENT",
    "BOOTH_VALUES",
    "CHOICES",
    "CSV_HEADER",
    "CorrelationResult",
    "GROUP_VALUES",
    "InfiniteEffectSizeError",
    "ORIGIN_VALUES",
    "RecordError",
    "SIGNIFICANCE_LEVEL",
    "SOURCE_VALUES",
    "STRATEGY_VALUES",
    "SessionRecord",
    "StatsError",
    "TRAITS",
    "UndefinedCorrelationError",
    "UndefinedKappaError",
    "build_rating_matrix",
    "build_report",
    "cohen_d_from_r",
    "correlate_choices",
    "fleiss_kappa",
    "kappa_report",
    "load_records",
    "midranks",
    "spearman",
    "tabulate",
    "validate_rating_matrix",
    "write_records",
]
