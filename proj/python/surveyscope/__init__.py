"""Discipline-aware evaluation toolkit for machine-generated surveys."""

from ._core import (  # noqa: F401
    ConfigError,
    ContentEntry,
    DataError,
    OutlineEntry,
    ReferenceEntry,
    RemoteError,
    SurveyDocument,
    align_texts,
    build_entries,
    compliance_contribution,
    compliance_score,
    compute_stats,
    concordance,
    cosine,
    elo_ratings,
    extract_references,
    fit_preference_weights,
    hungarian_max,
    keyword_filter,
    parse_markdown,
    parse_survey,
    rank_and_select,
    redundancy_weights,
    richness_ratios,
    spearman,
    test_embed,
)

__all__ = [
    "ConfigError",
    "ContentEntry",
    "DataError",
    "OutlineEntry",
    "ReferenceEntry",
    "RemoteError",
    "SurveyDocument",
    "align_texts",
    "build_entries",
    "compliance_contribution",
    "compliance_score",
    "compute_stats",
    "concordance",
    "cosine",
    "elo_ratings",
    "extract_references",
    "fit_preference_weights",
    "hungarian_max",
    "keyword_filter",
    "parse_markdown",
    "parse_survey",
    "rank_and_select",
    "redundancy_weights",
    "richness_ratios",
    "spearman",
    "test_embed",
]
