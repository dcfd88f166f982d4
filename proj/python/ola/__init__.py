"""Output-language alignment toolkit for code-switched prompts."""

from importlib import resources as _resources

from ._ola_native import (
    ConfigError,
    CotParseError,
    DegenerateTable,
    EmptyGroupSet,
    EmptyInput,
    EmptyResponse,
    FormatError,
    InvalidLanguage,
    JudgeUnavailable,
    LanguageIdentifier,
    LlmError,
    MissingLanguage,
    MissingTemplate,
    OlaError,
    StageDependencyMissing,
    UndeterminedVerdict,
    ValidationError,
    __version__,
    aggregate_annotations,
    assemble_prompt,
    boundary_token,
    chi_square_2x2,
    classify_char,
    classify_pattern,
    detect_intrusions,
    diff_cell,
    format_rate,
    judge,
    run_pipeline,
    script_profile,
    script_ratio,
    segment_sentences,
    validate_cs_prompt,
)


def default_lid_corpus() -> str:
    """Directory of the bundled en/id/ko training sentences."""
    return str(_resources.files(__name__) / "data" / "lid")


def default_identifier(shortcut_threshold: float = 0.8) -> LanguageIdentifier:
    return LanguageIdentifier.from_corpus(default_lid_corpus(), shortcut_threshold)


__all__ = [name for name in dir() if not name.startswith("_")]
