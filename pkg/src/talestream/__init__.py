"""Trope-based story ideation: corpus model, suggestion engine, eval kit, HTTP service."""

from .corpus import (
    Corpus,
    Index,
    LoadReport,
    Movie,
    Occurrence,
    StatsSummary,
    Trope,
    build_corpus,
    corpus_stats,
    sub_tropes,
)
from .errors import (
    AllZeroScoresError,
    DuplicateIdError,
    EmptyCandidateSetError,
    EmptyInputError,
    InsufficientPopulationError,
    InvalidIdError,
    InvalidQueryError,
    InvalidTemperatureError,
    IoError,
    NotFoundError,
    ParseError,
    ReferentialIntegrityError,
    TaleStreamError,
)
from .ingest import (
    dataset_fingerprint,
    generate_fixture,
    iter_canonical_lines,
    load_dataset,
    save_dataset,
)
from .suggest import (
    Evidence,
    ScoredTrope,
    SuggestionEngine,
    SuggestionOutcome,
    SuggestionQuery,
    apply_temperature,
    sample_suggestions,
)
from .vectorizer import Vectorizer, tokenize

__version__ = "0.1.0"

__all__ = [
    "AllZeroScoresError",
    "Corpus",
    "DuplicateIdError",
    "EmptyCandidateSetError",
    "EmptyInputError",
    "Evidence",
    "Index",
    "InsufficientPopulationError",
    "InvalidIdError",
    "InvalidQueryError",
    "InvalidTemperatureError",
    "IoError",
    "LoadReport",
    "Movie",
    "NotFoundError",
    "Occurrence",
    "ParseError",
    "ReferentialIntegrityError",
    "ScoredTrope",
    "StatsSummary",
    "SuggestionEngine",
    "SuggestionOutcome",
    "SuggestionQuery",
    "TaleStreamError",
    "Trope",
    "Vectorizer",
    "apply_temperature",
    "build_corpus",
    "corpus_stats",
    "dataset_fingerprint",
    "generate_fixture",
    "iter_canonical_lines",
    "load_dataset",
    "sample_suggestions",
    "save_dataset",
    "sub_tropes",
    "tokenize",
]
