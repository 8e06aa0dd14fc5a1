"""Typed trope knowledge corpus.

The corpus holds three entity kinds -- tropes, indexes, and movies -- plus
the derived inverse maps between them. It is built once, validated, and
then treated as immutable: every other module reads it and never writes.

Indexes are a separate entity kind even though some indexes are tropes
themselves; an index that shares its id with a trope carries
``is_trope=True`` and borrows that trope's display name.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    DuplicateIdError,
    InvalidIdError,
    NotFoundError,
    ReferentialIntegrityError,
)

logger = logging.getLogger(__name__)

ID_PATTERN = re.compile(r"^[A-Za-z0-9_\-./]+$")


@dataclass(frozen=True)
class Occurrence:
    """A trope's annotated appearance in one movie."""

    movie: str
    text: str = ""


@dataclass
class Trope:
    id: str
    name: str
    laconic: str = ""
    description_tropes: tuple[str, ...] = ()
    indexes: tuple[str, ...] = ()
    occurrences: tuple[Occurrence, ...] = ()


@dataclass
class Index:
    """A category grouping tropes; may itself be a trope (same id)."""

    id: str
    name: str
    is_trope: bool
    member_tropes: tuple[str, ...]


@dataclass
class Movie:
    id: str
    title: str
    year: Optional[int] = None
    synopsis: Optional[str] = None
    genres: Optional[tuple[str, ...]] = None
    tropes: tuple[str, ...] = ()


@dataclass
class StatsSummary:
    n_tropes: int
    n_indexes: int
    n_movies: int
    mean_description_tropes: float
    mean_indexes: float
    mean_occurrences: float


@dataclass
class LoadReport:
    """Normalization and validation counters produced while building a corpus."""

    n_tropes: int = 0
    n_indexes: int = 0
    n_movies: int = 0
    dropped_edges: int = 0
    dropped_self_references: int = 0
    merged_duplicate_occurrences: int = 0
    ignored_fields: list[str] = field(default_factory=list)
    messages: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.messages.append(message)
        logger.warning(message)


class Corpus:
    """Validated, read-only trope knowledge dataset.

    ``tropes``, ``indexes`` and ``movies`` are dicts keyed by id and
    iterate in ascending id order. ``trope_ids`` / ``row_of`` give the
    dense-integer interning used by the vector spaces: row i corresponds
    to the i-th trope id in lexicographic order.
    """

    def __init__(
        self,
        tropes: dict[str, Trope],
        indexes: dict[str, Index],
        movies: dict[str, Movie],
        load_report: Optional[LoadReport] = None,
    ):
        self.tropes = tropes
        self.indexes = indexes
        self.movies = movies
        self.trope_ids: tuple[str, ...] = tuple(tropes.keys())
        self.row_of: dict[str, int] = {t: i for i, t in enumerate(self.trope_ids)}
        self.load_report = load_report

    def __len__(self) -> int:
        return len(self.tropes)

    def trope(self, trope_id: str) -> Trope:
        try:
            return self.tropes[trope_id]
        except KeyError:
            raise NotFoundError(f"unknown trope id {trope_id!r}") from None

    def movie(self, movie_id: str) -> Movie:
        try:
            return self.movies[movie_id]
        except KeyError:
            raise NotFoundError(f"unknown movie id {movie_id!r}") from None

    def index(self, index_id: str) -> Index:
        try:
            return self.indexes[index_id]
        except KeyError:
            raise NotFoundError(f"unknown index id {index_id!r}") from None


def _check_id(kind: str, value: str) -> None:
    if not value or not ID_PATTERN.match(value):
        raise InvalidIdError(f"invalid {kind} id {value!r}")


def _dedupe_refs(
    trope_id: str, refs: Sequence[str], what: str, report: LoadReport
) -> tuple[str, ...]:
    """Deduplicate keeping first occurrence; drop self-references with a warning."""
    seen: set[str] = set()
    out: list[str] = []
    for ref in refs:
        if ref == trope_id:
            report.dropped_self_references += 1
            report.warn(f"trope {trope_id!r}: dropped self-reference in {what}")
            continue
        if ref in seen:
            continue
        seen.add(ref)
        out.append(ref)
    return tuple(out)


def _merge_occurrences(
    trope_id: str, occurrences: Sequence[Occurrence], report: LoadReport
) -> tuple[Occurrence, ...]:
    """Merge duplicate (trope, movie) rows, joining non-empty texts with newlines."""
    order: list[str] = []
    texts: dict[str, list[str]] = {}
    for occ in occurrences:
        if occ.movie not in texts:
            order.append(occ.movie)
            texts[occ.movie] = []
        else:
            report.merged_duplicate_occurrences += 1
            report.warn(f"trope {trope_id!r}: merged duplicate occurrence in {occ.movie!r}")
        if occ.text:
            texts[occ.movie].append(occ.text)
    return tuple(Occurrence(movie=m, text="\n".join(texts[m])) for m in order)


def build_corpus(
    tropes: Iterable[Trope],
    movies: Iterable[Movie],
    strict: bool = True,
    report: Optional[LoadReport] = None,
) -> Corpus:
    """Normalize, validate, and derive the inverse maps.

    In strict mode a dangling description-trope or occurrence-movie
    reference raises ReferentialIntegrityError; in lenient mode the edge
    is dropped and counted in the report. Index entities are derived from
    the tropes' index lists, so index references can never dangle.
    """
    report = report if report is not None else LoadReport()

    trope_map: dict[str, Trope] = {}
    for trope in tropes:
        _check_id("trope", trope.id)
        if trope.id in trope_map:
            raise DuplicateIdError(f"duplicate trope id {trope.id!r}")
        trope_map[trope.id] = trope

    movie_map: dict[str, Movie] = {}
    for movie in movies:
        _check_id("movie", movie.id)
        if movie.id in movie_map:
            raise DuplicateIdError(f"duplicate movie id {movie.id!r}")
        movie_map[movie.id] = movie

    normalized: dict[str, Trope] = {}
    for trope_id in sorted(trope_map):
        trope = trope_map[trope_id]
        desc = _dedupe_refs(trope_id, trope.description_tropes, "description_tropes", report)
        kept_desc = []
        for ref in desc:
            if ref not in trope_map:
                if strict:
                    raise ReferentialIntegrityError(trope_id, "description_tropes", ref)
                report.dropped_edges += 1
                report.warn(f"trope {trope_id!r}: dropped dangling description trope {ref!r}")
            else:
                kept_desc.append(ref)

        idx = _dedupe_refs(trope_id, trope.indexes, "indexes", report)
        for index_id in idx:
            _check_id("index", index_id)

        occurrences = _merge_occurrences(trope_id, trope.occurrences, report)
        kept_occ = []
        for occ in occurrences:
            if occ.movie not in movie_map:
                if strict:
                    raise ReferentialIntegrityError(trope_id, "occurrences", occ.movie)
                report.dropped_edges += 1
                report.warn(f"trope {trope_id!r}: dropped occurrence in unknown movie {occ.movie!r}")
            else:
                kept_occ.append(occ)

        normalized[trope_id] = Trope(
            id=trope_id,
            name=trope.name,
            laconic=trope.laconic,
            description_tropes=tuple(kept_desc),
            indexes=idx,
            occurrences=tuple(kept_occ),
        )

    index_members: dict[str, list[str]] = {}
    movie_tropes: dict[str, list[str]] = {m: [] for m in movie_map}
    for trope_id, trope in normalized.items():
        for index_id in trope.indexes:
            index_members.setdefault(index_id, []).append(trope_id)
        for occ in trope.occurrences:
            movie_tropes[occ.movie].append(trope_id)

    indexes: dict[str, Index] = {}
    for index_id in sorted(index_members):
        is_trope = index_id in normalized
        indexes[index_id] = Index(
            id=index_id,
            name=normalized[index_id].name if is_trope else index_id,
            is_trope=is_trope,
            member_tropes=tuple(sorted(index_members[index_id])),
        )

    final_movies: dict[str, Movie] = {}
    for movie_id in sorted(movie_map):
        movie = movie_map[movie_id]
        final_movies[movie_id] = Movie(
            id=movie_id,
            title=movie.title,
            year=movie.year,
            synopsis=movie.synopsis,
            genres=tuple(movie.genres) if movie.genres is not None else None,
            tropes=tuple(sorted(set(movie_tropes[movie_id]))),
        )

    report.n_tropes = len(normalized)
    report.n_indexes = len(indexes)
    report.n_movies = len(final_movies)
    return Corpus(normalized, indexes, final_movies, load_report=report)


def corpus_stats(corpus: Corpus) -> StatsSummary:
    """Entity counts plus per-trope attribute means (empty lists count as 0)."""
    n = len(corpus.tropes)
    if n == 0:
        return StatsSummary(0, len(corpus.indexes), len(corpus.movies), 0.0, 0.0, 0.0)
    total_desc = sum(len(t.description_tropes) for t in corpus.tropes.values())
    total_idx = sum(len(t.indexes) for t in corpus.tropes.values())
    total_occ = sum(len(t.occurrences) for t in corpus.tropes.values())
    return StatsSummary(
        n_tropes=n,
        n_indexes=len(corpus.indexes),
        n_movies=len(corpus.movies),
        mean_description_tropes=total_desc / n,
        mean_indexes=total_idx / n,
        mean_occurrences=total_occ / n,
    )


def sub_tropes(corpus: Corpus, trope_id: str) -> set[str]:
    """Members of the index sharing the trope's id; empty if it is not an index."""
    corpus.trope(trope_id)
    index = corpus.indexes.get(trope_id)
    if index is None:
        return set()
    return set(index.member_tropes)
