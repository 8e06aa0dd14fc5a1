"""Trope scoring, ranked temperature weighting, and stochastic sampling.

Three fitted TF-IDF spaces back the scoring functions:

  index space   expanded index corpora (a trope's own indexes plus the
                indexes of its description tropes, with multiplicity)
  movie space   one term per movie the trope occurs in
  text space    tokens of the trope's concatenated occurrence texts

The index method scores a candidate by the product of its index-space
similarities to every input. The co-occurrence method backs off through
description tropes: for a single input it is the maximum over the input
and its description tropes of (index similarity to the input, with the
input itself weighted 1) times movie-space similarity to the candidate;
multiple inputs take the maximum over per-input scores. Breadth selects
the index method (1), the co-occurrence method (3), or their product
(2); a text query multiplies in per-candidate text scores.

Ranking applies the multiplier ((N - rank) / N)^(1/theta) over the
0-based descending-score rank (ties broken by ascending trope id), and
suggestions are drawn without replacement with probability proportional
to the weighted scores. The PRNG is numpy's PCG64 seeded with the query
seed; each draw picks the first candidate whose cumulative normalized
weight exceeds a uniform variate, so equal (scores, k, seed) reproduce
equal outputs across runs. Temperature 0 is a deterministic mode that
skips the multiplier and returns the top-k by raw score.
"""

from __future__ import annotations

import secrets
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional

import numpy as np

from . import vectorizer
from .corpus import Corpus
from .errors import (
    AllZeroScoresError,
    EmptyCandidateSetError,
    InvalidQueryError,
    InvalidTemperatureError,
    NotFoundError,
)

DEFAULT_TEMPERATURE = 0.02
MAX_EVIDENCE = 5


@dataclass
class SuggestionQuery:
    input_tropes: tuple[str, ...] = ()
    text: Optional[str] = None
    breadth: int = 2
    index_filters: tuple[str, ...] = ()
    movie_filters: tuple[str, ...] = ()
    count: int = 5
    temperature: float = DEFAULT_TEMPERATURE
    seed: Optional[int] = None
    exclude: tuple[str, ...] = ()


@dataclass(frozen=True)
class Evidence:
    movie: str
    text: str


@dataclass
class ScoredTrope:
    trope: str
    raw_score: float
    final_score: float
    rank: int
    evidence: tuple[Evidence, ...] = ()


@dataclass
class SuggestionOutcome:
    suggestions: list[ScoredTrope]
    seed: int
    candidate_count: int


def expanded_index_corpus(corpus: Corpus, trope_id: str) -> dict[str, int]:
    """Multiset sum of the trope's indexes and its description tropes' indexes."""
    trope = corpus.trope(trope_id)
    counts: Counter[str] = Counter(trope.indexes)
    for desc_id in trope.description_tropes:
        counts.update(corpus.tropes[desc_id].indexes)
    return dict(counts)


def filter_candidates(
    corpus: Corpus,
    index_filters: Iterable[str] = (),
    movie_filters: Iterable[str] = (),
    exclude: Iterable[str] = (),
    inputs: Iterable[str] = (),
) -> set[str]:
    """Candidate tropes: first-order index membership and movie occurrence
    filters (each keeps tropes matching at least one listed id), minus
    inputs and exclusions. Unknown filter ids match nothing."""
    candidates = set(corpus.trope_ids)
    index_filters = tuple(index_filters)
    movie_filters = tuple(movie_filters)
    if index_filters:
        members: set[str] = set()
        for index_id in index_filters:
            index = corpus.indexes.get(index_id)
            if index is not None:
                members.update(index.member_tropes)
        candidates &= members
    if movie_filters:
        occupants: set[str] = set()
        for movie_id in movie_filters:
            movie = corpus.movies.get(movie_id)
            if movie is not None:
                occupants.update(movie.tropes)
        candidates &= occupants
    candidates.difference_update(inputs)
    candidates.difference_update(exclude)
    return candidates


def _temperature_core(values: np.ndarray, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Rank-weighted scores plus 0-based ranks; caller orders entries by
    ascending id so rank ties resolve to the lexicographically smaller id."""
    n = len(values)
    order = np.lexsort((np.arange(n), -values))
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.arange(n)
    multiplier = ((n - ranks) / n) ** (1.0 / theta)
    return multiplier * values, ranks


def apply_temperature(scores: Mapping[str, float], theta: float) -> dict[str, float]:
    """s(T) = ((N - rank(T)) / N)^(1/theta) * s~(T) over the candidate set."""
    if theta <= 0:
        raise InvalidTemperatureError(f"temperature must be positive, got {theta}")
    ids = sorted(scores)
    values = np.array([scores[i] for i in ids], dtype=np.float64)
    weighted, _ = _temperature_core(values, theta)
    return {i: float(v) for i, v in zip(ids, weighted)}


def _draw_without_replacement(values: np.ndarray, k: int, rng: np.random.Generator) -> list[int]:
    weights = np.where(values > 0.0, values, 0.0).astype(np.float64)
    draws: list[int] = []
    for _ in range(k):
        cum = np.cumsum(weights)
        total = cum[-1] if len(cum) else 0.0
        if total <= 0.0:
            break
        u = rng.random() * total
        idx = int(np.searchsorted(cum, u, side="right"))
        if idx >= len(weights):
            idx = int(np.flatnonzero(weights)[-1])
        draws.append(idx)
        weights[idx] = 0.0
    return draws


def sample_suggestions(scores: Mapping[str, float], k: int, seed: Optional[int] = None) -> list[str]:
    """Draw up to k candidate ids without replacement, proportional to score.

    Zero-score candidates are never drawn; the draw sequence is a pure
    function of (scores, k, seed).
    """
    if k < 1:
        raise InvalidQueryError(f"k must be >= 1, got {k}")
    ids = sorted(scores)
    values = np.array([scores[i] for i in ids], dtype=np.float64)
    if not np.any(values > 0.0):
        raise AllZeroScoresError("no candidate has a positive score")
    seed = secrets.randbits(63) if seed is None else int(seed)
    rng = np.random.Generator(np.random.PCG64(seed))
    return [ids[i] for i in _draw_without_replacement(values, k, rng)]


def attach_evidence(corpus: Corpus, suggestion: str, inputs: Iterable[str]) -> list[Evidence]:
    """Up to 5 movies containing the suggestion and at least one input trope,
    ordered by (shared input tropes desc, movie id asc), with the
    suggestion's occurrence text in each movie."""
    trope = corpus.trope(suggestion)
    input_set = {i for i in inputs if i in corpus.tropes}
    ranked: list[tuple[int, str, str]] = []
    for occ in trope.occurrences:
        shared = len(input_set.intersection(corpus.movies[occ.movie].tropes))
        if shared:
            ranked.append((-shared, occ.movie, occ.text))
    ranked.sort()
    return [Evidence(movie=m, text=t) for _, m, t in ranked[:MAX_EVIDENCE]]


def name_search(corpus: Corpus, fragment: str, limit: int = 10) -> list[str]:
    """Case-insensitive substring match over display names, ordered by
    (match position, name length, id)."""
    needle = fragment.lower()
    hits: list[tuple[int, int, str]] = []
    for trope_id, trope in corpus.tropes.items():
        pos = trope.name.lower().find(needle)
        if pos >= 0:
            hits.append((pos, len(trope.name), trope_id))
    hits.sort()
    return [trope_id for _, _, trope_id in hits[:limit]]


class SuggestionEngine:
    """Fitted scoring state over one corpus; immutable and reentrant."""

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self.index_space = vectorizer.fit(
            {tid: expanded_index_corpus(corpus, tid) for tid in corpus.trope_ids}
        )
        self.movie_space = vectorizer.fit(
            {
                tid: {occ.movie: 1 for occ in corpus.tropes[tid].occurrences}
                for tid in corpus.trope_ids
            }
        )
        self.text_space = vectorizer.fit(
            {
                tid: dict(
                    Counter(
                        vectorizer.tokenize(
                            "\n".join(occ.text for occ in corpus.tropes[tid].occurrences)
                        )
                    )
                )
                for tid in corpus.trope_ids
            }
        )

    # -- single-pair scoring -------------------------------------------------

    def index_score(self, inputs: Iterable[str], candidate: str) -> float:
        """Product over inputs (ascending id order) of index-space cosine."""
        ordered = sorted(set(inputs))
        if not ordered:
            raise InvalidQueryError("index_score requires at least one input")
        score = 1.0
        for input_id in ordered:
            score = score * self.index_space.similarity(input_id, candidate)
        return score

    def cooccurrence_score(self, input_trope: str, candidate: str) -> float:
        """Max over the input and its description tropes of index-similarity
        weight (1 for the input itself) times movie-space cosine."""
        trope = self.corpus.trope(input_trope)
        self.corpus.trope(candidate)
        best = self.movie_space.similarity(input_trope, candidate)
        for desc_id in trope.description_tropes:
            weight = self.index_space.similarity(input_trope, desc_id)
            best = max(best, weight * self.movie_space.similarity(desc_id, candidate))
        return best

    def cooccurrence_score_multi(self, inputs: Iterable[str], candidate: str) -> float:
        ordered = sorted(set(inputs))
        if not ordered:
            raise InvalidQueryError("cooccurrence_score_multi requires at least one input")
        return max(self.cooccurrence_score(i, candidate) for i in ordered)

    # -- all-candidate scoring -----------------------------------------------

    def index_scores_all(self, inputs: Iterable[str]) -> np.ndarray:
        ordered = sorted(set(inputs))
        if not ordered:
            raise InvalidQueryError("index_scores_all requires at least one input")
        scores = self.index_space.doc_similarities(ordered[0])
        for input_id in ordered[1:]:
            scores = scores * self.index_space.doc_similarities(input_id)
        return scores

    def cooccurrence_scores_all(self, input_trope: str) -> np.ndarray:
        trope = self.corpus.trope(input_trope)
        doc_ids = [input_trope, *trope.description_tropes]
        rows = [self.corpus.row_of[d] for d in doc_ids]
        weights = self.index_space.doc_similarities(input_trope)[rows]
        weights[0] = 1.0
        sims = self.movie_space.rows_similarities(rows)
        weighted = sims.multiply(weights[np.newaxis, :]).tocsr()
        best = weighted.max(axis=1).toarray().ravel()
        return best

    def cooccurrence_scores_multi_all(self, inputs: Iterable[str]) -> np.ndarray:
        ordered = sorted(set(inputs))
        if not ordered:
            raise InvalidQueryError("cooccurrence_scores_multi_all requires at least one input")
        scores = self.cooccurrence_scores_all(ordered[0])
        for input_id in ordered[1:]:
            scores = np.maximum(scores, self.cooccurrence_scores_all(input_id))
        return scores

    def text_scores(self, text: str) -> np.ndarray:
        """Text-to-trope scores for every trope, aligned with corpus.trope_ids."""
        return self.text_space.query_similarity(dict(Counter(vectorizer.tokenize(text))))

    # -- query pipeline --------------------------------------------------------

    def _validate_query(self, query: SuggestionQuery) -> SuggestionQuery:
        inputs = tuple(sorted(set(query.input_tropes)))
        for input_id in inputs:
            if input_id not in self.corpus.tropes:
                raise NotFoundError(f"unknown trope id {input_id!r}")
        text = query.text.strip() if query.text else None
        if not inputs and not text:
            raise InvalidQueryError("query needs input tropes or non-empty text")
        if query.breadth not in (1, 2, 3):
            raise InvalidQueryError(f"breadth must be 1, 2, or 3, got {query.breadth}")
        if query.count < 1:
            raise InvalidQueryError(f"count must be >= 1, got {query.count}")
        if query.temperature < 0:
            raise InvalidTemperatureError(f"temperature must be >= 0, got {query.temperature}")
        return replace(
            query,
            input_tropes=inputs,
            text=text,
            index_filters=tuple(sorted(set(query.index_filters))),
            movie_filters=tuple(sorted(set(query.movie_filters))),
            exclude=tuple(sorted(set(query.exclude))),
        )

    def _raw_scores(self, query: SuggestionQuery) -> tuple[np.ndarray, np.ndarray]:
        """Candidate rows (ascending, i.e. ascending trope id) and their s~."""
        candidates = filter_candidates(
            self.corpus,
            index_filters=query.index_filters,
            movie_filters=query.movie_filters,
            exclude=query.exclude,
            inputs=query.input_tropes,
        )
        if not candidates:
            raise EmptyCandidateSetError("filters eliminated every candidate trope")
        rows = np.array(sorted(self.corpus.row_of[c] for c in candidates), dtype=np.int64)

        if query.input_tropes:
            if query.breadth == 1:
                scores = self.index_scores_all(query.input_tropes)
            elif query.breadth == 3:
                scores = self.cooccurrence_scores_multi_all(query.input_tropes)
            else:
                scores = self.index_scores_all(query.input_tropes) * self.cooccurrence_scores_multi_all(
                    query.input_tropes
                )
            if query.text:
                scores = scores * self.text_scores(query.text)
        else:
            scores = self.text_scores(query.text)
        return rows, scores[rows]

    def combined_raw_score(self, query: SuggestionQuery) -> dict[str, float]:
        """s~ per candidate id, for inspection and oracle comparison."""
        rows, values = self._raw_scores(self._validate_query(query))
        return {self.corpus.trope_ids[r]: float(v) for r, v in zip(rows, values)}

    def suggest(self, query: SuggestionQuery) -> SuggestionOutcome:
        """Full pipeline: filter, score, rank-weight, sample, attach evidence."""
        query = self._validate_query(query)
        rows, values = self._raw_scores(query)

        if query.temperature == 0:
            order = np.lexsort((np.arange(len(values)), -values))
            if values[order[0]] <= 0.0:
                raise AllZeroScoresError("no candidate has a positive score")
            ranks = np.empty(len(values), dtype=np.int64)
            ranks[order] = np.arange(len(values))
            picked = [int(p) for p in order[: query.count] if values[p] > 0.0]
            final = values
        else:
            final, ranks = _temperature_core(values, query.temperature)
            if not np.any(final > 0.0):
                raise AllZeroScoresError("no candidate has a positive score")
            seed = secrets.randbits(63) if query.seed is None else int(query.seed)
            rng = np.random.Generator(np.random.PCG64(seed))
            picked = _draw_without_replacement(final, query.count, rng)
            query = replace(query, seed=seed)

        seed = query.seed if query.seed is not None else 0
        suggestions = []
        for pos in picked:
            trope_id = self.corpus.trope_ids[int(rows[pos])]
            suggestions.append(
                ScoredTrope(
                    trope=trope_id,
                    raw_score=float(values[pos]),
                    final_score=float(final[pos]),
                    rank=int(ranks[pos]),
                    evidence=tuple(attach_evidence(self.corpus, trope_id, query.input_tropes)),
                )
            )
        return SuggestionOutcome(
            suggestions=suggestions, seed=seed, candidate_count=len(values)
        )
