"""Dataset file parsing, canonical serialization, and synthetic fixtures.

The dataset format is newline-delimited JSON (UTF-8, one record per
line). Each record carries a ``kind`` field, either ``"trope"`` or
``"movie"``. Canonical serialization -- the form ``save_dataset`` emits
and the corpus fingerprint hashes -- is documented in
``docs/dataset_format.md``: records sorted by (kind, id), object keys in
a fixed order, compact separators, arrays in stored order.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .corpus import Corpus, LoadReport, Movie, Occurrence, Trope, build_corpus, ID_PATTERN
from .errors import IoError, ParseError

logger = logging.getLogger(__name__)

_TROPE_FIELDS = {"kind", "id", "name", "laconic", "description_tropes", "indexes", "occurrences"}
_MOVIE_FIELDS = {"kind", "id", "title", "year", "synopsis", "genres"}
_OCCURRENCE_FIELDS = {"movie", "text"}


def _require(obj: dict, key: str, kind: type, line_no: int):
    value = obj.get(key)
    if not isinstance(value, kind):
        raise ParseError(line_no, f"field {key!r} must be a {kind.__name__}")
    return value


def _check_str_list(obj: dict, key: str, line_no: int) -> list[str]:
    value = obj.get(key, [])
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(line_no, f"field {key!r} must be a list of strings")
    return value


def _warn_unknown(obj: dict, known: set, line_no: int, report: LoadReport) -> None:
    for key in obj:
        if key not in known and key not in report.ignored_fields:
            report.ignored_fields.append(key)
            report.warn(f"line {line_no}: ignoring unknown field {key!r}")


def _check_id(value: str, line_no: int) -> str:
    if not ID_PATTERN.match(value):
        raise ParseError(line_no, f"invalid id {value!r}")
    return value


def _parse_trope(obj: dict, line_no: int, report: LoadReport) -> Trope:
    _warn_unknown(obj, _TROPE_FIELDS, line_no, report)
    trope_id = _check_id(_require(obj, "id", str, line_no), line_no)
    name = _require(obj, "name", str, line_no)
    laconic = obj.get("laconic", "")
    if not isinstance(laconic, str):
        raise ParseError(line_no, "field 'laconic' must be a string")
    occurrences = []
    raw_occurrences = obj.get("occurrences", [])
    if not isinstance(raw_occurrences, list):
        raise ParseError(line_no, "field 'occurrences' must be a list")
    for raw in raw_occurrences:
        if not isinstance(raw, dict):
            raise ParseError(line_no, "occurrence entries must be objects")
        _warn_unknown(raw, _OCCURRENCE_FIELDS, line_no, report)
        movie = _require(raw, "movie", str, line_no)
        text = raw.get("text", "")
        if not isinstance(text, str):
            raise ParseError(line_no, "occurrence field 'text' must be a string")
        occurrences.append(Occurrence(movie=movie, text=text))
    return Trope(
        id=trope_id,
        name=name,
        laconic=laconic,
        description_tropes=tuple(_check_str_list(obj, "description_tropes", line_no)),
        indexes=tuple(_check_str_list(obj, "indexes", line_no)),
        occurrences=tuple(occurrences),
    )


def _parse_movie(obj: dict, line_no: int, report: LoadReport) -> Movie:
    _warn_unknown(obj, _MOVIE_FIELDS, line_no, report)
    movie_id = _check_id(_require(obj, "id", str, line_no), line_no)
    title = _require(obj, "title", str, line_no)
    year = obj.get("year")
    if year is not None and not isinstance(year, int):
        raise ParseError(line_no, "field 'year' must be an integer")
    synopsis = obj.get("synopsis")
    if synopsis is not None and not isinstance(synopsis, str):
        raise ParseError(line_no, "field 'synopsis' must be a string")
    genres = obj.get("genres")
    if genres is not None:
        if not isinstance(genres, list) or not all(isinstance(g, str) for g in genres):
            raise ParseError(line_no, "field 'genres' must be a list of strings")
        genres = tuple(genres)
    return Movie(id=movie_id, title=title, year=year, synopsis=synopsis, genres=genres)


def load_dataset(path: str | Path, strict: bool = True) -> Corpus:
    """Parse and validate a dataset file.

    In strict mode any dangling reference is fatal; in lenient mode
    dangling edges are dropped and counted in ``corpus.load_report``.
    """
    report = LoadReport()
    tropes: list[Trope] = []
    movies: list[Movie] = []
    try:
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(line_no, f"malformed JSON ({exc.msg})") from None
                if not isinstance(obj, dict):
                    raise ParseError(line_no, "record must be a JSON object")
                kind = obj.get("kind")
                if kind == "trope":
                    tropes.append(_parse_trope(obj, line_no, report))
                elif kind == "movie":
                    movies.append(_parse_movie(obj, line_no, report))
                else:
                    raise ParseError(line_no, f"unknown record kind {kind!r}")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return build_corpus(tropes, movies, strict=strict, report=report)


def _trope_record(trope: Trope) -> dict:
    return {
        "kind": "trope",
        "id": trope.id,
        "name": trope.name,
        "laconic": trope.laconic,
        "description_tropes": list(trope.description_tropes),
        "indexes": list(trope.indexes),
        "occurrences": [{"movie": o.movie, "text": o.text} for o in trope.occurrences],
    }


def _movie_record(movie: Movie) -> dict:
    record: dict = {"kind": "movie", "id": movie.id, "title": movie.title}
    if movie.year is not None:
        record["year"] = movie.year
    if movie.synopsis is not None:
        record["synopsis"] = movie.synopsis
    if movie.genres is not None:
        record["genres"] = list(movie.genres)
    return record


def iter_canonical_lines(corpus: Corpus) -> Iterator[str]:
    """Canonical serialization: movies then tropes, each sorted by id."""
    for movie_id in sorted(corpus.movies):
        yield json.dumps(_movie_record(corpus.movies[movie_id]), ensure_ascii=False, separators=(",", ":"))
    for trope_id in sorted(corpus.tropes):
        yield json.dumps(_trope_record(corpus.tropes[trope_id]), ensure_ascii=False, separators=(",", ":"))


def save_dataset(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical serialization; load(save(c)) reproduces c."""
    try:
        with open(path, "w", encoding="utf-8") as handle:
            for line in iter_canonical_lines(corpus):
                handle.write(line)
                handle.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def dataset_fingerprint(corpus: Corpus) -> str:
    """SHA-256 over the canonical serialization; identifies the corpus to clients."""
    digest = hashlib.sha256()
    for line in iter_canonical_lines(corpus):
        digest.update(line.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


_SYLLABLES = (
    "ba be bi bo bu da de di do du fa fe fi fo fu ga ge gi go gu "
    "ka ke ki ko ku la le li lo lu ma me mi mo mu na ne ni no nu "
    "ra re ri ro ru sa se si so su ta te ti to tu va ve vi vo vu"
).split()

_GENRES = ("drama", "comedy", "thriller", "scifi", "romance", "noir", "western", "horror")


def _make_words(rng: np.random.Generator, count: int) -> list[str]:
    lengths = rng.integers(2, 4, size=count)
    picks = rng.integers(0, len(_SYLLABLES), size=int(lengths.sum()))
    words = []
    pos = 0
    for length in lengths:
        words.append("".join(_SYLLABLES[i] for i in picks[pos : pos + length]))
        pos += int(length)
    return words


def _draw_mixed(
    rng: np.random.Generator,
    pool: np.ndarray,
    population: int,
    total: int,
    pool_fraction: float,
) -> list[int]:
    """Draw ~total distinct ints, pool_fraction of them from the pool and the
    rest uniformly from range(population); keeps draw order, dedupes."""
    from_pool = int(round(total * pool_fraction)) if len(pool) else 0
    picks: list[int] = []
    if from_pool:
        size = min(from_pool, len(pool))
        picks.extend(int(x) for x in rng.choice(pool, size=size, replace=False))
    remaining = total - len(picks)
    if remaining > 0 and population > 0:
        size = min(remaining, population)
        picks.extend(int(x) for x in rng.choice(population, size=size, replace=False))
    seen: set[int] = set()
    out: list[int] = []
    for p in picks:
        if p in seen:
            continue
        seen.add(p)
        out.append(p)
    return out[:total]


def generate_fixture(n_tropes: int, n_indexes: int, n_movies: int, seed: int) -> Corpus:
    """Deterministic pseudo-random corpus for tests and benchmarks.

    Attribute counts are Poisson-like with means 4 (indexes), 13
    (description tropes, capped by n_tropes-1), and 26 (occurrences,
    capped by n_movies). Structure is clustered: each index owns a movie
    pool and a vocabulary, tropes draw most occurrences from their
    indexes' pools and most description tropes from index-mates, so both
    index similarity and movie co-occurrence carry signal.
    """
    if n_tropes < 1:
        raise ValueError("n_tropes must be >= 1")
    rng = np.random.Generator(np.random.PCG64(int(seed)))

    trope_ids = [f"T{i + 1:05d}" for i in range(n_tropes)]
    index_ids = [f"I{i + 1:04d}" for i in range(n_indexes)]
    movie_ids = [f"M{i + 1:05d}" for i in range(n_movies)]

    global_vocab = _make_words(rng, 60)
    index_vocab = [_make_words(rng, 24) for _ in range(n_indexes)]

    # Index popularity is zipf-shaped so member counts are skewed like the
    # real wiki (a few huge indexes, a long tail).
    if n_indexes:
        weights = (np.arange(1, n_indexes + 1, dtype=np.float64)) ** -0.6
        weights /= weights.sum()
    memberships: list[list[int]] = []
    n_idx_draws = rng.poisson(4.0, size=n_tropes)
    for i in range(n_tropes):
        k = int(min(n_idx_draws[i], n_indexes, 12))
        if k == 0 or n_indexes == 0:
            memberships.append([])
            continue
        picks = rng.choice(n_indexes, size=k, replace=False, p=weights)
        memberships.append([int(j) for j in picks])
    covered = {j for member in memberships for j in member}
    for j in range(n_indexes):
        if j not in covered:
            memberships[rng.integers(0, n_tropes)].append(j)

    index_members: list[list[int]] = [[] for _ in range(n_indexes)]
    for i, member in enumerate(memberships):
        for j in member:
            index_members[j].append(i)
    member_arrays = [np.array(m, dtype=np.int64) for m in index_members]

    desc_lists: list[list[int]] = []
    n_desc_draws = rng.poisson(13.0, size=n_tropes)
    for i in range(n_tropes):
        d = int(min(n_desc_draws[i], n_tropes - 1))
        if d == 0:
            desc_lists.append([])
            continue
        pool = (
            np.unique(np.concatenate([member_arrays[j] for j in memberships[i]]))
            if memberships[i]
            else np.zeros(0, dtype=np.int64)
        )
        pool = pool[pool != i]
        picks = _draw_mixed(rng, pool, n_tropes, d, pool_fraction=0.7)
        desc_lists.append([p for p in picks if p != i])

    if n_movies:
        pool_sizes = np.minimum(3 + rng.poisson(max(0.04 * n_movies, 1.0), size=max(n_indexes, 1)), n_movies)
        movie_pools = [
            rng.choice(n_movies, size=int(pool_sizes[j]), replace=False) for j in range(n_indexes)
        ]
    else:
        movie_pools = [np.zeros(0, dtype=np.int64) for _ in range(n_indexes)]

    occ_lists: list[list[int]] = []
    n_occ_draws = rng.poisson(26.0, size=n_tropes)
    for i in range(n_tropes):
        m = int(min(n_occ_draws[i], n_movies))
        if m == 0:
            occ_lists.append([])
            continue
        pool = (
            np.unique(np.concatenate([movie_pools[j] for j in memberships[i]]))
            if memberships[i]
            else np.zeros(0, dtype=np.int64)
        )
        occ_lists.append(_draw_mixed(rng, pool, n_movies, m, pool_fraction=0.8))

    tropes: list[Trope] = []
    for i in range(n_tropes):
        word_pool = list(global_vocab)
        for j in memberships[i]:
            word_pool.extend(index_vocab[j])
        name_picks = rng.integers(0, len(word_pool), size=2)
        name = " ".join(word_pool[w].capitalize() for w in name_picks)
        laconic_len = int(rng.integers(4, 9))
        laconic_picks = rng.integers(0, len(word_pool), size=laconic_len)
        laconic = " ".join(word_pool[w] for w in laconic_picks) + "."

        occurrences = []
        if occ_lists[i]:
            lengths = 6 + rng.poisson(6.0, size=len(occ_lists[i]))
            picks = rng.integers(0, len(word_pool), size=int(lengths.sum()))
            pos = 0
            for movie_row, length in zip(occ_lists[i], lengths):
                text = " ".join(word_pool[w] for w in picks[pos : pos + int(length)])
                pos += int(length)
                occurrences.append(Occurrence(movie=movie_ids[movie_row], text=text))

        tropes.append(
            Trope(
                id=trope_ids[i],
                name=name,
                laconic=laconic,
                description_tropes=tuple(trope_ids[d] for d in desc_lists[i]),
                indexes=tuple(index_ids[j] for j in memberships[i]),
                occurrences=tuple(occurrences),
            )
        )

    movies: list[Movie] = []
    for i in range(n_movies):
        title_picks = rng.integers(0, len(global_vocab), size=2)
        title = " ".join(global_vocab[w].capitalize() for w in title_picks)
        year = int(1950 + rng.integers(0, 74))
        synopsis_picks = rng.integers(0, len(global_vocab), size=12)
        synopsis = " ".join(global_vocab[w] for w in synopsis_picks) + "."
        genre_count = int(rng.integers(1, 4))
        genres = tuple(
            _GENRES[g] for g in sorted(set(int(x) for x in rng.integers(0, len(_GENRES), size=genre_count)))
        )
        movies.append(Movie(id=movie_ids[i], title=title, year=year, synopsis=synopsis, genres=genres))

    return build_corpus(tropes, movies, strict=True)
