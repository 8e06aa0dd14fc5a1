import pytest

from talestream.corpus import (
    Movie,
    Occurrence,
    Trope,
    build_corpus,
    corpus_stats,
    sub_tropes,
)
from talestream.errors import (
    DuplicateIdError,
    InvalidIdError,
    NotFoundError,
    ReferentialIntegrityError,
)


def make_corpus(tropes, movies, **kwargs):
    return build_corpus(tropes, movies, **kwargs)


def test_three_trope_one_movie_resolves():
    tropes = [
        Trope(id="a", name="A", indexes=("I1",), occurrences=(Occurrence("m", "x"),)),
        Trope(id="b", name="B", description_tropes=("a",), indexes=("I1",)),
        Trope(id="c", name="C", indexes=("I2",)),
    ]
    corpus = make_corpus(tropes, [Movie(id="m", title="M")])
    assert set(corpus.tropes) == {"a", "b", "c"}
    assert set(corpus.indexes) == {"I1", "I2"}
    assert corpus.indexes["I1"].member_tropes == ("a", "b")
    assert corpus.movies["m"].tropes == ("a",)


def test_dense_interning_is_bijection(micro10):
    rows = [micro10.row_of[t] for t in micro10.trope_ids]
    assert rows == list(range(len(micro10.trope_ids)))
    assert len(set(micro10.trope_ids)) == len(micro10.trope_ids)


def test_duplicate_trope_id_rejected():
    tropes = [Trope(id="a", name="A"), Trope(id="a", name="A2")]
    with pytest.raises(DuplicateIdError):
        make_corpus(tropes, [])


def test_duplicate_movie_id_rejected():
    movies = [Movie(id="m", title="M"), Movie(id="m", title="M2")]
    with pytest.raises(DuplicateIdError):
        make_corpus([Trope(id="a", name="A")], movies)


def test_bad_id_rejected():
    with pytest.raises(InvalidIdError):
        make_corpus([Trope(id="bad id", name="X")], [])
    with pytest.raises(InvalidIdError):
        make_corpus([Trope(id="", name="X")], [])


def test_self_reference_dropped_with_warning():
    tropes = [Trope(id="a", name="A", description_tropes=("a",), indexes=("a",))]
    corpus = make_corpus(tropes, [])
    assert corpus.tropes["a"].description_tropes == ()
    assert corpus.tropes["a"].indexes == ()
    report = corpus.load_report
    assert report.dropped_self_references == 2
    assert any("self" in m for m in report.messages)


def test_reference_lists_deduplicated_keeping_first():
    tropes = [
        Trope(id="a", name="A"),
        Trope(id="b", name="B", description_tropes=("a", "a"), indexes=("I2", "I1", "I2")),
    ]
    corpus = make_corpus(tropes, [])
    assert corpus.tropes["b"].description_tropes == ("a",)
    assert corpus.tropes["b"].indexes == ("I2", "I1")


def test_duplicate_occurrences_merged_with_newline():
    tropes = [
        Trope(
            id="a",
            name="A",
            occurrences=(Occurrence("m", "first"), Occurrence("m", "second"), Occurrence("m", "")),
        )
    ]
    corpus = make_corpus(tropes, [Movie(id="m", title="M")])
    occs = corpus.tropes["a"].occurrences
    assert len(occs) == 1
    assert occs[0].text == "first\nsecond"
    assert corpus.load_report.merged_duplicate_occurrences == 2


def test_dangling_description_trope_strict():
    tropes = [Trope(id="a", name="A", description_tropes=("ghost",))]
    with pytest.raises(ReferentialIntegrityError) as exc:
        make_corpus(tropes, [], strict=True)
    assert "ghost" in str(exc.value)


def test_dangling_movie_strict_names_target():
    tropes = [Trope(id="a", name="A", occurrences=(Occurrence("M404", "x"),))]
    with pytest.raises(ReferentialIntegrityError) as exc:
        make_corpus(tropes, [], strict=True)
    assert "M404" in str(exc.value)


def test_dangling_references_dropped_in_lenient_mode():
    tropes = [
        Trope(
            id="a",
            name="A",
            description_tropes=("ghost",),
            occurrences=(Occurrence("M404", "x"),),
        )
    ]
    corpus = make_corpus(tropes, [], strict=False)
    assert corpus.tropes["a"].description_tropes == ()
    assert corpus.tropes["a"].occurrences == ()
    assert corpus.load_report.dropped_edges == 2


def test_index_membership_inverse_bidirectional(fixture200):
    for trope in fixture200.tropes.values():
        for index_id in trope.indexes:
            assert trope.id in fixture200.indexes[index_id].member_tropes
    for index in fixture200.indexes.values():
        for member in index.member_tropes:
            assert index.id in fixture200.tropes[member].indexes


def test_movie_trope_inverse_bidirectional(fixture200):
    for trope in fixture200.tropes.values():
        for occ in trope.occurrences:
            assert trope.id in fixture200.movies[occ.movie].tropes
    for movie in fixture200.movies.values():
        for trope_id in movie.tropes:
            assert any(o.movie == movie.id for o in fixture200.tropes[trope_id].occurrences)


def test_every_index_has_members(micro10, fixture200):
    for corpus in (micro10, fixture200):
        assert all(len(i.member_tropes) >= 1 for i in corpus.indexes.values())


def test_index_is_trope_flag(micro10):
    assert micro10.indexes["AntiHeroLike"].is_trope
    assert not micro10.indexes["CrimeTropes"].is_trope


def test_stats_empty_corpus():
    stats = corpus_stats(make_corpus([], []))
    assert (stats.n_tropes, stats.n_indexes, stats.n_movies) == (0, 0, 0)
    assert stats.mean_description_tropes == 0.0
    assert stats.mean_indexes == 0.0
    assert stats.mean_occurrences == 0.0


def test_stats_micro10_against_oracle_recount(micro10, oracle):
    stats = corpus_stats(micro10)
    n = len(oracle.tropes)
    assert stats.n_tropes == n == 10
    assert stats.n_indexes == 4
    assert stats.n_movies == 6
    assert stats.mean_description_tropes == pytest.approx(
        sum(len(t["description_tropes"]) for t in oracle.tropes.values()) / n
    )
    assert stats.mean_indexes == pytest.approx(
        sum(len(t["indexes"]) for t in oracle.tropes.values()) / n
    )
    assert stats.mean_occurrences == pytest.approx(
        sum(len(t["occurrences"]) for t in oracle.tropes.values()) / n
    )


def test_stats_order_independent(micro10):
    tropes = [micro10.tropes[t] for t in reversed(micro10.trope_ids)]
    movies = [micro10.movies[m] for m in reversed(sorted(micro10.movies))]
    shuffled = make_corpus(tropes, movies)
    assert corpus_stats(shuffled) == corpus_stats(micro10)


def test_sub_tropes_non_index_is_empty(micro10):
    assert sub_tropes(micro10, "T9") == set()


def test_sub_tropes_of_index_trope(micro10):
    # AntiHeroLike appears in three tropes' index lists
    assert sub_tropes(micro10, "AntiHeroLike") == {"T1", "T4", "T7"}


def test_sub_tropes_matches_linear_scan(micro10, oracle):
    expected = {
        tid
        for tid, rec in oracle.tropes.items()
        if "AntiHeroLike" in rec["indexes"]
    }
    assert sub_tropes(micro10, "AntiHeroLike") == expected


def test_sub_tropes_unknown_id(micro10):
    with pytest.raises(NotFoundError):
        sub_tropes(micro10, "nope")


def test_lookup_helpers_raise_not_found(micro10):
    with pytest.raises(NotFoundError):
        micro10.trope("nope")
    with pytest.raises(NotFoundError):
        micro10.movie("nope")
    with pytest.raises(NotFoundError):
        micro10.index("nope")
