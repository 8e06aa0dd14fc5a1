from collections import Counter

import numpy as np
import pytest

from talestream.errors import (
    EmptyInputError,
    InsufficientPopulationError,
    ParseError,
)
from talestream.evalkit import (
    BootstrapResult,
    RatingSample,
    aggregate_ratings,
    bootstrap_ci,
    bootstrap_report,
    load_ratings_csv,
    overlap_campaign,
    question_correlation,
    random_baseline,
    topk_overlap,
)


def sample(input_id="i1", method="index", question="S1-2", rater="r1", rating=6):
    return RatingSample(input_id, method, question, rater, rating)


# -- rating sample -----------------------------------------------------------

def test_rating_bounds_enforced():
    with pytest.raises(ValueError):
        sample(rating=0)
    with pytest.raises(ValueError):
        sample(rating=8)
    assert sample(rating=1).rating == 1
    assert sample(rating=7).rating == 7


# -- random baseline -----------------------------------------------------------

def test_baseline_full_population_is_permutation(micro10):
    got = random_baseline(micro10, len(micro10.trope_ids), seed=5)
    assert sorted(got) == sorted(micro10.trope_ids)


def test_baseline_deterministic(micro10):
    assert random_baseline(micro10, 4, seed=11) == random_baseline(micro10, 4, seed=11)


def test_baseline_excludes(micro10):
    got = random_baseline(micro10, 9, seed=1, exclude=("T1",))
    assert "T1" not in got
    assert len(set(got)) == 9


def test_baseline_insufficient_population(micro10):
    with pytest.raises(InsufficientPopulationError):
        random_baseline(micro10, 11, seed=1)


def test_baseline_uniformity_monte_carlo(micro10):
    # spec-level check: 1e5 draws of k=1, each trope lands within 10% +- 1%
    counts = Counter()
    for seed in range(100_000):
        counts[random_baseline(micro10, 1, seed=seed)[0]] += 1
    assert set(counts) == set(micro10.trope_ids)
    for trope, count in counts.items():
        assert abs(count / 100_000 - 0.10) < 0.01, trope


# -- overlap -------------------------------------------------------------------

def test_overlap_identical_lists():
    assert topk_overlap(list("abcde"), list("abcde")) == 5


def test_overlap_disjoint_lists():
    assert topk_overlap(list("abc"), list("xyz")) == 0


def test_overlap_is_set_intersection():
    assert topk_overlap(["a", "b", "c"], ["c", "a", "q"]) == 2


# -- aggregation ------------------------------------------------------------------

def test_single_rater_mean():
    agg = aggregate_ratings([sample(question="S1-1", rating=6), sample(rating=6)])
    assert agg.means[("i1", "index", "S1-2")] == 6.0
    assert agg.n_dropped == 0


def test_below_threshold_rater_dropped():
    samples = [
        sample(rater="r1", question="S1-1", rating=3),  # unfamiliar
        sample(rater="r1", question="S1-2", rating=7),
        sample(rater="r2", question="S1-1", rating=6),
        sample(rater="r2", question="S1-2", rating=5),
    ]
    agg = aggregate_ratings(samples)
    assert agg.means[("i1", "index", "S1-2")] == 5.0  # only r2 remains
    assert agg.n_dropped == 1
    assert agg.n_responses == 2


def test_all_raters_below_threshold_removes_input():
    samples = [
        sample(rater="r1", question="S1-1", rating=2),
        sample(rater="r1", question="S1-2", rating=7),
    ]
    agg = aggregate_ratings(samples)
    assert not any(key[0] == "i1" for key in agg.means)
    assert agg.dropped_fraction == 1.0


def test_ten_percent_dropped_construction():
    # 5 inputs x 2 raters = 10 (input, rater) pairs, exactly one unfamiliar
    samples = []
    for i in range(5):
        for r in range(2):
            fam = 2 if (i, r) == (0, 0) else 6
            samples.append(sample(input_id=f"i{i}", rater=f"r{r}", question="S1-1", rating=fam))
            samples.append(sample(input_id=f"i{i}", rater=f"r{r}", question="S1-6", rating=5))
    agg = aggregate_ratings(samples)
    assert agg.dropped_fraction == pytest.approx(0.10)


def test_aggregation_order_independent():
    samples = [
        sample(rater="r1", question="S1-1", rating=6),
        sample(rater="r1", question="S1-1", rating=3),  # duplicate familiarity: min wins
        sample(rater="r1", question="S1-3", rating=4),
        sample(rater="r2", question="S1-1", rating=7),
        sample(rater="r2", question="S1-3", rating=6),
    ]
    forward = aggregate_ratings(samples)
    backward = aggregate_ratings(list(reversed(samples)))
    assert forward.means == backward.means
    assert forward.n_dropped == backward.n_dropped == 1


def test_rater_without_familiarity_kept():
    agg = aggregate_ratings([sample(question="S2-1", rating=4)])
    assert agg.means[("i1", "index", "S2-1")] == 4.0


def test_threshold_is_inclusive():
    # rating exactly at the threshold (5, "Somewhat Agree") is kept
    samples = [
        sample(question="S1-1", rating=5),
        sample(question="S1-4", rating=3),
    ]
    agg = aggregate_ratings(samples)
    assert ("i1", "index", "S1-4") in agg.means


# -- bootstrap -----------------------------------------------------------------------

def test_bootstrap_constant_vector_degenerate():
    res = bootstrap_ci([4.0] * 12, R=200, seed=1)
    assert res.mean == 4.0
    assert res.ci_low == 4.0
    assert res.ci_high == 4.0


def test_bootstrap_zero_one_values():
    values = [0.0] * 50 + [1.0] * 50
    res = bootstrap_ci(values, R=2000, level=0.95, seed=9)
    assert 0.0 < res.ci_low < 0.5 < res.ci_high < 1.0


def test_bootstrap_ci_brackets_mean():
    rng = np.random.default_rng(5)
    values = rng.normal(3.0, 0.5, size=40)
    res = bootstrap_ci(values, R=1000, seed=2)
    assert res.ci_low <= res.mean <= res.ci_high


def test_bootstrap_pure_function():
    values = [1.0, 2.0, 5.0, 3.5]
    a = bootstrap_ci(values, R=500, level=0.9, seed=42)
    b = bootstrap_ci(values, R=500, level=0.9, seed=42)
    assert a == b


def test_bootstrap_wider_level_nests():
    rng = np.random.default_rng(8)
    values = rng.normal(5, 1, size=36)
    narrow = bootstrap_ci(values, R=1000, level=0.95, seed=77)
    wide = bootstrap_ci(values, R=1000, level=0.99, seed=77)
    assert wide.ci_low <= narrow.ci_low
    assert narrow.ci_high <= wide.ci_high


def test_bootstrap_validation():
    with pytest.raises(EmptyInputError):
        bootstrap_ci([], R=100, seed=1)
    with pytest.raises(ValueError):
        bootstrap_ci([1.0], R=0, seed=1)
    with pytest.raises(ValueError):
        bootstrap_ci([1.0], R=10, level=1.5, seed=1)


# -- correlation -----------------------------------------------------------------------

def test_correlation_perfect():
    samples = []
    for i, (a, b) in enumerate([(1, 2), (3, 4), (5, 6), (7, 7)]):
        samples.append(sample(input_id=f"i{i}", question="S1-2", rating=a))
        samples.append(sample(input_id=f"i{i}", question="S1-3", rating=b))
    # monotone linear-ish relation; exact correlation computed by numpy
    got = question_correlation(samples, "S1-2", "S1-3")
    expected = float(np.corrcoef([1, 3, 5, 7], [2, 4, 6, 7])[0, 1])
    assert got == pytest.approx(expected)


def test_correlation_requires_two_pairs():
    samples = [
        sample(question="S1-2", rating=3),
        sample(question="S1-3", rating=4),
    ]
    with pytest.raises(EmptyInputError):
        question_correlation(samples, "S1-2", "S1-3")


def test_correlation_method_filter():
    samples = []
    for i in range(4):
        samples.append(sample(input_id=f"i{i}", method="index", question="S1-2", rating=i + 1))
        samples.append(sample(input_id=f"i{i}", method="index", question="S1-3", rating=i + 1))
        samples.append(sample(input_id=f"i{i}", method="random", question="S1-2", rating=5 - i))
        samples.append(sample(input_id=f"i{i}", method="random", question="S1-3", rating=i + 1))
    assert question_correlation(samples, "S1-2", "S1-3", method="index") == pytest.approx(1.0)
    assert question_correlation(samples, "S1-2", "S1-3", method="random") == pytest.approx(-1.0)


# -- CSV ---------------------------------------------------------------------------------

CSV_HEADER = "input_id,method,question,rater_id,rating"


def test_csv_round_trip(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text(
        f"{CSV_HEADER}\ni1,index,S1-1,r1,6\ni1,index,S1-2,r1,5\n", encoding="utf-8"
    )
    samples = load_ratings_csv(path)
    assert len(samples) == 2
    assert samples[0] == RatingSample("i1", "index", "S1-1", "r1", 6)


def test_csv_bad_header(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("a,b,c\n", encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        load_ratings_csv(path)
    assert exc.value.line_number == 1


def test_csv_malformed_row_line_number(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text(
        f"{CSV_HEADER}\ni1,index,S1-1,r1,6\ni1,index,S1-2,r1,not-a-number\n",
        encoding="utf-8",
    )
    with pytest.raises(ParseError) as exc:
        load_ratings_csv(path)
    assert exc.value.line_number == 3


def test_csv_out_of_range_rating(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text(f"{CSV_HEADER}\ni1,index,S1-1,r1,9\n", encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        load_ratings_csv(path)
    assert exc.value.line_number == 2


# -- report ---------------------------------------------------------------------------

def test_bootstrap_report_matches_library_calls():
    samples = []
    rng = np.random.default_rng(3)
    for i in range(6):
        for r in range(3):
            samples.append(sample(input_id=f"i{i}", rater=f"r{r}", question="S1-1", rating=6))
            samples.append(
                sample(
                    input_id=f"i{i}",
                    rater=f"r{r}",
                    question="S1-6",
                    rating=int(rng.integers(3, 8)),
                )
            )
    report = bootstrap_report(samples, R=400, level=0.95, seed=21)
    agg = aggregate_ratings(samples)
    values = sorted(
        (key[0], mean) for key, mean in agg.means.items() if key[2] == "S1-6"
    )
    expected = bootstrap_ci([m for _, m in values], R=400, level=0.95, seed=21)
    cell = report["methods"]["index"]["S1-6"]
    assert cell["mean"] == pytest.approx(expected.mean)
    assert cell["ci_low"] == pytest.approx(expected.ci_low)
    assert cell["ci_high"] == pytest.approx(expected.ci_high)
    assert cell["n_inputs"] == 6
    assert report["dropped_fraction"] == 0.0


# -- campaigns -----------------------------------------------------------------------

def test_campaign_k_zero_gives_zero_overlap(fixture200_engine):
    report = overlap_campaign(fixture200_engine, 5, 0, seed=3)
    assert report.mean_overlap == 0.0
    assert all(d["top_a"] == [] and d["top_b"] == [] for d in report.per_input)


def test_campaign_same_breadth_full_overlap(fixture200_engine):
    report = overlap_campaign(fixture200_engine, 5, 5, seed=3, breadth_a=1, breadth_b=1)
    assert report.mean_overlap == 5.0
    assert report.distinct_fraction == 0.0


def test_campaign_deterministic(fixture200_engine):
    a = overlap_campaign(fixture200_engine, 8, 5, seed=13)
    b = overlap_campaign(fixture200_engine, 8, 5, seed=13)
    assert a.per_input == b.per_input


def test_campaign_reports_per_input_lists(fixture200_engine):
    report = overlap_campaign(fixture200_engine, 6, 5, seed=2)
    assert len(report.per_input) == 6
    for entry in report.per_input:
        assert len(entry["top_a"]) <= 5
        assert len(entry["top_b"]) <= 5
        assert entry["overlap"] == topk_overlap(entry["top_a"], entry["top_b"])
