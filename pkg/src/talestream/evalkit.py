"""Evaluation machinery: random baselines, top-k overlap, Likert rating
aggregation with familiarity filtering, and percentile bootstrap CIs.

The kit reproduces the computation pipeline only; it ingests rating CSVs
(header ``input_id,method,question,rater_id,rating``) from any study and
never ships study outcomes.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .corpus import Corpus
from .errors import (
    AllZeroScoresError,
    EmptyCandidateSetError,
    EmptyInputError,
    InsufficientPopulationError,
    IoError,
    ParseError,
)
from .suggest import SuggestionEngine, SuggestionQuery

FAMILIARITY_QUESTION = "S1-1"
DEFAULT_FAMILIARITY_THRESHOLD = 5  # "Somewhat Agree" on the 7-point scale


@dataclass(frozen=True)
class RatingSample:
    input_id: str
    method: str
    question: str
    rater_id: str
    rating: int

    def __post_init__(self):
        if not 1 <= self.rating <= 7:
            raise ValueError(f"rating must be in 1..7, got {self.rating}")


@dataclass
class BootstrapResult:
    mean: float
    ci_low: float
    ci_high: float
    iterations: int
    level: float


@dataclass
class AggregatedRatings:
    means: dict[tuple[str, str, str], float]  # (input_id, method, question) -> mean
    n_responses: int  # distinct (input, rater) pairs seen
    n_dropped: int

    @property
    def dropped_fraction(self) -> float:
        return self.n_dropped / self.n_responses if self.n_responses else 0.0


@dataclass
class OverlapReport:
    mean_overlap: float
    distinct_fraction: float
    per_input: list[dict]


def random_baseline(
    corpus: Corpus, k: int, seed: Optional[int] = None, exclude: Iterable[str] = ()
) -> list[str]:
    """Uniform sample of k trope ids without replacement."""
    population = sorted(set(corpus.trope_ids) - set(exclude))
    if k > len(population):
        raise InsufficientPopulationError(
            f"requested {k} tropes from a population of {len(population)}"
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    picks = rng.choice(len(population), size=k, replace=False)
    return [population[int(i)] for i in picks]


def topk_overlap(a: Sequence[str], b: Sequence[str]) -> int:
    return len(set(a) & set(b))


def aggregate_ratings(
    samples: Iterable[RatingSample],
    familiarity_threshold: int = DEFAULT_FAMILIARITY_THRESHOLD,
) -> AggregatedRatings:
    """Per-(input, method, question) rating means after familiarity filtering.

    A rater's ratings for an input are all dropped when their familiarity
    (question S1-1) rating for that input is below the threshold. Raters
    with no S1-1 record for an input are kept; duplicate S1-1 records take
    the minimum so the result is independent of record order.
    """
    samples = list(samples)
    familiarity: dict[tuple[str, str], int] = {}
    responses: set[tuple[str, str]] = set()
    for s in samples:
        key = (s.input_id, s.rater_id)
        responses.add(key)
        if s.question == FAMILIARITY_QUESTION:
            familiarity[key] = min(familiarity.get(key, 8), s.rating)

    dropped = {
        key for key, rating in familiarity.items() if rating < familiarity_threshold
    }
    sums: dict[tuple[str, str, str], float] = defaultdict(float)
    counts: dict[tuple[str, str, str], int] = defaultdict(int)
    for s in samples:
        if (s.input_id, s.rater_id) in dropped:
            continue
        cell = (s.input_id, s.method, s.question)
        sums[cell] += s.rating
        counts[cell] += 1
    means = {cell: sums[cell] / counts[cell] for cell in sums}
    return AggregatedRatings(means=means, n_responses=len(responses), n_dropped=len(dropped))


def bootstrap_ci(
    values: Sequence[float],
    R: int = 1000,
    level: float = 0.95,
    seed: Optional[int] = None,
) -> BootstrapResult:
    """Percentile bootstrap: R resampled means, empirical (1-level)/2 and
    1-(1-level)/2 quantiles. Pure function of (values, R, level, seed)."""
    data = np.asarray(list(values), dtype=np.float64)
    if data.size == 0:
        raise EmptyInputError("bootstrap_ci requires at least one value")
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.integers(0, data.size, size=(R, data.size))
    resampled_means = data[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    ci_low, ci_high = np.quantile(resampled_means, [alpha, 1.0 - alpha])
    return BootstrapResult(
        mean=float(data.mean()),
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        iterations=R,
        level=level,
    )


def question_correlation(
    samples: Iterable[RatingSample],
    question_a: str,
    question_b: str,
    method: Optional[str] = None,
) -> float:
    """Pearson correlation between two questions over (input, rater) pairs
    that answered both, optionally restricted to one method."""
    by_pair: dict[tuple[str, str], dict[str, int]] = defaultdict(dict)
    for s in samples:
        if method is not None and s.method != method:
            continue
        by_pair[(s.input_id, s.rater_id)][s.question] = s.rating
    xs, ys = [], []
    for answers in by_pair.values():
        if question_a in answers and question_b in answers:
            xs.append(answers[question_a])
            ys.append(answers[question_b])
    if len(xs) < 2:
        raise EmptyInputError("need at least two paired answers for a correlation")
    return float(np.corrcoef(xs, ys)[0, 1])


def load_ratings_csv(path: str | Path) -> list[RatingSample]:
    """Parse a ratings CSV; raises ParseError with the offending line number."""
    expected = ["input_id", "method", "question", "rater_id", "rating"]
    samples: list[RatingSample] = []
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != expected:
                raise ParseError(1, f"header must be {','.join(expected)}")
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 5:
                    raise ParseError(line_no, f"expected 5 fields, got {len(row)}")
                try:
                    rating = int(row[4])
                except ValueError:
                    raise ParseError(line_no, f"rating must be an integer, got {row[4]!r}") from None
                try:
                    samples.append(
                        RatingSample(
                            input_id=row[0],
                            method=row[1],
                            question=row[2],
                            rater_id=row[3],
                            rating=rating,
                        )
                    )
                except ValueError as exc:
                    raise ParseError(line_no, str(exc)) from None
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return samples


def bootstrap_report(
    samples: Iterable[RatingSample],
    R: int = 1000,
    level: float = 0.95,
    seed: Optional[int] = None,
    familiarity_threshold: int = DEFAULT_FAMILIARITY_THRESHOLD,
) -> dict:
    """Means and CIs per (method, question) over per-input mean ratings.

    Every cell uses the same bootstrap seed; cells resample independently
    of one another apart from that shared stream origin.
    """
    aggregated = aggregate_ratings(samples, familiarity_threshold)
    per_cell: dict[tuple[str, str], list[tuple[str, float]]] = defaultdict(list)
    for (input_id, method, question), mean in aggregated.means.items():
        per_cell[(method, question)].append((input_id, mean))

    methods: dict[str, dict[str, dict]] = {}
    for method, question in sorted(per_cell):
        values = [m for _, m in sorted(per_cell[(method, question)])]
        result = bootstrap_ci(values, R=R, level=level, seed=seed)
        methods.setdefault(method, {})[question] = {
            "mean": result.mean,
            "ci_low": result.ci_low,
            "ci_high": result.ci_high,
            "n_inputs": len(values),
        }
    return {
        "iterations": R,
        "level": level,
        "familiarity_threshold": familiarity_threshold,
        "dropped_fraction": aggregated.dropped_fraction,
        "methods": methods,
    }


def overlap_campaign(
    engine: SuggestionEngine,
    n_inputs: int,
    k: int,
    seed: Optional[int] = None,
    breadth_a: int = 1,
    breadth_b: int = 3,
) -> OverlapReport:
    """Deterministic top-k lists for two breadths over random single inputs;
    reports mean overlap and the fraction of inputs whose lists differ."""
    corpus = engine.corpus
    inputs = random_baseline(corpus, n_inputs, seed=seed)
    per_input: list[dict] = []
    overlaps: list[int] = []
    distinct_count = 0
    for input_id in inputs:
        lists = []
        for breadth in (breadth_a, breadth_b):
            if k < 1:
                lists.append([])
                continue
            query = SuggestionQuery(
                input_tropes=(input_id,), breadth=breadth, count=k, temperature=0.0
            )
            try:
                outcome = engine.suggest(query)
                lists.append([s.trope for s in outcome.suggestions])
            except (AllZeroScoresError, EmptyCandidateSetError):
                lists.append([])
        overlap = topk_overlap(lists[0], lists[1])
        distinct = set(lists[0]) != set(lists[1])
        overlaps.append(overlap)
        distinct_count += distinct
        per_input.append(
            {"input": input_id, "overlap": overlap, "distinct": distinct,
             "top_a": lists[0], "top_b": lists[1]}
        )
    mean_overlap = float(np.mean(overlaps)) if overlaps else 0.0
    distinct_fraction = distinct_count / len(inputs) if inputs else 0.0
    return OverlapReport(
        mean_overlap=mean_overlap, distinct_fraction=distinct_fraction, per_input=per_input
    )
