"""Command-line entry point; a thin shell over the library modules.

Exit codes: 0 success, 2 user error (bad flags, bad data, unknown ids),
3 internal error.
"""

from __future__ import annotations

import functools
import json
import sys

import click

from . import evalkit
from .corpus import corpus_stats
from .errors import TaleStreamError
from .ingest import dataset_fingerprint, generate_fixture, load_dataset, save_dataset
from .suggest import SuggestionEngine, SuggestionQuery


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except TaleStreamError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except Exception as exc:
            click.echo(f"internal error: {exc!r}", err=True)
            sys.exit(3)

    return wrapper


def _split_multi(values: tuple[str, ...]) -> tuple[str, ...]:
    out: list[str] = []
    for value in values:
        out.extend(v for v in value.split(",") if v)
    return tuple(out)


data_option = click.option(
    "--data",
    "data_path",
    envvar="TALESTREAM_DATA",
    required=True,
    help="Dataset file (JSON lines); defaults to $TALESTREAM_DATA.",
)


@click.group()
def cli():
    """Steerable trope suggestion engine."""


@cli.command()
@click.option("--in", "in_path", required=True, help="Dataset file to validate.")
@click.option("--strict/--lenient", default=True, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def ingest(in_path: str, strict: bool, as_json: bool):
    """Validate a dataset file and print its load report."""
    corpus = load_dataset(in_path, strict=strict)
    stats = corpus_stats(corpus)
    report = corpus.load_report
    payload = {
        "tropes": stats.n_tropes,
        "indexes": stats.n_indexes,
        "movies": stats.n_movies,
        "mean_description_tropes": stats.mean_description_tropes,
        "mean_indexes": stats.mean_indexes,
        "mean_occurrences": stats.mean_occurrences,
        "dropped_edges": report.dropped_edges if report else 0,
        "dropped_self_references": report.dropped_self_references if report else 0,
        "merged_duplicate_occurrences": report.merged_duplicate_occurrences if report else 0,
        "fingerprint": dataset_fingerprint(corpus),
    }
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(f"tropes   {stats.n_tropes}")
        click.echo(f"indexes  {stats.n_indexes}")
        click.echo(f"movies   {stats.n_movies}")
        click.echo(f"mean description tropes per trope  {stats.mean_description_tropes:.1f}")
        click.echo(f"mean indexes per trope             {stats.mean_indexes:.1f}")
        click.echo(f"mean occurrences per trope         {stats.mean_occurrences:.1f}")
        if report and report.dropped_edges:
            click.echo(f"dropped edges (lenient mode)       {report.dropped_edges}")
        click.echo(f"fingerprint {payload['fingerprint']}")


@cli.command()
@data_option
@click.option("--tropes", "tropes", default="", help="Comma-separated input trope ids.")
@click.option("--text", default=None, help="Free-text query component.")
@click.option("--breadth", type=click.IntRange(1, 3), default=2, show_default=True)
@click.option("--count", type=int, default=5, show_default=True)
@click.option("--temperature", type=float, default=0.02, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--index-filter", "index_filters", multiple=True)
@click.option("--movie-filter", "movie_filters", multiple=True)
@click.option("--exclude", "excludes", multiple=True)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def suggest(
    data_path, tropes, text, breadth, count, temperature, seed,
    index_filters, movie_filters, excludes, as_json,
):
    """Print ranked trope suggestions for a query."""
    corpus = load_dataset(data_path)
    engine = SuggestionEngine(corpus)
    query = SuggestionQuery(
        input_tropes=tuple(t for t in tropes.split(",") if t),
        text=text,
        breadth=breadth,
        count=count,
        temperature=temperature,
        seed=seed,
        index_filters=_split_multi(index_filters),
        movie_filters=_split_multi(movie_filters),
        exclude=_split_multi(excludes),
    )
    outcome = engine.suggest(query)
    if as_json:
        payload = {
            "seed": outcome.seed,
            "candidate_count": outcome.candidate_count,
            "suggestions": [
                {
                    "trope": s.trope,
                    "name": corpus.tropes[s.trope].name,
                    "raw_score": s.raw_score,
                    "final_score": s.final_score,
                    "rank": s.rank,
                    "evidence": [{"movie": e.movie, "text": e.text} for e in s.evidence],
                }
                for s in outcome.suggestions
            ],
        }
        click.echo(json.dumps(payload, indent=2))
        return
    click.echo(f"seed {outcome.seed}   candidates {outcome.candidate_count}")
    click.echo(f"{'rank':>5}  {'raw':>10}  {'final':>12}  {'trope':<24} name")
    for s in outcome.suggestions:
        name = corpus.tropes[s.trope].name
        click.echo(f"{s.rank:>5}  {s.raw_score:>10.6f}  {s.final_score:>12.6g}  {s.trope:<24} {name}")
        for e in s.evidence:
            title = corpus.movies[e.movie].title
            click.echo(f"{'':>33}  in {title} ({e.movie})")


@cli.command()
@click.option("--tropes", "n_tropes", type=int, required=True)
@click.option("--indexes", "n_indexes", type=int, required=True)
@click.option("--movies", "n_movies", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True)
@handle_errors
def fixture(n_tropes, n_indexes, n_movies, seed, out_path):
    """Generate a deterministic synthetic dataset file."""
    corpus = generate_fixture(n_tropes, n_indexes, n_movies, seed)
    save_dataset(corpus, out_path)
    stats = corpus_stats(corpus)
    click.echo(
        f"wrote {out_path}: {stats.n_tropes} tropes, {stats.n_indexes} indexes, "
        f"{stats.n_movies} movies"
    )


@cli.group()
def eval():
    """Evaluation campaigns."""


@eval.command()
@data_option
@click.option("--inputs", "n_inputs", type=int, default=36, show_default=True)
@click.option("--k", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--breadth-a", type=click.IntRange(1, 3), default=1, show_default=True)
@click.option("--breadth-b", type=click.IntRange(1, 3), default=3, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def overlap(data_path, n_inputs, k, seed, breadth_a, breadth_b, as_json):
    """Top-k overlap between two breadth settings over random inputs."""
    corpus = load_dataset(data_path)
    engine = SuggestionEngine(corpus)
    report = evalkit.overlap_campaign(
        engine, n_inputs, k, seed=seed, breadth_a=breadth_a, breadth_b=breadth_b
    )
    if as_json:
        payload = {
            "inputs": n_inputs,
            "k": k,
            "seed": seed,
            "breadth_a": breadth_a,
            "breadth_b": breadth_b,
            "mean_overlap": report.mean_overlap,
            "distinct_fraction": report.distinct_fraction,
            "per_input": report.per_input,
        }
        click.echo(json.dumps(payload, indent=2))
        return
    click.echo(f"inputs {n_inputs}  k {k}  breadths {breadth_a} vs {breadth_b}")
    click.echo(f"mean top-{k} overlap   {report.mean_overlap:.3f}")
    click.echo(f"distinct-list fraction {report.distinct_fraction:.3f}")


@eval.command()
@click.option("--ratings", "ratings_path", required=True, help="Ratings CSV.")
@click.option("--R", "iterations", type=int, default=1000, show_default=True)
@click.option("--level", type=float, default=0.95, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--threshold", type=int, default=5, show_default=True,
              help="Familiarity threshold on the 7-point scale.")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def bootstrap(ratings_path, iterations, level, seed, threshold, as_json):
    """Rating means with bootstrap confidence intervals per (method, question)."""
    samples = evalkit.load_ratings_csv(ratings_path)
    report = evalkit.bootstrap_report(
        samples, R=iterations, level=level, seed=seed, familiarity_threshold=threshold
    )
    if as_json:
        click.echo(json.dumps(report, indent=2))
        return
    click.echo(
        f"R {iterations}  level {level}  dropped_fraction {report['dropped_fraction']:.3f}"
    )
    for method in sorted(report["methods"]):
        for question, cell in sorted(report["methods"][method].items()):
            click.echo(
                f"{method:<14} {question:<6} mean {cell['mean']:.3f} "
                f"ci [{cell['ci_low']:.3f}, {cell['ci_high']:.3f}] n={cell['n_inputs']}"
            )


@cli.command()
@data_option
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--canvas-dir", default="canvases", show_default=True)
@click.option("--seed-default", type=int, default=None)
@click.option("--cors-origin", "cors_origins", multiple=True, default=("*",))
@click.option("--ui-dir", default=None, help="Static UI build to serve at /.")
@handle_errors
def serve(data_path, port, host, canvas_dir, seed_default, cors_origins, ui_dir):
    """Run the HTTP service."""
    import uvicorn

    from .server import create_app

    corpus = load_dataset(data_path)
    app = create_app(
        corpus,
        canvas_dir=canvas_dir,
        default_seed=seed_default,
        cors_origins=tuple(cors_origins),
        ui_dir=ui_dir,
    )
    uvicorn.run(app, host=host, port=port)


def main():
    cli()


if __name__ == "__main__":
    main()
