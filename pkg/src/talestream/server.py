"""HTTP service exposing suggestion, exploration, search, and canvas storage.

All endpoints are read-only over the shared immutable corpus except
canvas PUT, which persists one JSON document per canvas id under the
configured data directory. Every response carries an
``X-Corpus-Fingerprint`` header so clients can detect corpus swaps.
"""

from __future__ import annotations

import os
import re
import threading
from datetime import timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import schemas
from .corpus import Corpus, sub_tropes
from .errors import (
    AllZeroScoresError,
    EmptyCandidateSetError,
    InvalidQueryError,
    InvalidTemperatureError,
    NotFoundError,
)
from .ingest import dataset_fingerprint
from .suggest import SuggestionEngine, SuggestionQuery, name_search

CANVAS_ID_RE = re.compile(r"^[A-Za-z0-9_\-]+$")


def _write_key(document: "schemas.CanvasDocument"):
    """Ordering key for last-write-wins; tolerates mixed naive/aware stamps."""
    stamp = document.updated_at
    if stamp.tzinfo is not None:
        stamp = stamp.astimezone(timezone.utc).replace(tzinfo=None)
    return (stamp, document.writer)


class CanvasStore:
    """File-backed canvas persistence with last-write-wins conflict handling.

    Writes are serialized per canvas id; a PUT is accepted when its
    (updated_at, writer) pair is >= the stored one, ties going to the
    lexicographically larger writer token.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, canvas_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(canvas_id, threading.Lock())

    def _path(self, canvas_id: str) -> Path:
        return self.directory / f"{canvas_id}.json"

    def get(self, canvas_id: str) -> Optional[schemas.CanvasDocument]:
        path = self._path(canvas_id)
        if not path.exists():
            return None
        return schemas.CanvasDocument.model_validate_json(path.read_text(encoding="utf-8"))

    def put(self, document: schemas.CanvasDocument) -> tuple[bool, schemas.CanvasDocument]:
        """Returns (accepted, current document after the call)."""
        with self._lock_for(document.id):
            current = self.get(document.id)
            if current is not None and _write_key(document) < _write_key(current):
                return False, current
            path = self._path(document.id)
            tmp = path.with_suffix(".json.tmp")
            tmp.write_text(document.model_dump_json(), encoding="utf-8")
            os.replace(tmp, path)
            return True, document


def _payload_warnings(corpus: Corpus, document: schemas.CanvasDocument) -> list[str]:
    warnings = []
    for card in document.cards:
        if card.card_type == "trope" and card.payload not in corpus.tropes:
            warnings.append(f"card {card.card_id}: unknown trope {card.payload!r}")
        elif card.card_type == "movie" and card.payload not in corpus.movies:
            warnings.append(f"card {card.card_id}: unknown movie {card.payload!r}")
    return warnings


def create_app(
    corpus: Corpus,
    canvas_dir: str | Path = "canvases",
    default_seed: Optional[int] = None,
    cors_origins: tuple[str, ...] = ("*",),
    ui_dir: Optional[str | Path] = None,
    engine: Optional[SuggestionEngine] = None,
) -> FastAPI:
    app = FastAPI(title="talestream", version="0.1.0")
    engine = engine if engine is not None else SuggestionEngine(corpus)
    fingerprint = dataset_fingerprint(corpus)
    store = CanvasStore(canvas_dir)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def fingerprint_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Corpus-Fingerprint"] = fingerprint
        return response

    @app.exception_handler(RequestValidationError)
    async def invalid_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_body", "message": jsonable_encoder(exc.errors())},
        )

    @app.post("/api/suggest", response_model=schemas.SuggestResponse)
    def post_suggest(body: schemas.SuggestRequest) -> schemas.SuggestResponse:
        query = SuggestionQuery(
            input_tropes=tuple(body.input_tropes),
            text=body.text,
            breadth=body.breadth,
            index_filters=tuple(body.index_filters),
            movie_filters=tuple(body.movie_filters),
            count=body.count,
            temperature=body.temperature,
            seed=body.seed if body.seed is not None else default_seed,
            exclude=tuple(body.exclude),
        )
        try:
            outcome = engine.suggest(query)
        except (NotFoundError, InvalidQueryError, InvalidTemperatureError) as exc:
            raise HTTPException(status_code=400, detail={"code": "invalid_query", "message": str(exc)})
        except EmptyCandidateSetError as exc:
            raise HTTPException(status_code=422, detail={"code": "empty_candidate_set", "message": str(exc)})
        except AllZeroScoresError as exc:
            raise HTTPException(status_code=422, detail={"code": "all_zero_scores", "message": str(exc)})

        suggestions = []
        for scored in outcome.suggestions:
            trope = corpus.tropes[scored.trope]
            suggestions.append(
                schemas.SuggestionOut(
                    trope=scored.trope,
                    name=trope.name,
                    laconic=trope.laconic,
                    raw_score=scored.raw_score,
                    final_score=scored.final_score,
                    rank=scored.rank,
                    evidence=[
                        schemas.EvidenceOut(
                            movie=e.movie, title=corpus.movies[e.movie].title, text=e.text
                        )
                        for e in scored.evidence
                    ],
                )
            )
        resolved = schemas.ResolvedQuery(
            input_tropes=sorted(set(body.input_tropes)),
            text=query.text.strip() if query.text else None,
            breadth=body.breadth,
            index_filters=sorted(set(body.index_filters)),
            movie_filters=sorted(set(body.movie_filters)),
            count=body.count,
            temperature=body.temperature,
            seed=outcome.seed,
            candidate_count=outcome.candidate_count,
        )
        return schemas.SuggestResponse(
            suggestions=suggestions, query=resolved, corpus_fingerprint=fingerprint
        )

    @app.get("/api/tropes/{trope_id:path}", response_model=schemas.TropeDetail)
    def get_trope(trope_id: str, index_filter: Optional[str] = None) -> schemas.TropeDetail:
        if trope_id not in corpus.tropes:
            raise HTTPException(status_code=404, detail={"code": "not_found", "message": f"unknown trope {trope_id!r}"})
        trope = corpus.tropes[trope_id]
        occurrences = []
        filter_members = None
        if index_filter is not None:
            index = corpus.indexes.get(index_filter)
            filter_members = set(index.member_tropes) if index else set()
        for occ in trope.occurrences:
            movie = corpus.movies[occ.movie]
            if filter_members is not None and not filter_members.intersection(movie.tropes):
                continue
            occurrences.append(schemas.OccurrenceOut(movie=occ.movie, title=movie.title, text=occ.text))
        return schemas.TropeDetail(
            id=trope.id,
            name=trope.name,
            laconic=trope.laconic,
            description_tropes=list(trope.description_tropes),
            indexes=list(trope.indexes),
            sub_tropes=sorted(sub_tropes(corpus, trope_id)),
            occurrences=occurrences,
        )

    @app.get("/api/movies/{movie_id:path}", response_model=schemas.MovieDetail)
    def get_movie(movie_id: str, index_filter: Optional[str] = None) -> schemas.MovieDetail:
        if movie_id not in corpus.movies:
            raise HTTPException(status_code=404, detail={"code": "not_found", "message": f"unknown movie {movie_id!r}"})
        movie = corpus.movies[movie_id]
        members = None
        if index_filter is not None:
            index = corpus.indexes.get(index_filter)
            members = set(index.member_tropes) if index else set()
        tropes = []
        for trope_id in movie.tropes:
            if members is not None and trope_id not in members:
                continue
            trope = corpus.tropes[trope_id]
            text = next((o.text for o in trope.occurrences if o.movie == movie_id), "")
            tropes.append(schemas.MovieTropeOut(trope=trope_id, name=trope.name, text=text))
        return schemas.MovieDetail(
            id=movie.id,
            title=movie.title,
            year=movie.year,
            synopsis=movie.synopsis,
            genres=list(movie.genres) if movie.genres is not None else None,
            tropes=tropes,
        )

    @app.get("/api/search", response_model=schemas.SearchResponse)
    def get_search(q: str = "", limit: int = 10) -> schemas.SearchResponse:
        hits = name_search(corpus, q, limit=limit)
        return schemas.SearchResponse(
            query=q,
            results=[schemas.SearchHit(id=t, name=corpus.tropes[t].name) for t in hits],
        )

    @app.get("/api/stats", response_model=schemas.StatsOut)
    def get_stats() -> schemas.StatsOut:
        from .corpus import corpus_stats

        stats = corpus_stats(corpus)
        return schemas.StatsOut(
            n_tropes=stats.n_tropes,
            n_indexes=stats.n_indexes,
            n_movies=stats.n_movies,
            mean_description_tropes=stats.mean_description_tropes,
            mean_indexes=stats.mean_indexes,
            mean_occurrences=stats.mean_occurrences,
            corpus_fingerprint=fingerprint,
        )

    @app.put("/api/canvases/{canvas_id}", response_model=schemas.CanvasPutResponse)
    def put_canvas(canvas_id: str, document: schemas.CanvasDocument) -> schemas.CanvasPutResponse:
        if not CANVAS_ID_RE.match(canvas_id):
            raise HTTPException(status_code=400, detail={"code": "invalid_canvas_id", "message": canvas_id})
        if document.id != canvas_id:
            raise HTTPException(
                status_code=400,
                detail={"code": "id_mismatch", "message": f"body id {document.id!r} != path id {canvas_id!r}"},
            )
        card_ids = [c.card_id for c in document.cards]
        if len(card_ids) != len(set(card_ids)):
            raise HTTPException(status_code=400, detail={"code": "duplicate_card_ids", "message": canvas_id})
        accepted, current = store.put(document)
        if not accepted:
            raise HTTPException(
                status_code=409,
                detail={
                    "code": "stale_write",
                    "message": f"stored document is newer ({current.updated_at.isoformat()})",
                },
            )
        return schemas.CanvasPutResponse(
            accepted=True,
            updated_at=document.updated_at,
            warnings=_payload_warnings(corpus, document),
        )

    @app.get("/api/canvases/{canvas_id}", response_model=schemas.CanvasDocument)
    def get_canvas(canvas_id: str) -> schemas.CanvasDocument:
        if not CANVAS_ID_RE.match(canvas_id):
            raise HTTPException(status_code=400, detail={"code": "invalid_canvas_id", "message": canvas_id})
        document = store.get(canvas_id)
        if document is None:
            raise HTTPException(status_code=404, detail={"code": "not_found", "message": f"unknown canvas {canvas_id!r}"})
        return document

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
