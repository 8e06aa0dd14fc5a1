"""Pydantic request/response models; field names are part of the HTTP contract."""

from __future__ import annotations

from datetime import datetime
from typing import Literal, Optional

from pydantic import BaseModel, Field


class SuggestRequest(BaseModel):
    input_tropes: list[str] = Field(default_factory=list)
    text: Optional[str] = None
    breadth: int = Field(default=2, ge=1, le=3)
    index_filters: list[str] = Field(default_factory=list)
    movie_filters: list[str] = Field(default_factory=list)
    count: int = Field(default=5, ge=1)
    temperature: float = Field(default=0.02, ge=0)
    seed: Optional[int] = None
    exclude: list[str] = Field(default_factory=list)


class EvidenceOut(BaseModel):
    movie: str
    title: str
    text: str


class SuggestionOut(BaseModel):
    trope: str
    name: str
    laconic: str
    raw_score: float
    final_score: float
    rank: int
    evidence: list[EvidenceOut]


class ResolvedQuery(BaseModel):
    input_tropes: list[str]
    text: Optional[str]
    breadth: int
    index_filters: list[str]
    movie_filters: list[str]
    count: int
    temperature: float
    seed: int
    candidate_count: int


class SuggestResponse(BaseModel):
    suggestions: list[SuggestionOut]
    query: ResolvedQuery
    corpus_fingerprint: str


class OccurrenceOut(BaseModel):
    movie: str
    title: str
    text: str


class TropeDetail(BaseModel):
    id: str
    name: str
    laconic: str
    description_tropes: list[str]
    indexes: list[str]
    sub_tropes: list[str]
    occurrences: list[OccurrenceOut]


class MovieTropeOut(BaseModel):
    trope: str
    name: str
    text: str


class MovieDetail(BaseModel):
    id: str
    title: str
    year: Optional[int]
    synopsis: Optional[str]
    genres: Optional[list[str]]
    tropes: list[MovieTropeOut]


class SearchHit(BaseModel):
    id: str
    name: str


class SearchResponse(BaseModel):
    query: str
    results: list[SearchHit]


class CardPosition(BaseModel):
    x: float
    y: float


class CanvasCard(BaseModel):
    card_id: str
    card_type: Literal["trope", "text", "movie", "title", "image"]
    position: CardPosition
    payload: str
    selected_for_input: bool = False


class CanvasDocument(BaseModel):
    id: str
    title: str = ""
    cards: list[CanvasCard] = Field(default_factory=list)
    updated_at: datetime
    writer: str = ""


class CanvasPutResponse(BaseModel):
    accepted: bool
    updated_at: datetime
    warnings: list[str] = Field(default_factory=list)


class StatsOut(BaseModel):
    n_tropes: int
    n_indexes: int
    n_movies: int
    mean_description_tropes: float
    mean_indexes: float
    mean_occurrences: float
    corpus_fingerprint: str
