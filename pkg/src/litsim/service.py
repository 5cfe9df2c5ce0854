"""HTTP query service over a loaded index.

JSON API consumed by the web frontend and by scripts:

    POST /api/similar                         ranked matches for an id or free text
    POST /api/group-similarity                per-group median + corpus fraction
    GET  /api/docs/{id}/important-words       explanation terms for a stored doc
    GET  /api/docs/{id}                       document card
    GET  /api/stats/authors  /api/stats/words yearly corpus statistics
    GET  /api/health                          liveness + corpus dimensions

The app is a pure function of an immutable QueryEngine: no request mutates
state, so identical requests give identical responses (timing field aside).
"""

from __future__ import annotations

import functools
import time

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, model_validator

from litsim.engine import DEFAULT_K, DEFAULT_MATCHES, DEFAULT_WORDS, QueryEngine
from litsim.errors import EmptyQueryError, UnknownDocumentError
from litsim.ingest import Document
from litsim.nlp import TokenBag
from litsim.similarity import important_words, top_k
from litsim.stats import author_stats_by_year, word_stats_by_year


class SimilarRequest(BaseModel):
    doc_id: str | None = None
    text: str | None = None
    k: int = Field(default=DEFAULT_K, ge=1)
    exclude: list[str] = Field(default_factory=list)
    important_words: bool = False

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.doc_id is None) == (self.text is None):
            raise ValueError("exactly one of doc_id and text must be given")
        return self


class GroupRequest(BaseModel):
    doc_id: str
    groups: dict[str, list[str]]

    @model_validator(mode="after")
    def _at_least_one_group(self):
        if not self.groups:
            raise ValueError("at least one group is required")
        return self


def _ms_since(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def create_app(engine: QueryEngine) -> FastAPI:
    app = FastAPI(title="literature similarity service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    index = engine.index

    def result_rows(result):
        rows = []
        for ordinal, score in result.entries:
            meta = index.docs[ordinal]
            rows.append(
                {"doc_id": meta.id, "title": meta.title, "year": meta.year,
                 "score": score}
            )
        return rows

    @app.post("/api/similar")
    def similar(req: SimilarRequest):
        t0 = time.perf_counter()
        try:
            if req.doc_id is not None:
                seed = engine.resolve(req.doc_id)
                query = index.row(seed)
                self_exclude = [seed]
            else:
                query = engine.vector_for_text(req.text)
                self_exclude = []
        except UnknownDocumentError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except EmptyQueryError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        excluded, unknown = engine.resolve_many(req.exclude)
        scores = engine.scores(query)
        result = top_k(scores, req.k, exclude=excluded + self_exclude)
        payload = {
            "results": result_rows(result),
            "unknown_excludes": unknown,
            "timing_ms": _ms_since(t0),
        }
        if req.important_words:
            ranked = important_words(
                index, query, exclude=excluded + self_exclude
            )
            payload["important_words"] = [
                {"term": t, "weight": w} for t, w in ranked.entries
            ]
        return payload

    @app.post("/api/group-similarity")
    def group_similarity(req: GroupRequest):
        t0 = time.perf_counter()
        try:
            engine.resolve(req.doc_id)
        except UnknownDocumentError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        try:
            comparisons = engine.group_comparison(req.doc_id, req.groups)
        except UnknownDocumentError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "doc_id": req.doc_id,
            "groups": [
                {
                    "label": c.group_label,
                    "median_similarity": c.median_similarity,
                    "more_similar_fraction": c.more_similar_fraction,
                    "unknown_ids": c.unknown_ids,
                }
                for c in comparisons
            ],
            "timing_ms": _ms_since(t0),
        }

    # Registered before the bare /api/docs/{doc_id} route so ids containing
    # slashes (astro-ph/0601001) still leave the trailing segment to us.
    @app.get("/api/docs/{doc_id:path}/important-words")
    def doc_important_words(
        doc_id: str,
        matches: int = Query(default=DEFAULT_MATCHES, ge=1),
        words: int = Query(default=DEFAULT_WORDS, ge=1),
    ):
        t0 = time.perf_counter()
        try:
            ranked = engine.important_words_by_id(doc_id, matches, words)
        except UnknownDocumentError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "doc_id": doc_id,
            "matches": matches,
            "words": words,
            "important_words": [{"term": t, "weight": w} for t, w in ranked.entries],
            "timing_ms": _ms_since(t0),
        }

    @app.get("/api/docs/{doc_id:path}")
    def doc_card(doc_id: str):
        try:
            ordinal = engine.resolve(doc_id)
        except UnknownDocumentError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        meta = index.docs[ordinal]
        return {
            "doc_id": meta.id,
            "title": meta.title,
            "authors": list(meta.authors),
            "year": meta.year,
            "subjects": list(meta.subjects),
            "word_count": int(index.word_counts[ordinal]),
        }

    @functools.lru_cache(maxsize=1)
    def author_payload():
        return {
            "years": [
                {
                    "year": s.year,
                    "n_papers": s.n_papers,
                    "median": s.median,
                    "extreme_fraction": s.extreme_fraction,
                    "kde": [[x, y] for x, y in s.kde],
                }
                for s in author_stats_by_year(index.docs)
            ]
        }

    @functools.lru_cache(maxsize=1)
    def word_payload():
        docs = [
            Document(meta=m, bag=TokenBag({}), raw_word_count=int(c))
            for m, c in zip(index.docs, index.word_counts)
        ]
        return {
            "years": [
                {"year": s.year, "median_words": s.median_words,
                 "total_words": s.total_words}
                for s in word_stats_by_year(docs)
            ]
        }

    @app.get("/api/stats/authors")
    def stats_authors():
        return author_payload()

    @app.get("/api/stats/words")
    def stats_words():
        return word_payload()

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "corpus_size": index.n_docs,
            "vocab_size": index.n_terms,
        }

    return app
