"""Cosine-similarity queries, important-word attribution, group statistics.

All operations are read-only over an immutable index.  Scores are plain dot
products of unit-norm vectors, so they live in [0, 1] for the non-negative
TF-IDF rows produced by the vectorizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from litsim.errors import DimensionMismatchError
from litsim.vectorize import SparseVector, TfidfIndex

QUERY_NORM_TOLERANCE = 1e-6


@dataclass
class SimilarityResult:
    """Ranked (document ordinal, cosine score) pairs for one query."""

    entries: list[tuple[int, float]]
    query_provenance: str = ""

    def ordinals(self) -> list[int]:
        return [o for o, _ in self.entries]

    def scores(self) -> list[float]:
        return [s for _, s in self.entries]


@dataclass
class WordImportance:
    """Ranked (term, weight) pairs explaining a match set."""

    entries: list[tuple[str, float]]


@dataclass
class GroupComparison:
    """Similarity summary of a named document group against the corpus."""

    group_label: str
    median_similarity: float
    more_similar_fraction: float
    unknown_ids: list[str] = field(default_factory=list)


def similarity_vector(index: TfidfIndex, query: SparseVector) -> np.ndarray:
    """Cosine score of every indexed document against a unit-norm query.

    Empty rows (and an empty query) score 0 everywhere.
    """
    if query.nnz:
        if int(query.indices.max()) >= index.n_terms:
            raise DimensionMismatchError(
                f"query index {int(query.indices.max())} outside vocabulary of "
                f"{index.n_terms} terms"
            )
        if abs(query.norm() - 1.0) > QUERY_NORM_TOLERANCE:
            raise ValueError(f"query is not L2-normalized (norm={query.norm():.6g})")
    if not query.nnz or not index.nnz:
        return np.zeros(index.n_docs, dtype=np.float64)
    dense_query = query.to_dense(index.n_terms)
    contributions = index.data * dense_query[index.indices]
    return np.bincount(
        index.row_of_entry(), weights=contributions, minlength=index.n_docs
    )


def top_k(
    scores: np.ndarray,
    k: int,
    exclude: Iterable[int] = (),
    query_provenance: str = "",
) -> SimilarityResult:
    """The k best ordinals not excluded, ties broken toward lower ordinal."""
    if k < 1:
        raise ValueError("k must be at least 1")
    scores = np.asarray(scores, dtype=np.float64)
    order = np.argsort(-scores, kind="stable")
    excluded = set(int(e) for e in exclude)
    entries = []
    for ordinal in order:
        o = int(ordinal)
        if o in excluded:
            continue
        entries.append((o, float(scores[o])))
        if len(entries) == k:
            break
    return SimilarityResult(entries=entries, query_provenance=query_provenance)


def important_words(
    index: TfidfIndex,
    query: SparseVector,
    n_matches: int = 100,
    n_words: int = 20,
    exclude: Iterable[int] = (),
) -> WordImportance:
    """Terms that drive a query's best matches.

    The weight of term t is query_t times the summed row weight of t over
    the n_matches most similar documents, so only terms present in the query
    can score above zero.  The n_words highest-weight terms are returned
    (zero-weight terms omitted), ordered by weight then term.
    """
    scores = similarity_vector(index, query)
    matches = top_k(scores, n_matches, exclude=exclude) if index.n_docs else None
    support = np.zeros(index.n_terms, dtype=np.float64)
    if matches is not None:
        for ordinal, _ in matches.entries:
            row = index.row(ordinal)
            if row.nnz:
                support[row.indices] += row.values
    weights = query.to_dense(index.n_terms) * support
    positive = np.flatnonzero(weights > 0.0)
    ranked = sorted(
        ((index.vocab.terms[i], float(weights[i])) for i in positive),
        key=lambda pair: (-pair[1], pair[0]),
    )
    return WordImportance(entries=ranked[:n_words])


def group_median_similarity(scores: np.ndarray, group: Iterable[int]) -> float:
    """Median score over a document group (even counts average the center)."""
    ordinals = sorted(set(int(g) for g in group))
    if not ordinals:
        raise ValueError("group is empty")
    scores = np.asarray(scores, dtype=np.float64)
    if ordinals[0] < 0 or ordinals[-1] >= len(scores):
        raise ValueError(f"group ordinal out of range: {ordinals}")
    return float(np.median(scores[ordinals]))


def more_similar_fraction(scores: np.ndarray, threshold: float) -> float:
    """Fraction of documents scoring strictly above the threshold."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        raise ValueError("no scores to compare against")
    return float(np.count_nonzero(scores > threshold)) / float(scores.size)


def cumulative_similarity_curve(
    scores: np.ndarray, grid: Sequence[float]
) -> list[tuple[float, float]]:
    """more_similar_fraction evaluated along an ascending threshold grid."""
    grid = list(grid)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted ascending")
    return [(float(t), more_similar_fraction(scores, t)) for t in grid]
