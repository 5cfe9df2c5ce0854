"""Query orchestration over a loaded index.

The engine binds an immutable TfidfIndex to the text-processing assets so
callers can query by document id (stored row) or by free text (folded in
through the same tokenize/stop/lemmatize pipeline with the frozen idf).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from litsim.errors import EmptyQueryError, UnknownDocumentError
from litsim.nlp import Lexicon, StopList, default_lexicon, default_stoplist, process_text
from litsim.similarity import (
    GroupComparison,
    SimilarityResult,
    WordImportance,
    group_median_similarity,
    important_words,
    more_similar_fraction,
    similarity_vector,
    top_k,
)
from litsim.vectorize import SparseVector, TfidfIndex, vectorize_query

NO_TERMS_MESSAGE = "no dictionary terms survived"
DEFAULT_K = 30
DEFAULT_MATCHES = 100
DEFAULT_WORDS = 20


class QueryEngine:
    def __init__(
        self,
        index: TfidfIndex,
        lexicon: Lexicon | None = None,
        stoplist: StopList | None = None,
    ):
        self.index = index
        self.lexicon = lexicon if lexicon is not None else default_lexicon()
        self.stoplist = stoplist if stoplist is not None else default_stoplist()
        self.ordinal_of = {meta.id: i for i, meta in enumerate(index.docs)}

    def resolve(self, doc_id: str) -> int:
        try:
            return self.ordinal_of[doc_id]
        except KeyError:
            raise UnknownDocumentError(f"unknown document id: {doc_id}") from None

    def resolve_many(self, doc_ids: Iterable[str]) -> tuple[list[int], list[str]]:
        """Ordinals for the known ids plus the ids that did not resolve."""
        ordinals: list[int] = []
        unknown: list[str] = []
        for doc_id in doc_ids:
            ordinal = self.ordinal_of.get(doc_id)
            if ordinal is None:
                unknown.append(doc_id)
            else:
                ordinals.append(ordinal)
        return ordinals, unknown

    def vector_for_id(self, doc_id: str) -> SparseVector:
        return self.index.row(self.resolve(doc_id))

    def vector_for_text(self, text: str) -> SparseVector:
        bag = process_text(text, self.lexicon, self.stoplist)
        query = vectorize_query(bag, self.index.vocab, self.index.idf)
        if not query.nnz:
            raise EmptyQueryError(NO_TERMS_MESSAGE)
        return query

    def scores(self, query: SparseVector) -> np.ndarray:
        return similarity_vector(self.index, query)

    def query_by_id(
        self,
        doc_id: str,
        k: int = DEFAULT_K,
        exclude: Iterable[str] = (),
        include_self: bool = False,
    ) -> tuple[SimilarityResult, list[str]]:
        """Ranked matches for a stored document (itself excluded by default).

        Returns the result plus any exclusion ids that were not in the index.
        """
        ordinal = self.resolve(doc_id)
        excluded, unknown = self.resolve_many(exclude)
        if not include_self:
            excluded.append(ordinal)
        scores = self.scores(self.index.row(ordinal))
        result = top_k(scores, k, exclude=excluded, query_provenance=doc_id)
        return result, unknown

    def query_by_text(
        self, text: str, k: int = DEFAULT_K, exclude: Iterable[str] = ()
    ) -> tuple[SimilarityResult, list[str]]:
        excluded, unknown = self.resolve_many(exclude)
        scores = self.scores(self.vector_for_text(text))
        result = top_k(scores, k, exclude=excluded, query_provenance="free-text")
        return result, unknown

    def important_words_for(
        self,
        query: SparseVector,
        n_matches: int = DEFAULT_MATCHES,
        n_words: int = DEFAULT_WORDS,
        exclude_ordinals: Iterable[int] = (),
    ) -> WordImportance:
        return important_words(
            self.index, query, n_matches=n_matches, n_words=n_words,
            exclude=exclude_ordinals,
        )

    def important_words_by_id(
        self, doc_id: str, n_matches: int = DEFAULT_MATCHES, n_words: int = DEFAULT_WORDS
    ) -> WordImportance:
        """Important words of a stored document's own match list (self left out)."""
        ordinal = self.resolve(doc_id)
        return self.important_words_for(
            self.index.row(ordinal), n_matches, n_words, exclude_ordinals=(ordinal,)
        )

    def group_comparison(
        self, doc_id: str, groups: Mapping[str, Sequence[str]]
    ) -> list[GroupComparison]:
        """Median similarity and corpus more-similar fraction per named group.

        The fraction counts corpus documents scoring strictly above the
        group's median.  A group where no id resolves is an error.
        """
        scores = self.scores(self.vector_for_id(doc_id))
        comparisons = []
        for label, ids in groups.items():
            ordinals, unknown = self.resolve_many(ids)
            if not ordinals:
                raise UnknownDocumentError(
                    f"group {label!r} has no resolvable members; "
                    f"unknown ids: {', '.join(unknown) if unknown else '(none given)'}"
                )
            median = group_median_similarity(scores, ordinals)
            comparisons.append(
                GroupComparison(
                    group_label=label,
                    median_similarity=median,
                    more_similar_fraction=more_similar_fraction(scores, median),
                    unknown_ids=unknown,
                )
            )
        return comparisons
