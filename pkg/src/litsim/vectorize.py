"""Vocabulary construction and the L2-normalized TF-IDF matrix.

Term weights follow tf(t, d) * idf(t), with tf the within-document relative
frequency and idf(t) = ln((1 + n_docs) / (1 + df(t))).  Each document row is
then scaled to unit euclidean norm, which makes the dot product of two rows
their cosine similarity.  Rows are held in compressed-sparse-row form with
float64 values; construction is deterministic for a given corpus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from litsim.errors import (
    DimensionMismatchError,
    EmptyVocabularyError,
    InvariantViolationError,
)
from litsim.ingest import PaperMeta
from litsim.nlp import TokenBag

NORM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Vocabulary:
    """Bidirectional term <-> column-index map, lexicographically ordered."""

    terms: tuple[str, ...]
    index: dict[str, int]

    @classmethod
    def from_terms(cls, terms) -> "Vocabulary":
        ordered = tuple(sorted(set(terms)))
        return cls(terms=ordered, index={t: i for i, t in enumerate(ordered)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


@dataclass
class SparseVector:
    """Strictly increasing column ids paired with positive values."""

    indices: np.ndarray  # int64
    values: np.ndarray  # float64

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.indices.shape != self.values.shape:
            raise InvariantViolationError("indices and values must have equal length")
        if self.indices.size and np.any(np.diff(self.indices) <= 0):
            raise InvariantViolationError("indices must be strictly increasing")
        if np.any(self.values <= 0):
            raise InvariantViolationError("values must be positive")

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def normalized(self) -> "SparseVector":
        n = self.norm()
        if n == 0.0:
            return self
        return SparseVector(self.indices.copy(), self.values / n)

    def to_dense(self, size: int) -> np.ndarray:
        dense = np.zeros(size, dtype=np.float64)
        dense[self.indices] = self.values
        return dense


EMPTY_VECTOR = SparseVector(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))


def build_vocabulary(corpus: list[TokenBag]) -> Vocabulary:
    """Sorted union of all bag keys; deterministic across runs."""
    if not corpus:
        raise EmptyVocabularyError("corpus is empty")
    terms = set()
    for bag in corpus:
        terms.update(bag.counts)
    if not terms:
        raise EmptyVocabularyError("corpus contains no terms")
    return Vocabulary.from_terms(terms)


def vectorize_counts(bag: TokenBag, vocab: Vocabulary) -> SparseVector:
    """Raw term counts over the vocabulary; out-of-vocabulary terms ignored."""
    pairs = sorted(
        (vocab.index[t], float(c)) for t, c in bag.counts.items() if t in vocab.index
    )
    if not pairs:
        return EMPTY_VECTOR
    idx, val = zip(*pairs)
    return SparseVector(np.array(idx, dtype=np.int64), np.array(val, dtype=np.float64))


def vectorize_binary(bag: TokenBag, vocab: Vocabulary) -> SparseVector:
    """Presence indicator: 1.0 for every in-vocabulary term of the bag."""
    idx = sorted(vocab.index[t] for t in bag.counts if t in vocab.index)
    if not idx:
        return EMPTY_VECTOR
    return SparseVector(np.array(idx, dtype=np.int64), np.ones(len(idx), dtype=np.float64))


def compute_idf(df: np.ndarray, n_docs: int, plus_one: bool = False) -> np.ndarray:
    """idf(t) = ln((1 + n_docs) / (1 + df(t))), optionally shifted by +1.

    The +1 shift is the common library variant; the default follows the plain
    formula, under which a term present in every document scores exactly 0.
    """
    df = np.asarray(df, dtype=np.float64)
    if n_docs < 1:
        raise InvariantViolationError("n_docs must be at least 1")
    if np.any(df < 0) or np.any(df > n_docs):
        raise InvariantViolationError("document frequencies must lie in [0, n_docs]")
    idf = np.log((1.0 + n_docs) / (1.0 + df))
    if plus_one:
        idf = idf + 1.0
    return idf


def document_frequencies(corpus: list[TokenBag], vocab: Vocabulary) -> np.ndarray:
    df = np.zeros(len(vocab), dtype=np.int64)
    for bag in corpus:
        for term in bag.counts:
            col = vocab.index.get(term)
            if col is not None:
                df[col] += 1
    return df


class TfidfIndex:
    """Immutable CSR matrix of unit-norm TF-IDF rows plus the idf vector.

    Rows whose pre-normalization vector vanished (e.g. every term ubiquitous
    under the plain idf) are stored empty; `empty_rows` flags them.  Row
    order matches the document registry.
    """

    def __init__(
        self,
        indptr: np.ndarray,
        indices: np.ndarray,
        data: np.ndarray,
        idf: np.ndarray,
        vocab: Vocabulary,
        docs: list[PaperMeta],
        word_counts: np.ndarray,
    ):
        self.indptr = np.asarray(indptr, dtype=np.uint64)
        self.indices = np.asarray(indices, dtype=np.uint32)
        self.data = np.asarray(data, dtype=np.float64)
        self.idf = np.asarray(idf, dtype=np.float64)
        self.vocab = vocab
        self.docs = list(docs)
        self.word_counts = np.asarray(word_counts, dtype=np.int64)
        if len(self.indptr) != len(self.docs) + 1:
            raise ValueError("row pointer array length must be doc count + 1")
        if len(self.idf) != len(self.vocab):
            raise ValueError("idf length must match vocabulary size")
        if len(self.word_counts) != len(self.docs):
            raise ValueError("word_counts length must match doc count")
        self._row_of_entry: np.ndarray | None = None

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    @property
    def n_terms(self) -> int:
        return len(self.vocab)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    @property
    def empty_rows(self) -> frozenset[int]:
        lengths = np.diff(self.indptr.astype(np.int64))
        return frozenset(int(i) for i in np.flatnonzero(lengths == 0))

    def row(self, i: int) -> SparseVector:
        start, end = int(self.indptr[i]), int(self.indptr[i + 1])
        if start == end:
            return EMPTY_VECTOR
        return SparseVector(
            self.indices[start:end].astype(np.int64), self.data[start:end].copy()
        )

    def row_of_entry(self) -> np.ndarray:
        """Row id of every stored entry (cached, for fast mat-vec products)."""
        if self._row_of_entry is None:
            lengths = np.diff(self.indptr.astype(np.int64))
            self._row_of_entry = np.repeat(np.arange(self.n_docs, dtype=np.int64), lengths)
        return self._row_of_entry

    def __eq__(self, other) -> bool:
        if not isinstance(other, TfidfIndex):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.data, other.data)
            and self.data.dtype == other.data.dtype
            and np.array_equal(self.idf, other.idf)
            and self.vocab.terms == other.vocab.terms
            and self.docs == other.docs
            and np.array_equal(self.word_counts, other.word_counts)
        )


def _placeholder_metas(n: int) -> list[PaperMeta]:
    return [PaperMeta(id=f"doc-{i:04d}", title=f"document {i}") for i in range(n)]


def build_tfidf_index(
    corpus: list[TokenBag],
    vocab: Vocabulary,
    metas: list[PaperMeta] | None = None,
    word_counts: list[int] | None = None,
    idf_plus_one: bool = False,
) -> TfidfIndex:
    """Two-pass construction: document frequencies, then unit-norm rows."""
    metas = metas if metas is not None else _placeholder_metas(len(corpus))
    if len(metas) != len(corpus):
        raise ValueError("metas length must match corpus length")
    seen = set()
    for meta in metas:
        if not meta.id or meta.id in seen:
            raise ValueError(f"duplicate or empty document id {meta.id!r}")
        seen.add(meta.id)
    counts = word_counts if word_counts is not None else [bag.total for bag in corpus]

    df = document_frequencies(corpus, vocab)
    idf = compute_idf(df, len(corpus), plus_one=idf_plus_one)

    indptr = np.zeros(len(corpus) + 1, dtype=np.uint64)
    all_indices: list[np.ndarray] = []
    all_data: list[np.ndarray] = []
    nnz = 0
    for i, bag in enumerate(corpus):
        vec = vectorize_counts(bag, vocab)
        if vec.nnz:
            tf = vec.values / float(bag.total)
            weights = tf * idf[vec.indices]
            keep = weights > 0.0
            weights = weights[keep]
            cols = vec.indices[keep]
            norm = np.sqrt(np.dot(weights, weights))
            if norm > 0.0:
                all_indices.append(cols.astype(np.uint32))
                all_data.append(weights / norm)
                nnz += len(weights)
        indptr[i + 1] = nnz

    indices = np.concatenate(all_indices) if all_indices else np.empty(0, dtype=np.uint32)
    data = np.concatenate(all_data) if all_data else np.empty(0, dtype=np.float64)
    return TfidfIndex(
        indptr=indptr,
        indices=indices,
        data=data,
        idf=idf,
        vocab=vocab,
        docs=metas,
        word_counts=np.asarray(counts, dtype=np.int64),
    )


def vectorize_query(bag: TokenBag, vocab: Vocabulary, idf: np.ndarray) -> SparseVector:
    """Fold a new bag into an existing index's space (frozen idf, no df update).

    Returns the unit-norm TF-IDF vector; empty when no term of the bag maps
    to a positive weight.
    """
    if len(idf) != len(vocab):
        raise DimensionMismatchError("idf length does not match vocabulary")
    vec = vectorize_counts(bag, vocab)
    if not vec.nnz:
        return EMPTY_VECTOR
    tf = vec.values / float(bag.total)
    weights = tf * idf[vec.indices]
    keep = weights > 0.0
    if not np.any(keep):
        return EMPTY_VECTOR
    weights = weights[keep]
    cols = vec.indices[keep]
    norm = np.sqrt(np.dot(weights, weights))
    return SparseVector(cols, weights / norm)
