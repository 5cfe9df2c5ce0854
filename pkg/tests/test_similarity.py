"""Cosine scoring, ranking, word importance, and group comparisons."""

import random
import statistics

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from litsim.errors import DimensionMismatchError, InvariantViolationError
from litsim.nlp import TokenBag
from litsim.similarity import (
    cumulative_similarity_curve,
    group_median_similarity,
    important_words,
    more_similar_fraction,
    similarity_vector,
    top_k,
)
from litsim.vectorize import (
    EMPTY_VECTOR,
    SparseVector,
    build_tfidf_index,
    build_vocabulary,
    vectorize_query,
)

# ---------------------------------------------------------------------------
# Oracles: dense dot products and a sort-based ranker
# ---------------------------------------------------------------------------


def scores_oracle(index, query) -> np.ndarray:
    """Row-by-row dense dot product."""
    dense_q = query.to_dense(index.n_terms)
    out = np.zeros(index.n_docs)
    for i in range(index.n_docs):
        out[i] = float(np.dot(index.row(i).to_dense(index.n_terms), dense_q))
    return out


def topk_oracle(scores, k, exclude=()):
    """Sort by (-score, ordinal), drop exclusions, take k."""
    excluded = set(exclude)
    ranked = sorted(
        ((-s, i) for i, s in enumerate(scores) if i not in excluded)
    )
    return [(i, -neg) for neg, i in ranked[:k]]


def build_from_dicts(bags):
    token_bags = [TokenBag(dict(b)) for b in bags]
    return build_tfidf_index(token_bags, build_vocabulary(token_bags))


def random_index(rng: random.Random):
    terms = [f"t{j}" for j in range(rng.randint(2, 12))]
    bags = []
    for _ in range(rng.randint(2, 10)):
        chosen = rng.sample(terms, k=rng.randint(1, len(terms)))
        bags.append({t: rng.randint(1, 9) for t in chosen})
    return build_from_dicts(bags), bags


# ---------------------------------------------------------------------------
# similarity_vector
# ---------------------------------------------------------------------------


class TestSimilarityVector:
    def test_matches_dense_oracle_on_random_corpora(self):
        rng = random.Random(314159)
        for _ in range(25):
            index, bags = random_index(rng)
            i = rng.randrange(len(bags))
            query = vectorize_query(TokenBag(dict(bags[i])), index.vocab, index.idf)
            if query.nnz == 0:
                continue
            got = similarity_vector(index, query)
            np.testing.assert_allclose(got, scores_oracle(index, query), atol=1e-12)

    def test_self_similarity_is_one(self):
        rng = random.Random(2718)
        index, bags = random_index(rng)
        for i, bag in enumerate(bags):
            query = vectorize_query(TokenBag(dict(bag)), index.vocab, index.idf)
            if query.nnz == 0:
                continue
            scores = similarity_vector(index, query)
            assert scores[i] == pytest.approx(1.0, abs=1e-9)
            assert scores[i] >= scores.max() - 1e-12

    def test_empty_query_gives_all_zeros(self):
        index = build_from_dicts([{"a": 1, "b": 1}, {"b": 2}])
        np.testing.assert_array_equal(
            similarity_vector(index, EMPTY_VECTOR), np.zeros(2)
        )

    def test_scores_live_in_unit_interval(self):
        rng = random.Random(55)
        for _ in range(10):
            index, bags = random_index(rng)
            query = vectorize_query(
                TokenBag(dict(bags[0])), index.vocab, index.idf
            )
            if query.nnz == 0:
                continue
            scores = similarity_vector(index, query)
            assert np.all(scores >= -1e-12)
            assert np.all(scores <= 1.0 + 1e-9)

    def test_unnormalized_query_rejected(self):
        index = build_from_dicts([{"a": 1, "b": 1}, {"b": 2}])
        lopsided = SparseVector(np.array([0]), np.array([2.0]))
        with pytest.raises(ValueError):
            similarity_vector(index, lopsided)

    def test_out_of_range_indices_rejected(self):
        index = build_from_dicts([{"a": 1, "b": 1}, {"b": 2}])
        stray = SparseVector(np.array([99]), np.array([1.0]))
        with pytest.raises(DimensionMismatchError):
            similarity_vector(index, stray)


# ---------------------------------------------------------------------------
# top_k
# ---------------------------------------------------------------------------


class TestTopK:
    def test_matches_sort_oracle_on_random_scores(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            scores = rng.random(rng.integers(1, 40))
            k = int(rng.integers(1, len(scores) + 3))
            got = top_k(scores, k).entries
            assert got == topk_oracle(scores, k)

    def test_ties_break_toward_lower_ordinal(self):
        result = top_k(np.array([0.5, 0.9, 0.9, 0.1]), 3)
        assert result.ordinals() == [1, 2, 0]

    def test_exclusions_are_skipped_not_blanked(self):
        scores = np.array([0.9, 0.8, 0.7, 0.6])
        result = top_k(scores, 2, exclude=[0, 2])
        assert result.entries == [(1, 0.8), (3, 0.6)]

    def test_k_larger_than_corpus(self):
        result = top_k(np.array([0.2, 0.1]), 10)
        assert len(result.entries) == 2

    def test_k_below_one_rejected(self):
        with pytest.raises(ValueError):
            top_k(np.array([0.5]), 0)

    @given(
        st.lists(st.floats(min_value=0, max_value=1, width=32), min_size=1, max_size=30),
        st.integers(min_value=1, max_value=35),
    )
    @settings(max_examples=60)
    def test_property_matches_oracle(self, values, k):
        scores = np.array(values)
        assert top_k(scores, k).entries == topk_oracle(scores, k)

    def test_scores_are_non_increasing(self):
        rng = np.random.default_rng(7)
        scores = rng.random(30)
        ranked = top_k(scores, 30).scores()
        assert all(a >= b for a, b in zip(ranked, ranked[1:]))


# ---------------------------------------------------------------------------
# important_words
# ---------------------------------------------------------------------------


def important_words_oracle(index, query, n_matches, n_words, exclude=()):
    scores = scores_oracle(index, query)
    matches = topk_oracle(scores, n_matches, exclude)
    dense_q = query.to_dense(index.n_terms)
    support = np.zeros(index.n_terms)
    for ordinal, _ in matches:
        support += index.row(ordinal).to_dense(index.n_terms)
    weights = dense_q * support
    pairs = [
        (index.vocab.terms[i], float(w))
        for i, w in enumerate(weights)
        if w > 0.0
    ]
    pairs.sort(key=lambda p: (-p[1], p[0]))
    return pairs[:n_words]


class TestImportantWords:
    def test_matches_dense_oracle(self):
        rng = random.Random(13)
        for _ in range(20):
            index, bags = random_index(rng)
            i = rng.randrange(len(bags))
            query = vectorize_query(TokenBag(dict(bags[i])), index.vocab, index.idf)
            if query.nnz == 0:
                continue
            n_matches = rng.randint(1, len(bags) + 2)
            n_words = rng.randint(1, 10)
            got = important_words(index, query, n_matches, n_words).entries
            want = important_words_oracle(index, query, n_matches, n_words)
            assert [t for t, _ in got] == [t for t, _ in want]
            np.testing.assert_allclose(
                [w for _, w in got], [w for _, w in want], atol=1e-12
            )

    def test_terms_absent_from_query_never_appear(self):
        index = build_from_dicts([{"a": 1, "b": 1}, {"b": 1, "c": 2}, {"c": 1}])
        query = vectorize_query(TokenBag({"a": 2}), index.vocab, index.idf)
        result = important_words(index, query, n_matches=3, n_words=10)
        assert all(term == "a" for term, _ in result.entries)

    def test_zero_weight_terms_omitted(self):
        # 'b' is everywhere -> idf 0 -> its weight is exactly zero.
        index = build_from_dicts([{"a": 1, "b": 1}, {"b": 1}])
        query = vectorize_query(TokenBag({"a": 1, "b": 1}), index.vocab, index.idf)
        terms = [t for t, _ in important_words(index, query).entries]
        assert "b" not in terms

    def test_ordering_by_weight_then_term(self):
        index = build_from_dicts([{"aa": 1, "ab": 1}, {"zz": 1}])
        query = vectorize_query(
            TokenBag({"aa": 1, "ab": 1}), index.vocab, index.idf
        )
        entries = important_words(index, query).entries
        # Equal idf and equal query weight -> tie broken alphabetically.
        assert entries == sorted(entries, key=lambda p: (-p[1], p[0]))
        assert [t for t, _ in entries] == ["aa", "ab"]

    def test_exclusions_remove_support(self):
        index = build_from_dicts([{"a": 2}, {"a": 1, "b": 1}, {"b": 2}])
        query = vectorize_query(TokenBag({"a": 1}), index.vocab, index.idf)
        with_all = important_words(index, query, n_matches=3)
        without_first = important_words(index, query, n_matches=3, exclude=[0])
        weight = dict(with_all.entries)["a"]
        weight_excluded = dict(without_first.entries)["a"]
        assert weight_excluded < weight


# ---------------------------------------------------------------------------
# Group statistics
# ---------------------------------------------------------------------------


class TestGroupMedian:
    def test_odd_group(self):
        scores = np.array([0.1, 0.5, 0.9, 0.3])
        assert group_median_similarity(scores, [0, 1, 2]) == pytest.approx(0.5)

    def test_even_group_averages_center(self):
        scores = np.array([0.1, 0.5, 0.9, 0.3])
        got = group_median_similarity(scores, [0, 1, 2, 3])
        assert got == pytest.approx(statistics.median([0.1, 0.5, 0.9, 0.3]))
        assert got == pytest.approx(0.4)

    def test_duplicate_ordinals_collapse(self):
        scores = np.array([0.2, 0.8])
        assert group_median_similarity(scores, [1, 1, 0]) == pytest.approx(0.5)

    def test_empty_group_rejected(self):
        with pytest.raises(ValueError):
            group_median_similarity(np.array([0.1]), [])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            group_median_similarity(np.array([0.1]), [5])

    @given(st.lists(st.integers(min_value=0, max_value=19), min_size=1, max_size=19),
           st.randoms(use_true_random=False))
    @settings(max_examples=40)
    def test_permutation_invariant_and_matches_statistics_median(self, group, rnd):
        scores = np.linspace(0.0, 1.0, 20)
        value = group_median_similarity(scores, group)
        shuffled = list(group)
        rnd.shuffle(shuffled)
        assert group_median_similarity(scores, shuffled) == value
        unique = sorted(set(group))
        assert value == pytest.approx(statistics.median(scores[unique]))


class TestMoreSimilarFraction:
    def test_strictly_above_only(self):
        scores = np.array([0.2, 0.5, 0.5, 0.8])
        assert more_similar_fraction(scores, 0.5) == pytest.approx(0.25)

    def test_one_in_two_hundred(self):
        scores = np.array([0.1] * 199 + [0.9])
        assert more_similar_fraction(scores, 0.5) == 0.005

    def test_empty_scores_rejected(self):
        with pytest.raises(ValueError):
            more_similar_fraction(np.array([]), 0.5)

    def test_matches_linear_scan(self):
        rng = np.random.default_rng(5)
        scores = rng.random(257)
        for threshold in (0.0, 0.25, 0.5, 0.99, 1.0):
            expected = sum(1 for s in scores if s > threshold) / len(scores)
            assert more_similar_fraction(scores, threshold) == pytest.approx(expected)


class TestCumulativeCurve:
    def test_matches_pointwise_fraction(self):
        rng = np.random.default_rng(6)
        scores = rng.random(100)
        grid = np.linspace(0, 1, 21)
        curve = cumulative_similarity_curve(scores, grid)
        for threshold, fraction in curve:
            assert fraction == more_similar_fraction(scores, threshold)

    def test_monotone_non_increasing(self):
        rng = np.random.default_rng(8)
        scores = rng.random(64)
        curve = cumulative_similarity_curve(scores, np.linspace(0, 1, 50))
        fractions = [f for _, f in curve]
        assert all(a >= b for a, b in zip(fractions, fractions[1:]))

    def test_unsorted_grid_rejected(self):
        with pytest.raises(ValueError):
            cumulative_similarity_curve(np.array([0.5]), [0.3, 0.1])

    @given(st.lists(st.floats(min_value=0, max_value=1, width=32), min_size=1, max_size=50))
    @settings(max_examples=40)
    def test_property_monotone_for_any_scores(self, values):
        curve = cumulative_similarity_curve(np.array(values), np.linspace(0, 1, 11))
        fractions = [f for _, f in curve]
        assert all(a >= b for a, b in zip(fractions, fractions[1:]))
        assert fractions[-1] == 0.0  # nothing exceeds 1.0
