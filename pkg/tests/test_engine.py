import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_instance
from oracle import reference_stfidf
from stfidf import DegenerateInputError
from stfidf.embeddings import EmbeddingStore
from stfidf.engine import (
    RefinementConfig,
    StopReason,
    multiplier,
    refine,
    score_weight,
    stfidf_score,
    top_set,
    top_set_size,
)
from stfidf.synthetic import planted_fixture
from stfidf.text import TokenizedDocument
from stfidf.tfidf import DocumentFrequencyIndex, ScoreTable

DIST = RefinementConfig()
LITERAL = RefinementConfig(similarity_mode="formula_literal")


def run_oracle(doc, initial, store, iterations, cfg=DIST):
    vectors = {t: list(map(float, store[t])) for t in store}
    return reference_stfidf(
        list(doc.tf),
        initial.scores,
        vectors,
        iterations,
        mode=cfg.similarity_mode,
        clamp=cfg.negative_similarity_policy == "clamp_to_zero",
        oov=cfg.oov_policy,
        mean_mode=cfg.mean_mode,
    )


class TestTopSet:
    def test_plain_cut(self):
        assert top_set({"a": 3, "b": 2, "c": 1}, 2) == ["a", "b"]

    def test_tie_expansion(self):
        assert top_set({"a": 3, "b": 2, "c": 2}, 2) == ["a", "b", "c"]

    def test_tie_expansion_takes_every_tied_term(self):
        assert top_set({"a": 3, "b": 2, "c": 2, "d": 2, "e": 1}, 2) == ["a", "b", "c", "d"]

    def test_ties_above_the_cut_do_not_expand(self):
        assert top_set({"a": 3, "b": 3, "c": 2, "d": 1}, 3) == ["a", "b", "c"]

    def test_m_larger_than_table(self):
        assert top_set({"b": 1, "a": 1}, 5) == ["a", "b"]

    def test_brute_force_sort_and_cut(self):
        rng = np.random.default_rng(0)
        scores = {f"w{i:03d}": float(rng.random()) for i in range(100)}
        expected = sorted(scores, key=lambda t: scores[t], reverse=True)[:10]
        assert top_set(scores, 10) == expected

    def test_size(self):
        assert [top_set_size(n) for n in (1, 2, 3, 4, 8, 9, 10, 99, 100)] == [1, 1, 1, 2, 2, 3, 3, 9, 10]


class TestScoreWeight:
    def test_values(self):
        assert score_weight(0.2, 1.0) == pytest.approx(1.25)
        assert score_weight(0.0, 7.0) == 1.0
        assert score_weight(5.0, 10.0) == 2.0

    def test_greater_than_one(self):
        assert score_weight(1e-9, 1.0) > 1

    def test_degenerate(self):
        with pytest.raises(DegenerateInputError, match="degenerate weight"):
            score_weight(3.0, 3.0)
        with pytest.raises(ValueError):
            score_weight(4.0, 3.0)


class TestMultiplier:
    def test_distance_mode(self):
        mean = np.array([2.0, 0.0])
        assert multiplier([5.0, 0.0], mean, DIST) == 1.0
        assert multiplier([0.0, 3.0], mean, DIST) == 0.5
        assert multiplier([-1.0, 0.0], mean, DIST) == pytest.approx(1 / 3)

    def test_literal_mode(self):
        mean = np.array([2.0, 0.0])
        assert multiplier([0.5, 4.0], mean, LITERAL) == 0.5
        # negative dot floored at 0
        assert multiplier([-3.0, 0.0], mean, LITERAL) == 1.0
        allow = RefinementConfig(similarity_mode="formula_literal", negative_similarity_policy="allow")
        assert multiplier([-0.25, 0.0], mean, allow) == 2.0
        with pytest.raises(DegenerateInputError):
            multiplier([-0.5, 0.0], mean, allow)

    def test_zero_mean(self):
        with pytest.raises(DegenerateInputError, match="degenerate mean"):
            multiplier([1.0, 0.0], [0.0, 0.0], DIST)


def test_config_validation():
    with pytest.raises(ValueError):
        RefinementConfig(epsilon=0)
    with pytest.raises(ValueError):
        RefinementConfig(max_iterations=0)
    with pytest.raises(ValueError):
        RefinementConfig(similarity_mode="cosine")


def test_identical_embeddings_are_a_fixed_point():
    doc = TokenizedDocument.from_terms("d", ["a", "b", "c", "d", "b"])
    initial = ScoreTable("d", {"a": 1.5, "b": 3.0, "c": 0.7, "d": 2.2})
    store = EmbeddingStore({t: [0.3, -1.2, 2.0] for t in "abcd"})
    result = refine(doc, initial, store)
    assert result.stop_reason is StopReason.CONVERGED
    assert result.iterations == 1
    assert result.trace[0].displacement == 0
    assert result.final_scores.scores == initial.scores


def test_three_terms_two_iterations_closed_form():
    # m = 1 and the top term is "a" both times, so the context direction is
    # (1, 0) throughout: b keeps cosine 1/sqrt(2), c is orthogonal.
    doc = TokenizedDocument.from_terms("d", ["a", "b", "c"])
    initial = ScoreTable("d", {"a": 3.0, "b": 2.0, "c": 1.0})
    store = EmbeddingStore({"a": [1.0, 0.0], "b": [1.0, 1.0], "c": [0.0, 1.0]})
    cfg = RefinementConfig(min_iterations=2, max_iterations=2)
    result = refine(doc, initial, store, cfg)
    factor_b = 1 / (2 - 1 / math.sqrt(2))
    expected = {"a": 3.0, "b": 2.0 * factor_b**2, "c": 0.25}
    # the top set never changes, so the check at k=2 already sees zero drift
    assert result.stop_reason is StopReason.CONVERGED
    assert result.iterations == 2
    for term, value in expected.items():
        assert abs(result.final_scores.scores[term] - value) <= 1e-10
    oracle = run_oracle(doc, initial, store, 2)
    for term, value in oracle.items():
        assert abs(result.final_scores.scores[term] - value) <= 1e-10
    # first-iteration context mean: weight 1/(1 - 3/6) = 2 on (1, 0), divided by |top| = 1
    np.testing.assert_array_equal(result.trace[0].mean, [1.0, 0.0])


def test_planted_fixture_demotes_noise():
    fx = planted_fixture()
    result = refine(fx.doc, fx.initial, fx.store)
    before = fx.initial.ranking()
    after = result.final_scores.ranking()
    assert before.index(fx.noise_term) == 1
    assert after.index(fx.noise_term) > before.index(fx.noise_term)
    assert after[-1] == fx.noise_term
    expected = run_oracle(fx.doc, fx.initial, fx.store, result.iterations)
    for term, value in expected.items():
        assert abs(result.final_scores.scores[term] - value) <= 1e-10


def test_planted_fixture_premise():
    fx = planted_fixture()
    vecs = [fx.store[t] for t in fx.context_terms]
    for i, a in enumerate(vecs):
        for b in vecs[i + 1 :]:
            assert np.dot(a, b) / np.linalg.norm(a) / np.linalg.norm(b) >= 0.95
        assert abs(np.dot(a, fx.store[fx.noise_term])) < 1e-12


@pytest.mark.parametrize("cfg", [DIST, LITERAL, RefinementConfig(mean_mode="weight_normalized")], ids=str)
@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_matches_oracle_with_oov(cfg, seed):
    rng = np.random.default_rng(seed)
    doc, initial, store = random_instance(rng, oov_rate=0.2)
    iterations = int(rng.integers(1, 6))
    cfg = RefinementConfig(
        similarity_mode=cfg.similarity_mode,
        mean_mode=cfg.mean_mode,
        min_iterations=iterations,
        max_iterations=iterations,
    )
    result = refine(doc, initial, store, cfg)
    expected = run_oracle(doc, initial, store, iterations, cfg)
    assert result.final_scores.scores.keys() == expected.keys()
    for term, value in expected.items():
        assert abs(result.final_scores.scores[term] - value) <= 1e-10


def test_degenerate_no_embedded_terms():
    doc = TokenizedDocument.from_terms("d", ["x", "y"])
    initial = ScoreTable("d", {"x": 1.0, "y": 2.0})
    result = refine(doc, initial, EmbeddingStore({"other": [1.0]}))
    assert result.stop_reason is StopReason.DEGENERATE_INPUT
    assert result.final_scores.scores == initial.scores
    assert result.final_scores.iteration == 0
    assert len(result.trace) == 0


def test_degenerate_single_embedded_term():
    doc = TokenizedDocument.from_terms("d", ["x", "y"])
    initial = ScoreTable("d", {"x": 1.0, "y": 2.0})
    result = refine(doc, initial, EmbeddingStore({"x": [1.0, 0.0]}))
    assert result.stop_reason is StopReason.DEGENERATE_INPUT
    assert result.final_scores.scores == initial.scores


def test_degenerate_zero_vector_counts_as_missing():
    doc = TokenizedDocument.from_terms("d", ["x", "y"])
    initial = ScoreTable("d", {"x": 1.0, "y": 2.0})
    result = refine(doc, initial, EmbeddingStore({"x": [1.0, 0.0], "y": [0.0, 0.0]}))
    assert result.stop_reason is StopReason.DEGENERATE_INPUT


def test_degenerate_all_zero_scores():
    doc = TokenizedDocument.from_terms("d", ["x", "y"])
    initial = ScoreTable("d", {"x": 0.0, "y": 0.0})
    result = refine(doc, initial, EmbeddingStore({"x": [1.0, 0.0], "y": [0.0, 1.0]}))
    assert result.stop_reason is StopReason.DEGENERATE_INPUT
    assert result.final_scores.iteration == 0


def test_degenerate_one_term_holds_all_mass():
    doc = TokenizedDocument.from_terms("d", ["x", "y"])
    initial = ScoreTable("d", {"x": 4.0, "y": 0.0})
    result = refine(doc, initial, EmbeddingStore({"x": [1.0, 0.0], "y": [0.0, 1.0]}))
    assert result.stop_reason is StopReason.DEGENERATE_INPUT


def test_opposite_vectors_cancel_to_degenerate_mean():
    doc = TokenizedDocument.from_terms("d", ["x", "y", "z", "w"])
    initial = ScoreTable("d", {"x": 2.0, "y": 2.0, "z": 1.0, "w": 1.0})
    store = EmbeddingStore({"x": [1.0, 0.0], "y": [-1.0, 0.0], "z": [0.0, 1.0], "w": [0.0, -1.0]})
    result = refine(doc, initial, store, RefinementConfig(mean_mode="weight_normalized"))
    assert result.stop_reason is StopReason.DEGENERATE_INPUT
    assert result.final_scores.scores == initial.scores


def test_oov_neutral_multiplier_uses_median():
    doc = TokenizedDocument.from_terms("d", ["a", "b", "c", "oov"])
    initial = ScoreTable("d", {"a": 3.0, "b": 2.0, "c": 1.0, "oov": 5.0})
    store = EmbeddingStore({"a": [1.0, 0.0], "b": [1.0, 1.0], "c": [0.0, 1.0]})
    result = refine(doc, initial, store, RefinementConfig(max_iterations=1))
    factors = {t: result.final_scores.scores[t] / initial.scores[t] for t in "abc"}
    assert result.final_scores.scores["oov"] == pytest.approx(5.0 * sorted(factors.values())[1], rel=1e-15)


def test_oov_drop_from_ranking():
    doc = TokenizedDocument.from_terms("d", ["a", "b", "c", "oov"])
    initial = ScoreTable("d", {"a": 3.0, "b": 2.0, "c": 1.0, "oov": 5.0})
    store = EmbeddingStore({"a": [1.0, 0.0], "b": [1.0, 1.0], "c": [0.0, 1.0]})
    result = refine(doc, initial, store, RefinementConfig(oov_policy="drop_from_ranking"))
    assert set(result.final_scores.scores) == {"a", "b", "c"}


def test_huge_epsilon_stops_after_first_iteration():
    fx = planted_fixture()
    result = refine(fx.doc, fx.initial, fx.store, RefinementConfig(epsilon=10))
    assert result.iterations == 1
    assert result.stop_reason is StopReason.CONVERGED


def test_min_iterations_defers_convergence():
    fx = planted_fixture()
    result = refine(fx.doc, fx.initial, fx.store, RefinementConfig(min_iterations=6, max_iterations=8))
    assert result.iterations == 6
    assert result.stop_reason is StopReason.CONVERGED


def test_max_iterations_reached():
    fx = planted_fixture()
    result = refine(fx.doc, fx.initial, fx.store, RefinementConfig(min_iterations=5, max_iterations=3))
    assert result.stop_reason is StopReason.MAX_ITERATIONS
    assert result.iterations == 3 == len(result.trace)


def test_refine_requires_plain_tfidf_table():
    fx = planted_fixture()
    with pytest.raises(ValueError):
        refine(fx.doc, ScoreTable("planted", fx.initial.scores, 3), fx.store)


def test_trace_jsonl():
    fx = planted_fixture()
    result = refine(fx.doc, fx.initial, fx.store)
    lines = result.trace.to_jsonl().splitlines()
    assert len(lines) == len(result.trace)
    records = [json.loads(line) for line in lines]
    assert [r["k"] for r in records] == list(range(1, len(records) + 1))
    for r in records:
        assert {"k", "top_set", "mean", "variance", "displacement", "substitutions"} <= r.keys()
        assert len(r["mean"]) == fx.store.dim
    assert records[0]["substitutions"] == 1
    assert fx.noise_term not in records[0]["top_set"]


def test_order_preserved_for_equal_previous_scores():
    doc = TokenizedDocument.from_terms("d", ["a", "b", "near", "far"])
    initial = ScoreTable("d", {"a": 5.0, "b": 4.0, "near": 1.0, "far": 1.0})
    store = EmbeddingStore({"a": [1.0, 0.1], "b": [1.0, -0.1], "near": [1.0, 0.5], "far": [0.2, 1.0]})
    result = refine(doc, initial, store, RefinementConfig(max_iterations=1))
    assert result.final_scores.scores["near"] > result.final_scores.scores["far"]


def test_stfidf_score_wrapper():
    fx = planted_fixture()
    index = DocumentFrequencyIndex(10, {t: 1 for t in fx.doc.tf})
    result = stfidf_score(fx.doc, index, fx.store)
    assert result.stop_reason in StopReason
    assert set(result.final_scores.scores) == set(fx.doc.tf)


def test_variance_decreases_when_substitutions_happen():
    fx = planted_fixture()
    result = refine(fx.doc, fx.initial, fx.store, RefinementConfig(min_iterations=10, max_iterations=10))
    spreads = [result.trace.initial_spread, *(r.spread for r in result.trace)]
    substituted = [r for r in result.trace if r.substitutions > 0]
    assert substituted
    for record in substituted:
        assert record.variance < spreads[record.k - 1]


def test_ranking_stable_past_convergence_on_fixture():
    fx = planted_fixture()
    result = refine(fx.doc, fx.initial, fx.store)
    for extra in (1, 2):
        k = result.iterations + extra
        longer = refine(fx.doc, fx.initial, fx.store, RefinementConfig(min_iterations=k, max_iterations=k))
        assert longer.final_scores.ranking() == result.final_scores.ranking()
