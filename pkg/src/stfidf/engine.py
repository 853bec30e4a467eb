"""Iterative semantic rescoring of a document's TF-IDF table.

Each iteration takes the ``m = floor(sqrt(n))`` best-scored terms (``n`` is
the number of distinct in-vocabulary terms), forms their score-weighted mean
embedding, and multiplies every term's score by a factor that shrinks with
the term's distance from that mean. Terms that drift away from the document's
dominant context therefore sink in the ranking.

The loop stops once the unweighted mean of the top set stops moving
(Euclidean displacement <= ``epsilon``) or ``max_iterations`` is hit.

Two readings of the multiplier are supported:

``distance_text`` (default)
    ``1 / (1 + cosine_distance(e(w), mean))``, in ``[1/3, 1]``. Words close to
    the context keep their score and distant words are cut the most.
``formula_literal``
    ``1 / (1 + <e(w), mean>)``, i.e. norms times cosine. Note that this
    penalizes *similar* words more, which runs against the method's intent;
    it is kept for comparison. The dot product is floored at zero unless
    ``negative_similarity_policy="allow"``.
"""

from __future__ import annotations

import enum
import json
import math
import statistics
from dataclasses import dataclass, field
from typing import Literal, Mapping

import numpy as np

from .embeddings import EmbeddingStore, MeanMode, cosine_distance, weighted_mean
from .errors import DegenerateInputError
from .tfidf import DocumentFrequencyIndex, ScoreTable, tfidf_score
from .text import TokenizedDocument

SimilarityMode = Literal["distance_text", "formula_literal"]
NegativePolicy = Literal["clamp_to_zero", "allow"]
OovPolicy = Literal["neutral_multiplier", "drop_from_ranking"]


class StopReason(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    DEGENERATE_INPUT = "degenerate_input"


@dataclass(frozen=True)
class RefinementConfig:
    epsilon: float = 1e-4
    max_iterations: int = 50
    similarity_mode: SimilarityMode = "distance_text"
    negative_similarity_policy: NegativePolicy = "clamp_to_zero"
    oov_policy: OovPolicy = "neutral_multiplier"
    mean_mode: MeanMode = "count"
    # convergence is not tested before this iteration
    min_iterations: int = 1

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 1 <= self.min_iterations:
            raise ValueError("min_iterations must be >= 1")
        if self.similarity_mode not in ("distance_text", "formula_literal"):
            raise ValueError(f"unknown similarity_mode {self.similarity_mode!r}")
        if self.negative_similarity_policy not in ("clamp_to_zero", "allow"):
            raise ValueError(f"unknown negative_similarity_policy {self.negative_similarity_policy!r}")
        if self.oov_policy not in ("neutral_multiplier", "drop_from_ranking"):
            raise ValueError(f"unknown oov_policy {self.oov_policy!r}")
        if self.mean_mode not in ("count", "weight_normalized"):
            raise ValueError(f"unknown mean_mode {self.mean_mode!r}")


@dataclass(frozen=True)
class TraceRecord:
    k: int
    top_set: tuple[str, ...]
    mean: np.ndarray = field(compare=False)
    #: mean squared distance of this top set from the previous iteration's mean
    variance: float
    #: mean squared distance of this top set from its own mean
    spread: float
    displacement: float
    substitutions: int
    #: every term's score after this iteration (not exported)
    scores: dict[str, float] = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "top_set": list(self.top_set),
            "mean": [float(x) for x in self.mean],
            "variance": self.variance,
            "spread": self.spread,
            "displacement": self.displacement,
            "substitutions": self.substitutions,
        }


@dataclass
class RefinementTrace:
    initial_top_set: tuple[str, ...] = ()
    initial_mean: np.ndarray | None = None
    initial_spread: float = 0.0
    records: list[TraceRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def means(self) -> list[np.ndarray]:
        """``[mu_0, mu_1, ..., mu_K]``."""
        if self.initial_mean is None:
            return []
        return [self.initial_mean, *(r.mean for r in self.records)]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_dict()) + "\n" for r in self.records)


@dataclass
class RefinementResult:
    final_scores: ScoreTable
    trace: RefinementTrace
    stop_reason: StopReason

    @property
    def iterations(self) -> int:
        return self.final_scores.iteration


def top_set_size(n: int) -> int:
    return max(1, math.isqrt(n))


def top_set(scores: ScoreTable | Mapping[str, float], m: int) -> list[str]:
    """The ``m`` best-scored terms, extended to every term tied with the m-th.

    Ordering is by score descending, then term ascending.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if isinstance(scores, ScoreTable):
        scores = scores.scores
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    if len(ranked) <= m:
        return [term for term, _ in ranked]
    cutoff = ranked[m - 1][1]
    end = m
    while end < len(ranked) and ranked[end][1] == cutoff:
        end += 1
    return [term for term, _ in ranked[:end]]


def score_weight(s_j: float, total: float) -> float:
    """How strongly a top-set word pulls the mean toward itself: ``1 / (1 - s_j/total)``."""
    if s_j == total:
        raise DegenerateInputError("degenerate weight: one term carries the whole score mass")
    if not (0 <= s_j < total):
        raise ValueError(f"score_weight requires 0 <= s_j < total, got s_j={s_j}, total={total}")
    return 1.0 / (1.0 - s_j / total)


def multiplier(term_vec, mean, cfg: RefinementConfig) -> float:
    mean = np.asarray(mean, dtype=np.float64)
    if not np.any(mean):
        raise DegenerateInputError("degenerate mean: zero mean embedding")
    if cfg.similarity_mode == "distance_text":
        return 1.0 / (1.0 + cosine_distance(term_vec, mean))
    dot = float(np.dot(np.asarray(term_vec, dtype=np.float64), mean))
    if cfg.negative_similarity_policy == "clamp_to_zero":
        dot = max(dot, 0.0)
    elif dot <= -1.0:
        raise DegenerateInputError(f"non-positive multiplier denominator 1 + {dot}")
    return 1.0 / (1.0 + dot)


def _squared_deviation(vectors: list[np.ndarray], center: np.ndarray) -> float:
    return float(np.mean([np.dot(v - center, v - center) for v in vectors]))


def refine(
    doc: TokenizedDocument,
    initial: ScoreTable,
    store: EmbeddingStore,
    cfg: RefinementConfig | None = None,
) -> RefinementResult:
    cfg = cfg or RefinementConfig()
    if initial.iteration != 0:
        raise ValueError("refine expects an iteration-0 (plain TF-IDF) score table")

    # zero vectors have no direction, so they are treated like missing words
    vocab = [t for t in doc.tf if t in store and np.any(store[t])]
    vectors = {t: store[t] for t in vocab}
    trace = RefinementTrace()

    def degenerate(scores: dict[str, float], k: int) -> RefinementResult:
        if k == 0:
            table = ScoreTable(initial.doc_id, dict(initial.scores), 0)
        else:
            table = ScoreTable(initial.doc_id, scores, k)
        return RefinementResult(table, trace, StopReason.DEGENERATE_INPUT)

    if len(vocab) <= 1:
        return degenerate({}, 0)

    scores = {t: s for t, s in initial.scores.items() if t in vectors or cfg.oov_policy == "neutral_multiplier"}
    oov = [t for t in scores if t not in vectors]
    m = top_set_size(len(vocab))

    prev_top = top_set({t: scores[t] for t in vocab}, m)
    prev_mean = np.mean([vectors[t] for t in prev_top], axis=0)
    trace.initial_top_set = tuple(prev_top)
    trace.initial_mean = prev_mean
    trace.initial_spread = _squared_deviation([vectors[t] for t in prev_top], prev_mean)

    for k in range(1, cfg.max_iterations + 1):
        total = sum(scores.values())
        try:
            if not total > 0:
                raise DegenerateInputError("all scores are zero")
            weights = [score_weight(scores[t], total) for t in prev_top]
            context = weighted_mean(zip((vectors[t] for t in prev_top), weights), cfg.mean_mode)
            factors = {t: multiplier(vectors[t], context, cfg) for t in vocab}
        except DegenerateInputError:
            return degenerate(scores, k - 1)

        new_scores = {t: scores[t] * factors[t] for t in vocab}
        if oov:
            neutral = statistics.median(factors.values())
            for t in oov:
                new_scores[t] = scores[t] * neutral
        scores = new_scores

        top = top_set({t: scores[t] for t in vocab}, m)
        top_vectors = [vectors[t] for t in top]
        mean = np.mean(top_vectors, axis=0)
        displacement = float(np.linalg.norm(mean - prev_mean))
        entered = len(set(top) - set(prev_top))
        left = len(set(prev_top) - set(top))
        trace.records.append(
            TraceRecord(
                k=k,
                top_set=tuple(top),
                mean=mean,
                variance=_squared_deviation(top_vectors, prev_mean),
                spread=_squared_deviation(top_vectors, mean),
                displacement=displacement,
                substitutions=max(entered, left),
                scores=dict(scores),
            )
        )
        if k >= cfg.min_iterations and displacement <= cfg.epsilon:
            return RefinementResult(ScoreTable(initial.doc_id, scores, k), trace, StopReason.CONVERGED)
        prev_top, prev_mean = top, mean

    return RefinementResult(
        ScoreTable(initial.doc_id, scores, cfg.max_iterations), trace, StopReason.MAX_ITERATIONS
    )


def stfidf_score(
    doc: TokenizedDocument,
    index: DocumentFrequencyIndex,
    store: EmbeddingStore,
    cfg: RefinementConfig | None = None,
) -> RefinementResult:
    """TF-IDF followed by :func:`refine`."""
    return refine(doc, tfidf_score(doc, index), store, cfg)
