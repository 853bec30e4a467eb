"""Synthetic corpora with a planted semantic context.

Real annotated data is not bundled, so these generators build documents whose
relevant words share a common embedding direction while a few rare,
unrelated "noise" words get inflated TF-IDF scores. The noise words are the
ground-truth irrelevant labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingStore
from .evaluation import RelevanceLabels
from .tfidf import DocumentFrequencyIndex, ScoreTable
from .text import PipelineConfig, RawDocument, TokenizedDocument


@dataclass
class PlantedFixture:
    doc: TokenizedDocument
    initial: ScoreTable
    store: EmbeddingStore
    context_terms: list[str]
    noise_term: str


def planted_fixture(dim: int = 8, seed: int = 7) -> PlantedFixture:
    """Nine context words around one direction plus one orthogonal noise word.

    The noise word holds the second-highest TF-IDF score. Context scores are
    spaced 10% apart so that the context words' own order is stable.
    """
    rng = np.random.default_rng(seed)
    u = np.zeros(dim)
    u[0] = 1.0
    noise_dir = np.zeros(dim)
    noise_dir[1] = 1.0

    context_terms = [f"context{i}" for i in range(9)]
    vectors = {}
    for term in context_terms:
        offset = np.zeros(dim)
        offset[2:] = rng.normal(size=dim - 2)
        offset *= 0.1 / np.linalg.norm(offset)
        vectors[term] = u + offset
    vectors["noise"] = noise_dir

    scores = {term: 10.0 * 0.9**i for i, term in enumerate(context_terms)}
    scores["noise"] = 9.5

    doc = TokenizedDocument.from_terms("planted", [*context_terms, "noise"])
    return PlantedFixture(doc, ScoreTable("planted", scores, 0), EmbeddingStore(vectors), context_terms, "noise")


@dataclass
class IndexedFixture:
    doc: RawDocument
    index: DocumentFrequencyIndex
    store: EmbeddingStore
    labels: dict[str, RelevanceLabels]
    noise_term: str


def planted_indexed_fixture(cfg: PipelineConfig | None = None) -> IndexedFixture:
    """The planted fixture expressed as raw text plus a document-frequency index.

    Every word occurs once; document frequencies in a 1000-document corpus are
    chosen so that plain TF-IDF ranks the noise word second.
    """
    fx = planted_fixture()
    cfg = cfg or PipelineConfig()
    df = dict(zip(fx.context_terms, [1, 3, 4, 5, 7, 9, 12, 16, 20]))
    df[fx.noise_term] = 2
    index = DocumentFrequencyIndex(1000, dict(sorted(df.items())), cfg.fingerprint())
    doc = RawDocument("planted", " ".join([fx.noise_term, *reversed(fx.context_terms)]))
    labels = {"planted": RelevanceLabels("planted", frozenset({fx.noise_term}))}
    return IndexedFixture(doc, index, fx.store, labels, fx.noise_term)


@dataclass
class Benchmark:
    docs: list[RawDocument]
    store: EmbeddingStore
    labels: dict[str, RelevanceLabels]
    topic_of: dict[str, int]


def _unit(rng, dim):
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def make_benchmark(
    n_docs: int = 100,
    seed: int = 0,
    dim: int = 16,
    n_topics: int = 10,
    words_per_topic: int = 20,
    noise_pool: int = 300,
    context_spread: float = 0.3,
    noise_tf: tuple[int, int] = (1, 3),
) -> Benchmark:
    """Generate ``n_docs`` documents, each about one of ``n_topics`` topics.

    A document mixes 12-18 topic words (tf 1-4, shared with other documents of
    the topic, so moderate idf) with 1-3 noise words drawn from a large pool
    (tf 1-3, almost unique to the document, so high idf). TF-IDF therefore
    tends to push noise words into the top set; the embeddings say otherwise.
    Vector norms vary in [0.5, 2] so raw-norm effects are exercised.
    """
    rng = np.random.default_rng(seed)
    vectors: dict[str, np.ndarray] = {}

    topic_words = []
    for t in range(n_topics):
        u = _unit(rng, dim)
        words = []
        for i in range(words_per_topic):
            word = f"topic{t}word{i}"
            v = u + context_spread * rng.normal(size=dim) / np.sqrt(dim)
            vectors[word] = v / np.linalg.norm(v) * rng.uniform(0.5, 2.0)
            words.append(word)
        topic_words.append(words)

    noise_words = [f"noise{i}" for i in range(noise_pool)]
    for word in noise_words:
        vectors[word] = _unit(rng, dim) * rng.uniform(0.5, 2.0)

    docs, labels, topic_of = [], {}, {}
    for d in range(n_docs):
        doc_id = f"doc{d:03d}"
        topic = int(rng.integers(n_topics))
        n_context = int(rng.integers(12, 19))
        chosen = rng.choice(topic_words[topic], size=n_context, replace=False)
        n_noise = int(rng.integers(1, 4))
        noise = rng.choice(noise_words, size=n_noise, replace=False)

        tokens = []
        for word in chosen:
            tokens += [str(word)] * int(rng.choice([1, 2, 3, 4], p=[0.4, 0.3, 0.2, 0.1]))
        for word in noise:
            tokens += [str(word)] * int(rng.integers(noise_tf[0], noise_tf[1] + 1))
        rng.shuffle(tokens)

        docs.append(RawDocument(doc_id, " ".join(tokens)))
        labels[doc_id] = RelevanceLabels(doc_id, frozenset(str(w) for w in noise))
        topic_of[doc_id] = topic

    return Benchmark(docs, EmbeddingStore(vectors), labels, topic_of)
