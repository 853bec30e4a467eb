"""Random instance builders shared by the engine and acceptance tests."""

import math

import numpy as np

from stfidf import EmbeddingStore, ScoreTable, TokenizedDocument


def random_instance(rng: np.random.Generator, n_terms=(3, 30), dims=(2, 10), oov_rate=0.0, corpus_size=20):
    """A random document, its TF-IDF-like initial scores and an embedding store.

    Scores are tf * ln(N / df) with small integer tf/df, so exact ties and
    zero scores show up regularly.
    """
    n = int(rng.integers(n_terms[0], n_terms[1] + 1))
    dim = int(rng.integers(dims[0], dims[1] + 1))
    terms = [f"t{i}" for i in range(n)]
    tf = {t: int(rng.integers(1, 5)) for t in terms}
    df = {t: int(rng.integers(1, corpus_size + 1)) for t in terms}
    scores = {t: tf[t] * math.log(corpus_size / df[t]) for t in terms}
    vectors = {t: rng.normal(size=dim) * rng.uniform(0.2, 3.0) for t in terms if rng.random() >= oov_rate}
    if not vectors:
        vectors = {"unrelated": np.ones(dim)}
    doc = TokenizedDocument.from_terms("doc", [t for t in terms for _ in range(tf[t])])
    return doc, ScoreTable("doc", scores, 0), EmbeddingStore(vectors, dim)
