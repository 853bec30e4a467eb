"""Pre-trained word vectors in the word2vec text format, plus the vector
helpers the refinement engine needs (cosine, weighted mean)."""

from __future__ import annotations

import math
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .errors import DegenerateInputError, EmbeddingFormatError

MeanMode = Literal["count", "weight_normalized"]


class EmbeddingStore(Mapping[str, np.ndarray]):
    """Immutable term -> vector mapping with a fixed dimension.

    Vectors are kept exactly as loaded (no normalization).
    """

    def __init__(self, vectors: Mapping[str, Sequence[float]], dim: int | None = None):
        if not vectors:
            raise ValueError("embedding vocabulary is empty")
        self._vectors: dict[str, np.ndarray] = {}
        for term, vec in vectors.items():
            arr = np.array(vec, dtype=np.float64)
            arr.setflags(write=False)
            if dim is None:
                dim = arr.shape[0]
            if arr.shape != (dim,):
                raise ValueError(f"vector for {term!r} has shape {arr.shape}, expected ({dim},)")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"vector for {term!r} has non-finite components")
            self._vectors[term] = arr
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim

    def __getitem__(self, term: str) -> np.ndarray:
        return self._vectors[term]

    def __iter__(self):
        return iter(self._vectors)

    def __len__(self):
        return len(self._vectors)

    def __repr__(self):
        return f"EmbeddingStore(vocab={len(self)}, dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, EmbeddingStore):
            return NotImplemented
        return (
            self.dim == other.dim
            and list(self._vectors) == list(other._vectors)
            and all(np.array_equal(v, other._vectors[t]) for t, v in self._vectors.items())
        )

    __hash__ = None

    def norm(self, term: str) -> float:
        return float(np.linalg.norm(self._vectors[term]))


def load_word2vec_text(data: bytes | str) -> EmbeddingStore:
    """Parse ``<count> <dim>`` followed by ``<token> <v1> ... <vdim>`` lines."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EmbeddingFormatError(f"not valid UTF-8: {exc.reason}") from None
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EmbeddingFormatError("missing header", line=1)

    header = lines[0].split()
    if len(header) != 2:
        raise EmbeddingFormatError("header must be '<vocab_count> <dim>'", line=1)
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise EmbeddingFormatError("header must contain two integers", line=1) from None
    if count < 1 or dim < 1:
        raise EmbeddingFormatError("vocab count and dim must be positive", line=1)

    vectors: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.rstrip("\r").split(" ")
        if parts and parts[-1] == "":
            parts.pop()  # tolerate the trailing space the reference tool writes
        if not parts or not parts[0]:
            raise EmbeddingFormatError("empty token", line=lineno)
        token, components = parts[0], parts[1:]
        if len(components) != dim:
            raise EmbeddingFormatError(
                f"dimension mismatch: expected {dim} components, got {len(components)}", line=lineno
            )
        if token in vectors:
            raise EmbeddingFormatError(f"duplicate token {token!r}", line=lineno)
        try:
            vec = np.array([float(c) for c in components], dtype=np.float64)
        except ValueError:
            raise EmbeddingFormatError("non-numeric component", line=lineno) from None
        if not np.all(np.isfinite(vec)):
            raise EmbeddingFormatError("non-finite component", line=lineno)
        vectors[token] = vec

    if len(vectors) != count:
        raise EmbeddingFormatError(
            f"vocab count mismatch: header declares {count}, found {len(vectors)}", line=1
        )
    return EmbeddingStore(vectors, dim)


def dump_word2vec_text(store: EmbeddingStore) -> bytes:
    # repr() is the shortest decimal string that round-trips a float64 exactly
    out = [f"{len(store)} {store.dim}"]
    for term, vec in store.items():
        if not term or any(ch.isspace() for ch in term):
            raise ValueError(f"token {term!r} cannot be written in the text format")
        out.append(" ".join([term, *(repr(float(x)) for x in vec)]))
    return ("\n".join(out) + "\n").encode("utf-8")


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise DegenerateInputError("undefined angle: zero vector")
    return float(min(1.0, max(-1.0, np.dot(a, b) / (na * nb))))


def cosine_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape == b.shape and np.array_equal(a, b) and np.any(a):
        return 0.0
    return 1.0 - cosine_similarity(a, b)


def weighted_mean(pairs: Iterable[tuple[Sequence[float], float]], mode: MeanMode = "count") -> np.ndarray:
    """Score-weighted average of vectors.

    ``mode="count"`` divides the weighted sum by the number of vectors (so the
    result grows with the weights); ``"weight_normalized"`` divides by the sum
    of weights, giving a convex combination.
    """
    pairs = list(pairs)
    if not pairs:
        raise DegenerateInputError("no embedded terms")
    total = None
    weight_sum = 0.0
    for vec, weight in pairs:
        if not (math.isfinite(weight) and weight > 0):
            raise ValueError(f"weights must be finite and positive, got {weight!r}")
        term = weight * np.asarray(vec, dtype=np.float64)
        total = term if total is None else total + term
        weight_sum += weight
    if mode == "count":
        return total / len(pairs)
    if mode == "weight_normalized":
        return total / weight_sum
    raise ValueError(f"unknown mean mode {mode!r}")
