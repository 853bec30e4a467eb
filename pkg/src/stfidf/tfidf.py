"""Document-frequency index, conventional TF-IDF and query scoring.

Weights are ``tf * ln(|D| / df)`` with raw counts for ``tf``. Terms that were
never seen while indexing are scored as if ``df == 1``.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ConfigMismatchError, EmptyCorpusError, IndexFormatError
from .text import PipelineConfig, TokenizedDocument

log = logging.getLogger(__name__)

INDEX_FORMAT_VERSION = 1


@dataclass(frozen=True)
class DocumentFrequencyIndex:
    corpus_size: int
    df: Mapping[str, int] = field(hash=False)
    config_fingerprint: str = ""

    def __post_init__(self):
        if self.corpus_size < 1:
            raise ValueError("corpus_size must be >= 1")
        for term, count in self.df.items():
            if not 1 <= count <= self.corpus_size:
                raise ValueError(f"df[{term!r}]={count} outside [1, {self.corpus_size}]")

    def __len__(self):
        return len(self.df)

    def idf(self, term: str) -> float:
        return math.log(self.corpus_size / max(self.df.get(term, 0), 1))


@dataclass
class ScoreTable:
    """Per-term relevance scores for a single document."""

    doc_id: str
    scores: dict[str, float]
    iteration: int = 0

    def ranked(self) -> list[tuple[str, float]]:
        """Terms by decreasing score; equal scores fall back to term order."""
        return sorted(self.scores.items(), key=lambda item: (-item[1], item[0]))

    def ranking(self) -> list[str]:
        return [term for term, _ in self.ranked()]

    def top(self, k: int) -> list[tuple[str, float]]:
        return self.ranked()[:k]

    def scaled(self, factor: float) -> "ScoreTable":
        return ScoreTable(self.doc_id, {t: s * factor for t, s in self.scores.items()}, self.iteration)


def build_index(
    docs: Iterable[TokenizedDocument], cfg: PipelineConfig | None = None
) -> DocumentFrequencyIndex:
    df: Counter[str] = Counter()
    corpus_size = 0
    for doc in docs:
        corpus_size += 1
        df.update(doc.tf.keys())
    if corpus_size == 0:
        raise EmptyCorpusError()
    fingerprint = cfg.fingerprint() if cfg is not None else ""
    return DocumentFrequencyIndex(corpus_size, dict(sorted(df.items())), fingerprint)


def merge_indexes(a: DocumentFrequencyIndex, b: DocumentFrequencyIndex) -> DocumentFrequencyIndex:
    """Combine indexes built over disjoint document sets."""
    if a.config_fingerprint != b.config_fingerprint:
        raise ConfigMismatchError("cannot merge indexes built under different pipeline configs")
    df = Counter(a.df)
    df.update(b.df)
    return DocumentFrequencyIndex(a.corpus_size + b.corpus_size, dict(sorted(df.items())), a.config_fingerprint)


def check_fingerprint(index: DocumentFrequencyIndex, cfg: PipelineConfig) -> None:
    if index.config_fingerprint != cfg.fingerprint():
        raise ConfigMismatchError(
            "index was built with a different pipeline config "
            f"({index.config_fingerprint[:12] or '<none>'} != {cfg.fingerprint()[:12]})"
        )


def tfidf_score(doc: TokenizedDocument, index: DocumentFrequencyIndex) -> ScoreTable:
    unseen = [term for term in doc.tf if term not in index.df]
    if unseen:
        log.warning("%s: %d term(s) missing from the index, scored with df=1", doc.id, len(unseen))
    scores = {term: count * index.idf(term) for term, count in doc.tf.items()}
    return ScoreTable(doc.id, scores, iteration=0)


def query_score(query_terms: Iterable[str], doc_scores: ScoreTable) -> float:
    # duplicates in the query count once per occurrence
    return sum(doc_scores.scores.get(term, 0.0) for term in query_terms)


def rank_documents(query_terms: list[str], tables: Iterable[ScoreTable]) -> list[tuple[str, float]]:
    """Documents by decreasing query score (ties by doc id)."""
    scored = [(table.doc_id, query_score(query_terms, table)) for table in tables]
    return sorted(scored, key=lambda item: (-item[1], item[0]))


def dumps_index(index: DocumentFrequencyIndex) -> str:
    payload = {
        "version": INDEX_FORMAT_VERSION,
        "corpus_size": index.corpus_size,
        "config_fingerprint": index.config_fingerprint,
        "df": dict(index.df),
    }
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def save_index(index: DocumentFrequencyIndex) -> bytes:
    return dumps_index(index).encode("utf-8")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def load_index(data: bytes | str) -> DocumentFrequencyIndex:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IndexFormatError(f"not valid UTF-8: {exc.reason}") from None
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None

    if not isinstance(payload, dict):
        raise IndexFormatError("top level must be a JSON object")
    for key in ("version", "corpus_size", "config_fingerprint", "df"):
        if key not in payload:
            raise IndexFormatError("missing required key", field=key)
    if payload["version"] != INDEX_FORMAT_VERSION:
        raise IndexFormatError(f"unsupported version {payload['version']!r}", field="version")

    corpus_size = payload["corpus_size"]
    if not _is_int(corpus_size) or corpus_size < 1:
        raise IndexFormatError("corpus_size must be a positive integer", field="corpus_size")
    if not isinstance(payload["config_fingerprint"], str):
        raise IndexFormatError("config_fingerprint must be a string", field="config_fingerprint")
    df = payload["df"]
    if not isinstance(df, dict):
        raise IndexFormatError("df must be an object", field="df")
    for term, count in df.items():
        if not term:
            raise IndexFormatError("empty term", field="df")
        if not _is_int(count):
            raise IndexFormatError("document frequency must be an integer", field=f"df.{term}")
        if count < 1:
            raise IndexFormatError(f"document frequency {count} < 1", field=f"df.{term}")
        if count > corpus_size:
            raise IndexFormatError(
                f"document frequency {count} exceeds corpus_size {corpus_size}", field=f"df.{term}"
            )
    return DocumentFrequencyIndex(corpus_size, dict(sorted(df.items())), payload["config_fingerprint"])
