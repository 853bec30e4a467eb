"""Ranking error against irrelevance labels, and TF-IDF vs STF-IDF reports."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .embeddings import EmbeddingStore
from .engine import RefinementConfig, refine, top_set, top_set_size
from .errors import ParseError
from .tfidf import DocumentFrequencyIndex, ScoreTable, tfidf_score
from .text import PipelineConfig, TokenizedDocument, normalize_text

log = logging.getLogger(__name__)

REPORT_COLUMNS = ("doc_id", "m", "tfidf_error", "stfidf_error", "delta")


@dataclass(frozen=True)
class RelevanceLabels:
    doc_id: str
    irrelevant_terms: frozenset[str]


@dataclass(frozen=True)
class ErrorReport:
    doc_id: str
    m: int
    tfidf_error: float
    stfidf_error: float

    @property
    def delta(self) -> float:
        return self.tfidf_error - self.stfidf_error


@dataclass
class Comparison:
    reports: list[ErrorReport]
    skipped: list[str] = field(default_factory=list)

    def errors(self, method: str) -> np.ndarray:
        return np.array([getattr(r, f"{method}_error") for r in self.reports], dtype=np.float64)

    def summary(self) -> dict:
        out: dict = {"documents": len(self.reports), "skipped": list(self.skipped)}
        for method in ("tfidf", "stfidf"):
            out[method] = summarize(self.errors(method))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in self.reports:
            writer.writerow([r.doc_id, r.m, repr(r.tfidf_error), repr(r.stfidf_error), repr(r.delta)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def summarize(values) -> dict:
    """Boxplot statistics; quartiles use linear interpolation."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return {k: None for k in ("mean", "median", "q1", "q3", "min", "max")}
    q1, median, q3 = np.percentile(values, [25, 50, 75])
    return {
        "mean": float(np.mean(values)),
        "median": float(median),
        "q1": float(q1),
        "q3": float(q3),
        "min": float(np.min(values)),
        "max": float(np.max(values)),
    }


def ranking_error(scores: ScoreTable | Mapping[str, float], labels: RelevanceLabels | Iterable[str], m: int) -> float:
    """Fraction of the (tie-expanded) top-``m`` terms labeled irrelevant."""
    irrelevant = labels.irrelevant_terms if isinstance(labels, RelevanceLabels) else set(labels)
    top = top_set(scores, m)
    if not top:
        return 0.0
    return sum(term in irrelevant for term in top) / len(top)


def evaluation_m(doc: TokenizedDocument, store: EmbeddingStore) -> int:
    """Top-set size used by the engine for ``doc``; falls back to all terms
    when fewer than two are embedded."""
    n = sum(1 for t in doc.tf if t in store and np.any(store[t]))
    if n <= 1:
        n = len(doc.tf)
    return top_set_size(n)


def compare(
    docs: Iterable[TokenizedDocument],
    index: DocumentFrequencyIndex,
    store: EmbeddingStore,
    labels: Mapping[str, RelevanceLabels],
    cfg: RefinementConfig | None = None,
) -> Comparison:
    cfg = cfg or RefinementConfig()
    reports = []
    skipped = []
    for doc in docs:
        label = labels.get(doc.id)
        if label is None:
            log.warning("no labels for document %s, skipped", doc.id)
            skipped.append(doc.id)
            continue
        if not doc.tf:
            log.warning("document %s has no terms, skipped", doc.id)
            skipped.append(doc.id)
            continue
        base = tfidf_score(doc, index)
        refined = refine(doc, base, store, cfg)
        m = evaluation_m(doc, store)
        reports.append(
            ErrorReport(doc.id, m, ranking_error(base, label, m), ranking_error(refined.final_scores, label, m))
        )
    return Comparison(reports, skipped)


def parse_labels(data: bytes | str, cfg: PipelineConfig | None = None) -> dict[str, RelevanceLabels]:
    """Labels JSON: ``{"doc_id": ["term", ...], ...}``.

    With ``cfg`` given, label terms are normalized the same way documents are.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(payload, dict):
        raise ParseError("labels must be a JSON object of doc_id -> [terms]")
    out = {}
    for doc_id, terms in payload.items():
        if not isinstance(terms, list) or not all(isinstance(t, str) for t in terms):
            raise ParseError("expected a list of strings", field=doc_id)
        if cfg is not None:
            terms = [
                tok
                for t in terms
                for tok in normalize_text(t, cfg.lowercase, cfg.strip_punctuation).split()
            ]
        out[doc_id] = RelevanceLabels(doc_id, frozenset(terms))
    return out


def dump_labels(labels: Mapping[str, RelevanceLabels]) -> str:
    return json.dumps({k: sorted(v.irrelevant_terms) for k, v in labels.items()}, sort_keys=True, indent=1)
