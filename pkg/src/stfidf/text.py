"""Raw text -> normalized term sequence.

Every downstream score (document frequencies, TF-IDF, refinement) is computed
over the output of :func:`tokenize`, so the rules here are deliberately
small and deterministic: NFC normalization, optional lowercasing, optional
removal of Unicode punctuation, whitespace split, length filter, stopwords.
"""

from __future__ import annotations

import hashlib
import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")


@dataclass(frozen=True)
class TokenizedDocument:
    id: str
    terms: tuple[str, ...]
    tf: dict[str, int] = field(compare=False)

    @classmethod
    def from_terms(cls, doc_id: str, terms: Iterable[str]) -> "TokenizedDocument":
        terms = tuple(terms)
        return cls(doc_id, terms, dict(Counter(terms)))


def _strip_punctuation(text: str) -> str:
    return "".join(ch for ch in text if not unicodedata.category(ch).startswith("P"))


def normalize_text(text: str, lowercase: bool, strip_punctuation: bool) -> str:
    text = unicodedata.normalize("NFC", text)
    if lowercase:
        # lower() can decompose (e.g. U+0130), so recompose afterwards
        text = unicodedata.normalize("NFC", text.lower())
    if strip_punctuation:
        text = _strip_punctuation(text)
    return text


@dataclass(frozen=True)
class PipelineConfig:
    stopwords: frozenset[str] = frozenset()
    lowercase: bool = True
    strip_punctuation: bool = True
    min_token_length: int = 1

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        normalized = set()
        for word in self.stopwords:
            normalized.update(normalize_text(word, self.lowercase, self.strip_punctuation).split())
        object.__setattr__(self, "stopwords", frozenset(normalized))

    def fingerprint(self) -> str:
        """Stable hex digest identifying the tokenization rules."""
        payload = json.dumps(
            {
                "stopwords": sorted(self.stopwords),
                "lowercase": self.lowercase,
                "strip_punctuation": self.strip_punctuation,
                "min_token_length": self.min_token_length,
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.rstrip()
        if not line or line.startswith("#"):
            continue
        words.add(line.strip())
    return frozenset(words)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: UTF-8, one token per line, ``#`` comments."""
    return parse_stopwords(Path(path).read_text(encoding="utf-8"))


def english_stopwords() -> frozenset[str]:
    """The stopword list bundled with the package."""
    text = resources.files("stfidf").joinpath("data/stopwords_en.txt").read_text(encoding="utf-8")
    return parse_stopwords(text)


def tokenize(doc: RawDocument, cfg: PipelineConfig) -> TokenizedDocument:
    text = normalize_text(doc.text, cfg.lowercase, cfg.strip_punctuation)
    terms = [
        tok
        for tok in text.split()
        if len(tok) >= cfg.min_token_length and tok not in cfg.stopwords
    ]
    return TokenizedDocument.from_terms(doc.id, terms)


def distinct_term_count(doc: TokenizedDocument) -> int:
    return len(doc.tf)
