import string
import unicodedata
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stfidf.text import (
    PipelineConfig,
    RawDocument,
    TokenizedDocument,
    distinct_term_count,
    english_stopwords,
    load_stopwords,
    tokenize,
)


def test_drug_example():
    cfg = PipelineConfig(stopwords=frozenset({"the"}))
    doc = tokenize(RawDocument("d1", "The drug, the DRUG!"), cfg)
    assert doc.terms == ("drug", "drug")
    assert doc.tf == {"drug": 2}


def test_empty_text():
    doc = tokenize(RawDocument("d2", ""), PipelineConfig())
    assert doc.terms == ()
    assert doc.tf == {}
    assert distinct_term_count(doc) == 0


def test_no_stopwords_hand_count():
    doc = tokenize(RawDocument("d3", "aspirin relieves headache pain quickly"), PipelineConfig())
    assert len(doc.terms) == 5
    assert all(count == 1 for count in doc.tf.values())
    assert distinct_term_count(doc) == 5


def test_distinct_term_count():
    assert distinct_term_count(TokenizedDocument.from_terms("x", ["drug", "drug"])) == 1
    ten = TokenizedDocument.from_terms("x", [f"w{i}" for i in range(10)])
    assert distinct_term_count(ten) == 10


def test_empty_id_rejected():
    with pytest.raises(ValueError):
        RawDocument("", "text")


def test_flags_off():
    cfg = PipelineConfig(lowercase=False, strip_punctuation=False)
    doc = tokenize(RawDocument("d", "Drug, drug"), cfg)
    assert doc.terms == ("Drug,", "drug")


def test_min_token_length():
    cfg = PipelineConfig(min_token_length=3)
    assert tokenize(RawDocument("d", "a an ant ants"), cfg).terms == ("ant", "ants")
    with pytest.raises(ValueError):
        PipelineConfig(min_token_length=0)


def test_stopwords_normalized_under_config():
    cfg = PipelineConfig(stopwords=frozenset({"The", "Don't"}))
    assert cfg.stopwords == {"the", "dont"}
    assert tokenize(RawDocument("d", "the THE don't drug"), cfg).terms == ("drug",)


def test_unicode_canonical_forms_tokenize_identically():
    composed = "café naïve"
    decomposed = unicodedata.normalize("NFD", composed)
    assert composed != decomposed
    cfg = PipelineConfig()
    assert tokenize(RawDocument("a", composed), cfg).terms == tokenize(RawDocument("b", decomposed), cfg).terms


def test_unicode_punctuation_stripped():
    doc = tokenize(RawDocument("d", "«fever» — cough… ¿why?"), PipelineConfig())
    assert doc.terms == ("fever", "cough", "why")


def test_stopword_file_format(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("# comment\nthe  \n\nand\t\n#not\n", encoding="utf-8")
    assert load_stopwords(path) == {"the", "and"}


def test_bundled_stopwords():
    words = english_stopwords()
    assert {"the", "and", "of"} <= words
    assert not any(w.startswith("#") for w in words)


def test_fingerprint_stable_and_sensitive():
    a = PipelineConfig(stopwords=frozenset({"x", "y"}))
    b = PipelineConfig(stopwords=frozenset({"y", "x"}))
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != PipelineConfig(stopwords=frozenset({"x"})).fingerprint()
    assert a.fingerprint() != PipelineConfig(stopwords=a.stopwords, lowercase=False).fingerprint()


texts = st.text(
    alphabet=st.sampled_from(list(string.ascii_letters + string.punctuation + " \t\n") + ["é", "É", "ß", "İ", "…", "—"]),
    max_size=80,
)
configs = st.builds(
    PipelineConfig,
    stopwords=st.frozensets(st.sampled_from(["the", "a", "Of", "an!", "is"]), max_size=4),
    lowercase=st.booleans(),
    strip_punctuation=st.booleans(),
    min_token_length=st.integers(1, 4),
)


@given(texts, configs)
@settings(max_examples=300)
def test_idempotent(text, cfg):
    once = tokenize(RawDocument("d", text), cfg)
    twice = tokenize(RawDocument("d", " ".join(once.terms)), cfg)
    assert twice.terms == once.terms


@given(texts, configs)
@settings(max_examples=300)
def test_output_terms_clean(text, cfg):
    doc = tokenize(RawDocument("d", text), cfg)
    for term in doc.terms:
        assert term
        assert term not in cfg.stopwords
        assert len(term) >= cfg.min_token_length
        if cfg.strip_punctuation:
            assert not any(unicodedata.category(ch).startswith("P") for ch in term)


@given(texts, configs)
@settings(max_examples=300)
def test_tf_reconstruction(text, cfg):
    doc = tokenize(RawDocument("d", text), cfg)
    assert Counter(doc.terms) == doc.tf
    assert sum(doc.tf.values()) == len(doc.terms)
    assert set(doc.tf) <= set(doc.terms)
