"""Semantic-sensitive TF-IDF word relevance scoring."""

from .embeddings import (
    EmbeddingStore,
    cosine_distance,
    cosine_similarity,
    dump_word2vec_text,
    load_word2vec_text,
    weighted_mean,
)
from .engine import (
    RefinementConfig,
    RefinementResult,
    RefinementTrace,
    StopReason,
    TraceRecord,
    multiplier,
    refine,
    score_weight,
    stfidf_score,
    top_set,
    top_set_size,
)
from .errors import (
    ConfigMismatchError,
    DegenerateInputError,
    EmbeddingFormatError,
    EmptyCorpusError,
    IndexFormatError,
    ParseError,
    StfidfError,
)
from .evaluation import Comparison, ErrorReport, RelevanceLabels, compare, ranking_error
from .text import (
    PipelineConfig,
    RawDocument,
    TokenizedDocument,
    distinct_term_count,
    english_stopwords,
    load_stopwords,
    tokenize,
)
from .tfidf import (
    DocumentFrequencyIndex,
    ScoreTable,
    build_index,
    load_index,
    query_score,
    save_index,
    tfidf_score,
)

__version__ = "0.1.0"
