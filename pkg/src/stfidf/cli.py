"""Command-line entry point: ``stfidf index | score | eval``.

Exit codes: 0 success, 2 input error, 3 config mismatch, 4 parse error.

Settings come from built-in defaults, then an optional ``--config`` file of
``key = value`` lines, then command-line flags (flags win). Recognized keys::

    stopwords = english | none | <path>
    lowercase = true
    strip_punctuation = true
    min_token_length = 1
    epsilon = 1e-4
    max_iterations = 50
    min_iterations = 1
    similarity_mode = distance_text | formula_literal
    negative_similarity_policy = clamp_to_zero | allow
    oov_policy = neutral_multiplier | drop_from_ranking
    mean_mode = count | weight_normalized
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterator

from .embeddings import EmbeddingStore, load_word2vec_text
from .engine import RefinementConfig, StopReason, refine
from .errors import ConfigMismatchError, EmptyCorpusError, ParseError
from .evaluation import compare, parse_labels
from .text import PipelineConfig, RawDocument, english_stopwords, load_stopwords, tokenize
from .tfidf import ScoreTable, build_index, check_fingerprint, load_index, save_index, tfidf_score

log = logging.getLogger("stfidf")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MISMATCH = 3
EXIT_PARSE = 4

DEFAULTS = {
    "stopwords": "english",
    "lowercase": True,
    "strip_punctuation": True,
    "min_token_length": 1,
    "epsilon": 1e-4,
    "max_iterations": 50,
    "min_iterations": 1,
    "similarity_mode": "distance_text",
    "negative_similarity_policy": "clamp_to_zero",
    "oov_policy": "neutral_multiplier",
    "mean_mode": "count",
}
_BOOL_KEYS = {"lowercase", "strip_punctuation"}
_INT_KEYS = {"min_token_length", "max_iterations", "min_iterations"}
_FLOAT_KEYS = {"epsilon"}


class InputError(Exception):
    pass


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        parser.read_string("[stfidf]\n" + text, source=path)
    except configparser.Error as exc:
        raise ParseError(f"malformed config file {path}: {exc}") from None
    out = {}
    for key, raw in parser["stfidf"].items():
        if key not in DEFAULTS:
            raise ParseError(f"unknown config key in {path}", field=key)
        try:
            if key in _BOOL_KEYS:
                out[key] = parser["stfidf"].getboolean(key)
            elif key in _INT_KEYS:
                out[key] = int(raw)
            elif key in _FLOAT_KEYS:
                out[key] = float(raw)
            else:
                out[key] = raw.strip()
        except ValueError:
            raise ParseError(f"invalid value {raw!r} in {path}", field=key) from None
    return out


def resolve_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if args.config:
        settings.update(read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def pipeline_config(settings: dict) -> PipelineConfig:
    spec = settings["stopwords"]
    if spec == "english":
        stopwords = english_stopwords()
    elif spec in ("none", ""):
        stopwords = frozenset()
    else:
        try:
            stopwords = load_stopwords(spec)
        except OSError as exc:
            raise InputError(f"cannot read stopword file {spec}: {exc.strerror}") from None
    return PipelineConfig(
        stopwords=stopwords,
        lowercase=settings["lowercase"],
        strip_punctuation=settings["strip_punctuation"],
        min_token_length=settings["min_token_length"],
    )


def refinement_config(settings: dict) -> RefinementConfig:
    try:
        return RefinementConfig(
            epsilon=settings["epsilon"],
            max_iterations=settings["max_iterations"],
            min_iterations=settings["min_iterations"],
            similarity_mode=settings["similarity_mode"],
            negative_similarity_policy=settings["negative_similarity_policy"],
            oov_policy=settings["oov_policy"],
            mean_mode=settings["mean_mode"],
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _read_bytes(path: str | Path, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc.strerror}") from None


def read_corpus(path: str | Path) -> Iterator[RawDocument]:
    """A directory of ``.txt`` files (stem = id) or a ``.jsonl`` file of
    ``{"id": ..., "text": ...}`` records."""
    path = Path(path)
    if path.is_dir():
        for file in sorted(path.glob("*.txt")):
            yield RawDocument(file.stem, _read_text(file))
    elif path.suffix == ".jsonl":
        for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                yield RawDocument(str(record["id"]), str(record["text"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad corpus record in {path}: {exc}", line=lineno) from None
    elif path.exists():
        yield RawDocument(path.stem, _read_text(path))
    else:
        raise InputError(f"corpus not found: {path}")


def load_store(path: str) -> EmbeddingStore:
    return load_word2vec_text(_read_bytes(path, "embeddings"))


def format_ranking(table: ScoreTable, top: int | None, fmt: str) -> str:
    rows = table.ranked()
    if top is not None:
        rows = rows[:top]
    if fmt == "json":
        return json.dumps([{"rank": i, "term": t, "score": s} for i, (t, s) in enumerate(rows, 1)]) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rank", "term", "score"])
        for i, (t, s) in enumerate(rows, 1):
            writer.writerow([i, t, f"{s:.6f}"])
        return buf.getvalue()
    return "".join(f"{i}\t{t}\t{s:.6f}\n" for i, (t, s) in enumerate(rows, 1))


def cmd_index(args) -> int:
    settings = resolve_settings(args)
    cfg = pipeline_config(settings)
    docs = [tokenize(doc, cfg) for doc in read_corpus(args.corpus)]
    index = build_index(docs, cfg)
    atomic_write(Path(args.output), save_index(index))
    print(f"corpus_size\t{index.corpus_size}")
    print(f"vocabulary\t{len(index)}")
    return EXIT_OK


def cmd_score(args) -> int:
    settings = resolve_settings(args)
    cfg = pipeline_config(settings)
    if args.mode == "stfidf" and not args.embeddings:
        raise InputError("--mode stfidf requires --embeddings")
    index = load_index(_read_bytes(args.index, "index"))
    check_fingerprint(index, cfg)
    doc_path = Path(args.doc)
    doc = tokenize(RawDocument(doc_path.stem, _read_text(doc_path)), cfg)
    table = tfidf_score(doc, index)

    if args.mode == "stfidf":
        store = load_store(args.embeddings)
        result = refine(doc, table, store, refinement_config(settings))
        if result.stop_reason is StopReason.DEGENERATE_INPUT:
            log.warning("%s: fewer than two embedded terms, showing the TF-IDF ranking", doc.id)
        print(f"# stop_reason={result.stop_reason.value} iterations={result.iterations}", file=sys.stderr)
        if args.trace:
            atomic_write(Path(args.trace), result.trace.to_jsonl().encode("utf-8"))
        table = result.final_scores

    sys.stdout.write(format_ranking(table, args.top, args.format))
    return EXIT_OK


def cmd_eval(args) -> int:
    settings = resolve_settings(args)
    cfg = pipeline_config(settings)
    index = load_index(_read_bytes(args.index, "index"))
    check_fingerprint(index, cfg)
    store = load_store(args.embeddings)
    labels = parse_labels(_read_bytes(args.labels, "labels"), cfg)
    docs = [tokenize(doc, cfg) for doc in read_corpus(args.corpus)]
    if not docs:
        raise EmptyCorpusError()

    comparison = compare(docs, index, store, labels, refinement_config(settings))
    out = Path(args.output_dir)
    atomic_write(out / "report.csv", comparison.to_csv().encode("utf-8"))
    atomic_write(out / "summary.json", comparison.to_json().encode("utf-8"))
    summary = comparison.summary()
    for method in ("tfidf", "stfidf"):
        mean = summary[method]["mean"]
        print(f"{method}_mean_error\t{'nan' if mean is None else f'{mean:.6f}'}")
    return EXIT_OK


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--stopwords", help="'english', 'none' or a stopword file path")
    p.add_argument("--lowercase", dest="lowercase", action="store_true", default=None)
    p.add_argument("--no-lowercase", dest="lowercase", action="store_false")
    p.add_argument("--strip-punctuation", dest="strip_punctuation", action="store_true", default=None)
    p.add_argument("--keep-punctuation", dest="strip_punctuation", action="store_false")
    p.add_argument("--min-token-length", type=int)


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float)
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--min-iterations", type=int)
    p.add_argument("--similarity-mode", choices=["distance_text", "formula_literal"])
    p.add_argument("--negative-similarity-policy", choices=["clamp_to_zero", "allow"])
    p.add_argument("--oov-policy", choices=["neutral_multiplier", "drop_from_ranking"])
    p.add_argument("--mean-mode", choices=["count", "weight_normalized"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stfidf", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build a document-frequency index")
    p.add_argument("corpus", help="directory of .txt files or a .jsonl file")
    p.add_argument("-o", "--output", default="index.json")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("score", help="rank the terms of one document")
    p.add_argument("doc")
    p.add_argument("--index", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--mode", choices=["tfidf", "stfidf"], default="stfidf")
    p.add_argument("--top", type=int)
    p.add_argument("--trace", help="write the refinement trace as JSON lines")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    _add_pipeline_flags(p)
    _add_engine_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", help="compare TF-IDF and STF-IDF ranking error")
    p.add_argument("corpus")
    p.add_argument("--index", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--output-dir", default="report")
    _add_pipeline_flags(p)
    _add_engine_flags(p)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigMismatchError as exc:
        log.error("%s", exc)
        return EXIT_MISMATCH
    except ParseError as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except (InputError, EmptyCorpusError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
