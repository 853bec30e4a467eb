# The same workflow through the `stfidf` command: write a synthetic corpus to
# disk, index it, score one document and run the evaluation.

import subprocess
import sys
import tempfile
from pathlib import Path

from stfidf.embeddings import dump_word2vec_text
from stfidf.evaluation import dump_labels
from stfidf.synthetic import make_benchmark


def stfidf(*args):
    cmd = [sys.executable, "-m", "stfidf", *map(str, args)]
    print("$ stfidf", " ".join(map(str, args)))
    proc = subprocess.run(cmd, capture_output=True, text=True)
    print(proc.stdout + proc.stderr, end="")
    return proc.returncode


bench = make_benchmark(n_docs=30, seed=1)
with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    corpus = tmp / "corpus"
    corpus.mkdir()
    for doc in bench.docs:
        (corpus / f"{doc.id}.txt").write_text(doc.text, encoding="utf-8")
    (tmp / "vectors.txt").write_bytes(dump_word2vec_text(bench.store))
    (tmp / "labels.json").write_text(dump_labels(bench.labels), encoding="utf-8")
    (tmp / "run.cfg").write_text("stopwords = none\nepsilon = 1e-4\nmax_iterations = 50\n", encoding="utf-8")

    stfidf("index", corpus, "-o", tmp / "index.json", "--config", tmp / "run.cfg")
    stfidf("score", corpus / "doc000.txt", "--index", tmp / "index.json", "--mode", "tfidf", "--top", "5",
           "--config", tmp / "run.cfg")
    stfidf("score", corpus / "doc000.txt", "--index", tmp / "index.json", "--embeddings", tmp / "vectors.txt",
           "--top", "5", "--trace", tmp / "trace.jsonl", "--config", tmp / "run.cfg")
    print("labels for doc000:", sorted(bench.labels["doc000"].irrelevant_terms))
    stfidf("eval", corpus, "--index", tmp / "index.json", "--embeddings", tmp / "vectors.txt",
           "--labels", tmp / "labels.json", "--output-dir", tmp / "report", "--config", tmp / "run.cfg")
    print((tmp / "report" / "summary.json").read_text())
    # an index built with different tokenization settings is refused (exit 3)
    print("exit code:", stfidf("score", corpus / "doc000.txt", "--index", tmp / "index.json", "--mode", "tfidf"))
