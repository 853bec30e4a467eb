# Ranking error of TF-IDF and STF-IDF on a generated corpus whose irrelevant
# words are known. Each document is about one topic; a few rare off-topic
# words get high idf and sneak into the TF-IDF top set.

from stfidf import PipelineConfig, RefinementConfig, build_index, compare, tokenize
from stfidf.synthetic import make_benchmark

bench = make_benchmark(n_docs=100, seed=0)
cfg = PipelineConfig()
docs = [tokenize(d, cfg) for d in bench.docs]
index = build_index(docs, cfg)

comparison = compare(docs, index, bench.store, bench.labels)
summary = comparison.summary()
for method in ("tfidf", "stfidf"):
    s = summary[method]
    print(f"{method:7s} mean={s['mean']:.3f} median={s['median']:.3f} q1={s['q1']:.3f} q3={s['q3']:.3f}")
worse = sum(r.stfidf_error > r.tfidf_error for r in comparison.reports)
print("documents where STF-IDF is worse:", worse)

# Per-document view, the first few rows of the CSV report.
print("".join(comparison.to_csv().splitlines(keepends=True)[:6]))

# How much the stopping rule matters: with a minimum number of iterations
# the demoted words have time to fall out of the top set.
for min_it in (1, 2, 3, 5, 10):
    c = compare(docs, index, bench.store, bench.labels, RefinementConfig(min_iterations=min_it))
    print(f"min_iterations={min_it:2d}: STF-IDF mean error {c.errors('stfidf').mean():.3f}")

c = compare(docs, index, bench.store, bench.labels, RefinementConfig(similarity_mode="formula_literal"))
print(f"formula_literal: STF-IDF mean error {c.errors('stfidf').mean():.3f}")
