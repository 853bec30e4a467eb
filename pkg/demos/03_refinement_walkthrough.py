# One document, step by step: nine words about a single topic plus one
# unrelated word that plain TF-IDF ranks second.

from stfidf import RefinementConfig, refine
from stfidf.synthetic import planted_fixture

fx = planted_fixture()
print("TF-IDF ranking:", fx.initial.ranking())

# n = 10 embedded words, so each iteration looks at the top floor(sqrt(10)) = 3.
result = refine(fx.doc, fx.initial, fx.store)
print("stop:", result.stop_reason.value, "after", result.iterations, "iterations")
print("initial top set:", result.trace.initial_top_set)
for r in result.trace:
    # variance: spread of the new top set around the previous mean.
    # displacement: how far the (unweighted) top-set mean moved.
    print(f"  k={r.k} top={r.top_set} variance={r.variance:.4f} "
          f"displacement={r.displacement:.4f} substitutions={r.substitutions}")

print("refined ranking:", result.final_scores.ranking())
for term, score in result.final_scores.top(4):
    print(f"  {term:9s} {fx.initial.scores[term]:.3f} -> {score:.3f}")

# The loop stops as soon as the top set survives an iteration unchanged.
# Forcing extra iterations keeps shrinking far-away words further.
longer = refine(fx.doc, fx.initial, fx.store, RefinementConfig(min_iterations=6, max_iterations=6))
print("noise after 6 iterations:", round(longer.final_scores.scores[fx.noise_term], 4))

# The multiplier as literally written, 1 / (1 + <e(w), mean>), penalizes the
# words that agree with the context instead, and the noise word climbs.
literal = refine(fx.doc, fx.initial, fx.store, RefinementConfig(similarity_mode="formula_literal"))
print("formula_literal ranking:", literal.final_scores.ranking())

# Every iteration can be exported as JSON lines for plotting.
print(result.trace.to_jsonl().splitlines()[0][:100], "...")
