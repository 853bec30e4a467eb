# Reading word vectors in the word2vec text format and the vector helpers
# the refinement step is built on.

import numpy as np

from stfidf import cosine_distance, cosine_similarity, dump_word2vec_text, load_word2vec_text, weighted_mean

text = """4 3
fever 0.9 0.1 0.0
chills 0.8 0.3 0.1
ankle 0.0 0.2 0.9
ice 0.1 0.1 0.7
"""
store = load_word2vec_text(text)
print(store, "norm(fever) =", round(store.norm("fever"), 4))

# Cosine distance lives in [0, 2]: 0 for parallel vectors, 1 orthogonal, 2 opposite.
print("fever~chills", round(cosine_distance(store["fever"], store["chills"]), 4))
print("fever~ankle ", round(cosine_distance(store["fever"], store["ankle"]), 4))
print("opposite    ", cosine_distance([1, 0], [-1, 0]))
print("similarity is scale free:", cosine_similarity(store["ice"], 10 * store["ice"]))

# The default mean divides the weighted sum by the number of vectors, so
# weights above 1 also stretch the result. weight_normalized gives a convex mix.
pairs = [(store["fever"], 1.25), (store["chills"], 2.0)]
print("count mean     ", weighted_mean(pairs))
print("normalized mean", weighted_mean(pairs, "weight_normalized"))

# Writing uses the shortest exact decimal for every float, so a round trip
# is bit-for-bit.
again = load_word2vec_text(dump_word2vec_text(store))
print("round trip identical:", all(np.array_equal(again[t], store[t]) for t in store))
