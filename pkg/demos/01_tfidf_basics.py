# Plain TF-IDF: tokenize a tiny corpus, count document frequencies, score
# the words of one document and rank documents for a query.

from stfidf import PipelineConfig, RawDocument, build_index, english_stopwords, tokenize, tfidf_score
from stfidf.tfidf import query_score, rank_documents

corpus = [
    RawDocument("flu", "Fever, chills and a cough. The fever broke after two days."),
    RawDocument("migraine", "Pounding headache, nausea and light sensitivity; the headache lasted all day."),
    RawDocument("cold", "A runny nose and a mild cough, no fever."),
    RawDocument("sprain", "Twisted my ankle running. Swelling and pain, ice helped the swelling."),
]

# Lowercase, strip punctuation, drop English function words.
cfg = PipelineConfig(stopwords=english_stopwords())
docs = [tokenize(d, cfg) for d in corpus]
print(docs[0].terms)

# df counts how many documents contain each word; |D| is the corpus size.
index = build_index(docs, cfg)
print("corpus size:", index.corpus_size, "fever df:", index.df["fever"])

# tf * ln(|D| / df). "fever" shows up in 2 of 4 documents, so it is worth
# ln 2 per occurrence; "chills" is unique to this document and worth ln 4,
# so two fevers tie with one chills here.
table = tfidf_score(docs[0], index)
for term, score in table.top(5):
    print(f"  {term:10s} {score:.4f}")

# A query score is the sum of the query words' weights in each document.
tables = [tfidf_score(d, index) for d in docs]
print(rank_documents(["fever", "cough"], tables))
print("cold / 'cough cough':", query_score(["cough", "cough"], tables[2]))
