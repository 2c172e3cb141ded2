"""
Inducing a bilingual dictionary with IBM Model 1
================================================

A small cipher corpus is built where every source word has exactly one
translation. EM learns t(tgt|src) from sentence pairs alone, and the seed
dictionary keeps the confident entries.
"""

from collections import Counter

from bitextmine.dictionary import extract_seed, train_ibm1
from bitextmine.pipeline import cipher_corpus

corpus, cipher = cipher_corpus(500, vocab_size=120, seed=1)
print(corpus.pairs[0].src.text)
print(corpus.pairs[0].tgt.text)

# the log-likelihood never goes down; entry 0 is the uniform start
table = train_ibm1(corpus, iterations=8)
for k, ll in enumerate(table.log_likelihoods):
    print(f"iteration {k}: log-likelihood {ll:.1f}")

# how many frequent words have the cipher translation as their top entry
freq = Counter(t for p in corpus.pairs for t in p.src.tokens)
frequent = [w for w in cipher if freq[w] >= 5]
hits = sum(table.best(w) == cipher[w] for w in frequent)
print(f"top-1 correct for {hits} of {len(frequent)} words seen at least 5 times")

word = frequent[0]
row = sorted(table.table[word].items(), key=lambda kv: -kv[1])[:3]
print(word, "->", ", ".join(f"{t} {p:.3f}" for t, p in row))

seed = extract_seed(table, min_prob=0.1, cap=4)
print(f"seed dictionary: {len(seed)} entries, e.g. {word} -> {seed.translations(word)}")
