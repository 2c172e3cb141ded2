"""
Cleaning mined bitext
=====================

Heuristic rules drop duplicates, short pairs and copies. A random forest
trained on pseudo-parallel positives and shuffled negatives then scores what
remains.
"""

import numpy as np

from bitextmine.core import Corpus, CorpusKind, LanguagePair, make_pair
from bitextmine.dictionary import SeedDictionary
from bitextmine.filtering import (FEATURE_NAMES, classify_corpus, feature_matrix, gen_negatives,
                                  heuristic_filter, train_forest)
from bitextmine.pipeline import cipher_corpus

pair = LanguagePair("xx", "yy")
rows = [
    ("one two three four", "uno dos tres cuatro"),
    ("one two three four", "uno dos tres cuatro"),
    ("too short", "demasiado corto"),
    ("Berlin Paris Rome Oslo", "Berlin Paris Rome Oslo"),
    ("five six seven eight", "cinco seis siete ocho"),
]
kept, removed, report = heuristic_filter(Corpus(tuple(make_pair(a, b, pair) for a, b in rows),
                                                CorpusKind.B_RAW, pair))
for p, reason in removed:
    print(f"removed ({reason.value}): {p.src.text}")
print(report.as_dict())

# classifier on a cipher corpus
corpus, cipher = cipher_corpus(600, seed=3)
seed = SeedDictionary.from_pairs(list(cipher.items()) + [(".", ".")])
train, held = corpus.pairs[:400], corpus.pairs[400:]
negatives = gen_negatives(corpus, 1.0, seed=0)
pos = feature_matrix(train, seed, seed.inverted())
neg = feature_matrix(negatives[:400], seed, seed.inverted())
print("mean features, positives vs negatives")
for name, a, b in zip(FEATURE_NAMES, pos.mean(axis=0), neg.mean(axis=0)):
    print(f"  {name:<22} {a:8.3f} {b:8.3f}")

model = train_forest(pos, neg, n_trees=30, max_depth=8, seed=0)
mixed = Corpus(tuple(held) + tuple(negatives[400:]), CorpusKind.B_RAW, pair)
accepted, rejected = classify_corpus(mixed, model, 0.5, seed, seed.inverted())
true = {p.key() for p in held}
print(f"accepted {len(accepted)}, of which true pairs: {sum(p.key() in true for p in accepted.pairs)}")
print(f"rejected {len(rejected)}, of which true pairs: {sum(p.key() in true for p in rejected.pairs)}")
scores = np.array([p.score for p in accepted.pairs + rejected.pairs])
print("score quantiles:", np.round(np.quantile(scores, [0.1, 0.5, 0.9]), 3))
