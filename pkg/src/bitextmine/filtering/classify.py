"""Scoring a crawled corpus with the trained forest."""

from __future__ import annotations

from ..core import Corpus, CorpusKind
from .features import feature_matrix
from .forest import ForestModel


def score_corpus(corpus: Corpus, model: ForestModel, seed_st, seed_ts, profiles=None):
    if len(corpus) == 0:
        return []
    X = feature_matrix(corpus.pairs, seed_st, seed_ts, profiles)
    return [float(s) for s in model.predict(X)]


def classify_corpus(corpus: Corpus, model: ForestModel, threshold: float, seed_st, seed_ts,
                    profiles=None) -> tuple[Corpus, Corpus]:
    """Split ``corpus`` into (accepted, rejected) at ``threshold``; both carry the scores.

    Pairs scoring at least ``threshold`` are accepted, so threshold 0 keeps everything.
    """
    if not (0.0 <= threshold <= 1.0):
        raise ValueError("threshold must be in [0, 1]")
    accepted, rejected = [], []
    for pair, score in zip(corpus.pairs, score_corpus(corpus, model, seed_st, seed_ts, profiles)):
        scored = pair.with_score(min(1.0, max(0.0, score)))
        (accepted if score >= threshold else rejected).append(scored)
    return (corpus.with_pairs(accepted, CorpusKind.C_FILTERED),
            corpus.with_pairs(rejected, CorpusKind.REJECTED))
