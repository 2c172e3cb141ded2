"""Negative sampling and the pair features the classifier consumes."""

from __future__ import annotations

import math
import string
import unicodedata
from typing import NamedTuple, Optional

import numpy as np

from ..core import Corpus, SentencePair, is_numeral
from ..ingest.langid import LanguageProfiles, detect_language
from ..sentalign import dict_coverage
from .rules import overlap_ratio

FEATURE_NAMES = (
    "src_len", "tgt_len", "len_ratio", "dict_cov_st", "dict_cov_ts", "overlap_ratio",
    "digit_jaccard", "punct_ratio_diff", "uppercase_ratio_diff", "mean_token_len_diff",
    "langid_conf_src", "langid_conf_tgt",
)
N_FEATURES = len(FEATURE_NAMES)


class FeatureVector(NamedTuple):
    src_len: float
    tgt_len: float
    len_ratio: float
    dict_cov_st: float
    dict_cov_ts: float
    overlap_ratio: float
    digit_jaccard: float
    punct_ratio_diff: float
    uppercase_ratio_diff: float
    mean_token_len_diff: float
    langid_conf_src: float
    langid_conf_tgt: float


def gen_negatives(corpus: Corpus, ratio: float = 1.0, seed: int = 0, max_tries: int = 1000) -> list:
    """Crossed pairs (source of pair i, target of pair j, i != j) that are not true pairs.

    Draws ``ceil(ratio * len(corpus))`` pairs uniformly from a seeded generator.
    """
    n = len(corpus)
    if n < 2:
        raise ValueError("need at least two pairs to cross")
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    want = math.ceil(ratio * n)
    pairs = corpus.pairs
    true_keys = {p.key() for p in pairs}
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(want):
        for _ in range(max_tries):
            i, j = (int(x) for x in rng.integers(0, n, size=2))
            if i == j:
                continue
            cand = SentencePair(pairs[i].src, pairs[j].tgt, None, pairs[i].provenance)
            if cand.key() not in true_keys:
                out.append(cand)
                break
        else:
            raise ValueError("could not draw a crossed pair distinct from every true pair")
    return out


def _punct_ratio(tokens) -> float:
    if not tokens:
        return 0.0
    return sum(1 for t in tokens if all(unicodedata.category(c).startswith("P") or c in string.punctuation
                                        for c in t)) / len(tokens)


def _upper_ratio(text: str) -> float:
    letters = [c for c in text if c.isalpha()]
    if not letters:
        return 0.0
    return sum(1 for c in letters if c.isupper()) / len(letters)


def _mean_len(tokens) -> float:
    return sum(len(t) for t in tokens) / len(tokens) if tokens else 0.0


def _lang_conf(text: str, lang: str, profiles: Optional[LanguageProfiles]) -> float:
    if profiles is None:
        return 0.0
    found, conf = detect_language(text, profiles)
    return conf if found == lang else 0.0


def extract_features(pair: SentencePair, seed_st, seed_ts, profiles: Optional[LanguageProfiles] = None) -> FeatureVector:
    """Feature vector of a sentence pair.

    The language-ID features hold the detector's confidence when it returns the
    expected language and 0 otherwise (including "unknown").
    """
    src, tgt = pair.src, pair.tgt
    if not src.tokens or not tgt.tokens:
        raise ValueError("cannot featurize a pair with an empty side")
    ls, lt = len(src.tokens), len(tgt.tokens)
    digits_s = {t for t in src.tokens if is_numeral(t)}
    digits_t = {t for t in tgt.tokens if is_numeral(t)}
    if digits_s or digits_t:
        digit_jaccard = len(digits_s & digits_t) / len(digits_s | digits_t)
    else:
        digit_jaccard = 1.0
    return FeatureVector(
        float(ls), float(lt), min(ls, lt) / max(ls, lt),
        dict_coverage(src, tgt, seed_st), dict_coverage(tgt, src, seed_ts),
        overlap_ratio(src, tgt), digit_jaccard,
        abs(_punct_ratio(src.tokens) - _punct_ratio(tgt.tokens)),
        abs(_upper_ratio(src.text) - _upper_ratio(tgt.text)),
        abs(_mean_len(src.tokens) - _mean_len(tgt.tokens)),
        _lang_conf(src.text, src.lang, profiles), _lang_conf(tgt.text, tgt.lang, profiles),
    )


def feature_matrix(pairs, seed_st, seed_ts, profiles=None) -> np.ndarray:
    rows = [extract_features(p, seed_st, seed_ts, profiles) for p in pairs]
    return np.array(rows, dtype=np.float64).reshape(len(rows), N_FEATURES)
