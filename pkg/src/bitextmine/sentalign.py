"""Sentence alignment by dynamic programming over bead patterns.

Beads pair a contiguous group of source sentences with a contiguous group of
target sentences. A bead's score mixes dictionary coverage with a length ratio;
deletion and insertion beads cost a fixed gap penalty.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .core import LanguagePair, Origin, Provenance, Sentence, SentencePair
from .dictionary import SeedDictionary


class Bead(enum.Enum):
    # value: (source sentences, target sentences)
    ONE_ONE = (1, 1)
    TWO_ONE = (2, 1)
    ONE_TWO = (1, 2)
    TWO_TWO = (2, 2)
    ONE_ZERO = (1, 0)
    ZERO_ONE = (0, 1)

    @property
    def label(self) -> str:
        return f"{self.value[0]}-{self.value[1]}"

    @property
    def is_gap(self) -> bool:
        return 0 in self.value


# declaration order is the tie-break preference
BEAD_PRIORITY = tuple(Bead)


@dataclass(frozen=True)
class AlignParams:
    dict_weight: float = 0.7
    length_weight: float = 0.3
    gap_penalty: float = -0.15
    accept_threshold: float = 0.3

    def __post_init__(self):
        if self.gap_penalty > 0:
            raise ValueError("gap_penalty must be <= 0")
        if self.dict_weight < 0 or self.length_weight < 0:
            raise ValueError("weights must be non-negative")
        if self.dict_weight + self.length_weight <= 0:
            raise ValueError("dict_weight + length_weight must be positive")


@dataclass(frozen=True)
class BeadSpan:
    bead: Bead
    src: range
    tgt: range
    score: float


@dataclass(frozen=True)
class AlignmentPath:
    beads: tuple
    total_score: float

    def labels(self) -> list:
        return [b.bead.label for b in self.beads]


def _tokens(x):
    return x.tokens if isinstance(x, Sentence) else tuple(x)


def dict_coverage(src, tgt, seed: SeedDictionary) -> float:
    """Share of tokens linked by greedy one-to-one dictionary matching.

    Each source token, in order, links to the first still-unlinked target token
    that the seed dictionary lists as one of its translations.
    """
    src_toks, tgt_toks = _tokens(src), _tokens(tgt)
    n = len(src_toks) + len(tgt_toks)
    if n == 0:
        return 0.0
    # occurrences of one target token are always consumed left to right, so a
    # per-token cursor finds the first unlinked position
    positions = {}
    for j, t in enumerate(tgt_toks):
        positions.setdefault(t, []).append(j)
    cursor = dict.fromkeys(positions, 0)
    links = 0
    for s in src_toks:
        first, pick = None, None
        for t in seed.translations(s):
            k = cursor.get(t)
            if k is not None and k < len(positions[t]) and (first is None or positions[t][k] < first):
                first, pick = positions[t][k], t
        if pick is not None:
            cursor[pick] += 1
            links += 1
    return 2.0 * links / n


def length_score(src_len: int, tgt_len: int) -> float:
    if src_len + tgt_len <= 0:
        raise ValueError("at least one side must be non-empty")
    return min(src_len, tgt_len) / max(src_len, tgt_len)


def bead_score(src_group, tgt_group, seed: SeedDictionary, params: AlignParams) -> float:
    if not src_group or not tgt_group:
        return params.gap_penalty
    src_toks = tuple(t for s in src_group for t in _tokens(s))
    tgt_toks = tuple(t for s in tgt_group for t in _tokens(s))
    cov = dict_coverage(src_toks, tgt_toks, seed)
    if len(src_toks) + len(tgt_toks) == 0:
        length = 0.0
    else:
        length = length_score(len(src_toks), len(tgt_toks))
    return params.dict_weight * cov + params.length_weight * length


def bead_table(src: list, tgt: list, seed: SeedDictionary, params: AlignParams) -> dict:
    """Scores of every bead that fits inside the two sentence lists, keyed by (bead, i, j)."""
    table = {}
    n, m = len(src), len(tgt)
    for bead in BEAD_PRIORITY:
        di, dj = bead.value
        for i in range(n - di + 1):
            for j in range(m - dj + 1):
                table[bead, i, j] = bead_score(src[i:i + di], tgt[j:j + dj], seed, params)
    return table


def best_path(n: int, m: int, scores: dict) -> AlignmentPath:
    """Maximum-score tiling of [0, n) x [0, m).

    ``scores[bead, i, j]`` is the score of ``bead`` starting at source i, target j.
    Equal totals at a cell prefer the bead listed first in BEAD_PRIORITY.
    """
    neg = float("-inf")
    best = [[neg] * (m + 1) for _ in range(n + 1)]
    back = [[None] * (m + 1) for _ in range(n + 1)]
    best[0][0] = 0.0
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            top, arg = neg, None
            for bead in BEAD_PRIORITY:
                di, dj = bead.value
                pi, pj = i - di, j - dj
                if pi < 0 or pj < 0 or best[pi][pj] == neg:
                    continue
                cand = best[pi][pj] + scores[bead, pi, pj]
                if cand > top:
                    top, arg = cand, bead
            best[i][j], back[i][j] = top, arg
    beads = []
    i, j = n, m
    while i or j:
        bead = back[i][j]
        di, dj = bead.value
        beads.append(BeadSpan(bead, range(i - di, i), range(j - dj, j), scores[bead, i - di, j - dj]))
        i, j = i - di, j - dj
    beads.reverse()
    return AlignmentPath(tuple(beads), best[n][m])


def align_sentences(src: list, tgt: list, seed: SeedDictionary, params: Optional[AlignParams] = None,
                    languages: Optional[LanguagePair] = None, origin: Optional[Origin] = None):
    """Align two sentence lists; returns the path and the accepted sentence pairs.

    Non-gap beads scoring at least ``accept_threshold`` are emitted, with
    multi-sentence groups joined by a single space.
    """
    params = params or AlignParams()
    if not src or not tgt:
        raise ValueError("both documents need at least one sentence")
    path = best_path(len(src), len(tgt), bead_table(src, tgt, seed, params))
    src_lang = languages.src if languages else src[0].lang
    tgt_lang = languages.tgt if languages else tgt[0].lang
    pairs = []
    for span in path.beads:
        if span.bead.is_gap or span.score < params.accept_threshold:
            continue
        s_text = " ".join(src[k].text for k in span.src)
        t_text = " ".join(tgt[k].text for k in span.tgt)
        pairs.append(SentencePair(Sentence(s_text, src_lang), Sentence(t_text, tgt_lang),
                                  min(1.0, max(0.0, span.score)), Provenance.CRAWLED, origin))
    return path, pairs


def align_document_pair(doc_pair, seed: SeedDictionary, params: Optional[AlignParams] = None,
                        languages: Optional[LanguagePair] = None):
    src_doc, tgt_doc = doc_pair.src_doc, doc_pair.tgt_doc
    origin = Origin(src_doc.domain, src_doc.url, tgt_doc.url)
    return align_sentences(list(src_doc.sentences), list(tgt_doc.sentences), seed, params,
                           languages, origin)
