"""Heuristic cleaning rules: duplicates, short sentences, high source/target overlap."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from ..core import Corpus, atomic_output, format_pair

MIN_TOKENS = 4
MAX_OVERLAP = 0.5


class Reason(str, enum.Enum):
    DUPLICATE = "duplicate"
    SHORT = "short"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class RuleReport:
    kept: int
    removed_duplicate: int
    removed_short: int
    removed_overlap: int

    @property
    def total(self) -> int:
        return self.kept + self.removed_duplicate + self.removed_short + self.removed_overlap

    @property
    def removed(self) -> int:
        return self.total - self.kept

    def as_dict(self) -> dict:
        return {"kept": self.kept, "removed_duplicate": self.removed_duplicate,
                "removed_short": self.removed_short, "removed_overlap": self.removed_overlap}


def overlap_ratio(src, tgt) -> float:
    """Shared unique tokens over the smaller unique-token set."""
    a, b = set(src.tokens), set(tgt.tokens)
    if not a or not b:
        raise ValueError("overlap_ratio needs non-empty token lists on both sides")
    return len(a & b) / min(len(a), len(b))


def heuristic_filter(corpus: Corpus, min_tokens: int = MIN_TOKENS, max_overlap: float = MAX_OVERLAP):
    """Apply the three rules in order; returns (kept corpus, [(pair, reason)], RuleReport).

    Duplicates are whitespace-normalized (src, tgt) matches; the first occurrence
    survives the duplicate rule. A pair is short when either side has fewer than
    ``min_tokens`` tokens. The overlap rule is strict: exactly 0.5 is kept.
    """
    seen = set()
    kept, removed = [], []
    for pair in corpus.pairs:
        key = pair.key()
        if key in seen:
            removed.append((pair, Reason.DUPLICATE))
            continue
        seen.add(key)
        if len(pair.src.tokens) < min_tokens or len(pair.tgt.tokens) < min_tokens:
            removed.append((pair, Reason.SHORT))
        elif overlap_ratio(pair.src, pair.tgt) > max_overlap:
            removed.append((pair, Reason.OVERLAP))
        else:
            kept.append(pair)
    counts = {r: 0 for r in Reason}
    for _, reason in removed:
        counts[reason] += 1
    report = RuleReport(len(kept), counts[Reason.DUPLICATE], counts[Reason.SHORT], counts[Reason.OVERLAP])
    return corpus.with_pairs(kept), removed, report


def write_removed(removed, path) -> None:
    """JSON Lines of ``{"reason": ..., "pair": <TSV line>}``."""
    with atomic_output(path) as fh:
        for pair, reason in removed:
            fh.write(json.dumps({"reason": reason.value, "pair": format_pair(pair)},
                                ensure_ascii=False) + "\n")
