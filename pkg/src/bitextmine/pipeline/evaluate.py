from __future__ import annotations

from typing import NamedTuple

from ..core import normalize_ws


class Scores(NamedTuple):
    precision: float
    recall: float
    f1: float
    correct: int


def _keys(pairs):
    out = []
    for p in pairs:
        if isinstance(p, tuple):
            out.append((normalize_ws(p[0]), normalize_ws(p[1])))
        else:
            out.append(p.key())
    return out


def evaluate_against_truth(mined, truth) -> Scores:
    """Exact-match precision and recall of mined pairs against the true pairs.

    Both arguments may be corpora or sequences of (src, tgt) strings. An empty
    mined set scores precision 0 by convention.
    """
    truth_keys = set(_keys(truth))
    if not truth_keys:
        raise ValueError("ground truth is empty")
    mined_keys = _keys(mined)
    correct = sum(1 for k in mined_keys if k in truth_keys)
    found = len(truth_keys & set(mined_keys))
    precision = correct / len(mined_keys) if mined_keys else 0.0
    recall = found / len(truth_keys)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Scores(precision, recall, f1, correct)
