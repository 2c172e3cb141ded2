"""Pairing documents across the two languages of a website."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence
from urllib.parse import parse_qsl, urlsplit

import numpy as np

from .core import LanguagePair, atomic_output
from .dictionary import SeedDictionary

PLACEHOLDER = "{L}"
DEFAULT_WEIGHTS = (0.5, 0.25, 0.25)
DEFAULT_THRESHOLD = 0.5


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Edit distance between two sequences of hashables (unit costs)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    codes = {}
    xa = np.array([codes.setdefault(x, len(codes)) for x in a], dtype=np.int64)
    xb = np.array([codes.setdefault(x, len(codes)) for x in b], dtype=np.int64)
    cols = np.arange(len(xb) + 1, dtype=np.int64)
    prev = cols.copy()
    for i, ca in enumerate(xa, 1):
        sub = prev[:-1] + (xb != ca)
        row = np.empty_like(prev)
        row[0] = i
        row[1:] = np.minimum(prev[1:] + 1, sub)
        # left-to-right insertions: row[j] = min_k (row[k] + j - k)
        row = np.minimum.accumulate(row - cols) + cols
        prev = row
    return int(prev[-1])


def normalized_distance(a: Sequence, b: Sequence) -> float:
    longest = max(len(a), len(b))
    return levenshtein(a, b) / longest if longest else 0.0


# --- language tokens ------------------------------------------------------------

def _read_alias_text(text: str) -> dict:
    table = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        code = cols[0].strip().lower()
        names = {c.strip().lower() for c in cols[:3] if c.strip()}
        if len(cols) > 3:
            names |= {a.strip().lower() for a in cols[3].split(",") if a.strip()}
        table.setdefault(code, set()).update(names)
    return table


@lru_cache(maxsize=1)
def default_aliases() -> dict:
    text = resources.files("bitextmine").joinpath("data/language_aliases.tsv").read_text("utf-8")
    return {k: frozenset(v) for k, v in _read_alias_text(text).items()}


def load_aliases(path) -> dict:
    """Merge a user alias file (same TSV layout as the shipped one) over the defaults."""
    table = {k: set(v) for k, v in default_aliases().items()}
    with open(path, encoding="utf-8") as fh:
        for code, names in _read_alias_text(fh.read()).items():
            table.setdefault(code, set()).update(names)
    return {k: frozenset(v) for k, v in table.items()}


def language_tokens(pair: LanguagePair, aliases: Optional[dict] = None) -> frozenset:
    aliases = default_aliases() if aliases is None else aliases
    tokens = {pair.src, pair.tgt}
    tokens |= aliases.get(pair.src, frozenset()) | aliases.get(pair.tgt, frozenset())
    return frozenset(tokens)


def _normalize(url: str, tokens: frozenset):
    if "://" not in url:
        url = "http://" + url
    parts = urlsplit(url)
    found = False

    def norm(seg):
        nonlocal found
        if seg.lower() in tokens:
            found = True
            return PLACEHOLDER
        return seg

    host = ".".join(norm(label) for label in (parts.hostname or "").split("."))
    path = "/".join(norm(seg) for seg in parts.path.strip("/").split("/"))
    if parts.query:
        query = "&".join(f"{norm(k)}={norm(v)}" for k, v in parse_qsl(parts.query, keep_blank_values=True))
        path = f"{path}?{query}"
    return host, path, found


def url_match_score(url_a: str, url_b: str, pair: LanguagePair, aliases: Optional[dict] = None) -> float:
    """1 minus the normalized edit distance of the paths after masking language tokens.

    >>> url_match_score("xx.com/abc/en", "xx.com/abc/de", LanguagePair("en", "de"))
    1.0
    """
    tokens = language_tokens(pair, aliases)
    try:
        host_a, path_a, found_a = _normalize(url_a, tokens)
        host_b, path_b, found_b = _normalize(url_b, tokens)
    except ValueError:
        return 0.0
    if host_a != host_b:
        return 0.0
    if not (found_a or found_b) and url_a != url_b:
        return 0.0
    return 1.0 - normalized_distance(path_a, path_b)


def structure_score(sig_a: Sequence[str], sig_b: Sequence[str]) -> float:
    if not sig_a and not sig_b:
        return 1.0
    return 1.0 - normalized_distance(sig_a, sig_b)


def content_score(doc_a, doc_b, seed: SeedDictionary) -> float:
    """Bag overlap between doc_b and doc_a translated word-by-word through the top-1 seed entries."""
    tokens_a = doc_a.tokens()
    tokens_b = doc_b.tokens()
    if not tokens_a or not tokens_b:
        return 0.0
    translated = Counter(t for t in map(seed.top1, tokens_a) if t is not None)
    common = translated & Counter(tokens_b)
    return sum(common.values()) / max(len(tokens_a), len(tokens_b))


@dataclass(frozen=True)
class DocumentPair:
    src_doc: object
    tgt_doc: object
    url_score: float
    structure_score: float
    content_score: float
    total: float

    def as_dict(self) -> dict:
        return {"src_url": self.src_doc.url, "tgt_url": self.tgt_doc.url,
                "url_score": round(self.url_score, 6),
                "structure_score": round(self.structure_score, 6),
                "content_score": round(self.content_score, 6), "total": round(self.total, 6)}


def check_weights(weights) -> tuple:
    w = tuple(float(x) for x in weights)
    if len(w) != 3 or any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-9:
        raise ValueError(f"weights must be three non-negative numbers summing to 1, got {weights}")
    return w


def score_pair(doc_a, doc_b, seed, pair, weights=DEFAULT_WEIGHTS, aliases=None) -> DocumentPair:
    wu, ws, wc = weights
    u = url_match_score(doc_a.url, doc_b.url, pair, aliases)
    s = structure_score(doc_a.tag_signature, doc_b.tag_signature)
    c = content_score(doc_a, doc_b, seed)
    return DocumentPair(doc_a, doc_b, u, s, c, wu * u + ws * s + wc * c)


def greedy_match(candidates: list, threshold: float) -> list:
    """One-to-one selection in descending total; ties go to the smaller (src URL, tgt URL)."""
    order = sorted(candidates, key=lambda dp: (-dp.total, dp.src_doc.url, dp.tgt_doc.url))
    used_src, used_tgt, out = set(), set(), []
    for dp in order:
        if dp.total < threshold:
            break
        if dp.src_doc.url in used_src or dp.tgt_doc.url in used_tgt:
            continue
        used_src.add(dp.src_doc.url)
        used_tgt.add(dp.tgt_doc.url)
        out.append(dp)
    return out


def align_documents(docs_p: list, docs_q: list, seed: SeedDictionary, pair: LanguagePair,
                    weights=DEFAULT_WEIGHTS, threshold: float = DEFAULT_THRESHOLD,
                    aliases: Optional[dict] = None) -> list:
    """Score every cross pair and keep a greedy one-to-one matching above ``threshold``."""
    weights = check_weights(weights)
    if not (0.0 <= threshold <= 1.0):
        raise ValueError("threshold must be in [0, 1]")
    if not docs_p or not docs_q:
        return []
    candidates = [score_pair(a, b, seed, pair, weights, aliases) for a in docs_p for b in docs_q]
    return greedy_match(candidates, threshold)


def write_document_pairs(pairs, path) -> None:
    with atomic_output(path) as fh:
        for dp in pairs:
            fh.write(json.dumps(dp.as_dict(), sort_keys=True) + "\n")


def read_document_pairs(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
