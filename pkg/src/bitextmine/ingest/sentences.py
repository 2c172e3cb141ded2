"""Rule-based sentence boundary detection."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional

from ..core import Sentence, normalize_ws

OPENING_QUOTES = "\"'“‘«„¿¡("

# terminal punctuation, optional closing quotes/brackets, whitespace, then the next sentence start
_BOUNDARY_RE = re.compile(r"""[.!?]+["'”’»)\]]*(?=\s+(\S))""")


def load_abbreviations(path=None) -> frozenset:
    if path is None:
        text = resources.files("bitextmine").joinpath("data/abbreviations.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    items = (line.strip() for line in text.splitlines())
    return frozenset(item.lower() for item in items if item and not item.startswith("#"))


@lru_cache(maxsize=1)
def default_abbreviations() -> frozenset:
    return load_abbreviations()


def _starts_sentence(ch: str) -> bool:
    return ch.isupper() or ch in OPENING_QUOTES


def split_text(block: str, abbreviations: Optional[Iterable[str]] = None) -> list[str]:
    """Split a text block into sentence strings (whitespace-collapsed)."""
    abbrevs = default_abbreviations() if abbreviations is None else frozenset(
        a.lower() for a in abbreviations)
    out = []
    start = 0
    for m in _BOUNDARY_RE.finditer(block):
        if not _starts_sentence(m.group(1)):
            continue
        end = m.end()
        if block[m.start()] == "." and m.end() - m.start() == 1:
            words = block[start:end].split()
            if words and words[-1].lower() in abbrevs:
                continue
        piece = normalize_ws(block[start:end])
        if piece:
            out.append(piece)
        start = end
    tail = normalize_ws(block[start:])
    if tail:
        out.append(tail)
    return out


def split_sentences(block: str, lang: str, abbreviations: Optional[Iterable[str]] = None) -> list[Sentence]:
    """Sentences of ``block``.

    >>> [s.text for s in split_sentences("Hello. World.", "en")]
    ['Hello.', 'World.']
    """
    return [Sentence(text, lang) for text in split_text(block, abbreviations)]
