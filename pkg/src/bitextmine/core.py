"""Shared value types, tokenization and the TSV bitext format."""

from __future__ import annotations

import enum
import json
import os
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

UNKNOWN_LANG = "und"

_LANG_RE = re.compile(r"^[a-z]{2,3}$")

# numerals with internal separators first, then word runs, then single symbols
_TOKEN_RE = re.compile(r"\d+(?:[.,]\d+)+|\w+|[^\w\s]")
_NUMERAL_RE = re.compile(r"^\d+(?:[.,]\d+)*$")
_WS_RE = re.compile(r"\s+")


class CorpusFormatError(ValueError):
    """Raised for a malformed line in a bitext TSV file."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


def tokenize(text: str, lang: str = UNKNOWN_LANG) -> list[str]:
    """Lowercased tokens: numerals, word runs, and one token per punctuation mark.

    >>> tokenize("Hello, world!")
    ['hello', ',', 'world', '!']
    """
    return _TOKEN_RE.findall(text.lower())


def is_numeral(token: str) -> bool:
    return bool(_NUMERAL_RE.match(token))


def normalize_ws(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def check_lang(code: str) -> str:
    if not isinstance(code, str) or not _LANG_RE.match(code):
        raise ValueError(f"invalid language code {code!r}")
    return code


@dataclass(frozen=True)
class LanguagePair:
    src: str
    tgt: str

    def __post_init__(self):
        check_lang(self.src)
        check_lang(self.tgt)
        if self.src == self.tgt:
            raise ValueError("source and target language must differ")

    def reversed(self) -> "LanguagePair":
        return LanguagePair(self.tgt, self.src)

    def __str__(self):
        return f"{self.src}-{self.tgt}"


@dataclass(frozen=True)
class Sentence:
    text: str
    lang: str
    tokens: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if "\n" in self.text or "\r" in self.text:
            raise ValueError("sentence text may not contain newlines")
        check_lang(self.lang)
        object.__setattr__(self, "tokens", tuple(tokenize(self.text, self.lang)))

    def __len__(self):
        return len(self.tokens)


class Provenance(str, enum.Enum):
    PSEUDO = "pseudo"
    CRAWLED = "crawled"
    SYNTHETIC = "synthetic"


class CorpusKind(str, enum.Enum):
    A_PSEUDO = "A_pseudo"
    B_RAW = "B_raw"
    C_FILTERED = "C_filtered"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Origin:
    domain: str
    src_url: str
    tgt_url: str


@dataclass(frozen=True)
class SentencePair:
    src: Sentence
    tgt: Sentence
    score: Optional[float] = None
    provenance: Provenance = Provenance.CRAWLED
    origin: Optional[Origin] = None

    def __post_init__(self):
        if self.score is not None and not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score {self.score} outside [0, 1]")
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    def with_score(self, score: float) -> "SentencePair":
        return SentencePair(self.src, self.tgt, score, self.provenance, self.origin)

    def key(self) -> tuple[str, str]:
        """Whitespace-normalized (src, tgt) text, the identity used for deduplication."""
        return normalize_ws(self.src.text), normalize_ws(self.tgt.text)


@dataclass(frozen=True)
class Corpus:
    pairs: tuple
    kind: CorpusKind
    languages: LanguagePair

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "kind", CorpusKind(self.kind))
        for p in self.pairs:
            if p.src.lang != self.languages.src or p.tgt.lang != self.languages.tgt:
                raise ValueError(
                    f"pair languages {p.src.lang}-{p.tgt.lang} do not match corpus {self.languages}")
        if self.kind is CorpusKind.C_FILTERED and any(p.score is None for p in self.pairs):
            raise ValueError("every pair of a filtered corpus needs a score")

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def with_pairs(self, pairs, kind=None) -> "Corpus":
        return Corpus(tuple(pairs), kind or self.kind, self.languages)


def make_pair(src_text: str, tgt_text: str, languages: LanguagePair, score=None,
              provenance=Provenance.CRAWLED, origin=None) -> SentencePair:
    return SentencePair(Sentence(src_text, languages.src), Sentence(tgt_text, languages.tgt),
                        score, provenance, origin)


def make_corpus(texts: Sequence[tuple[str, str]], languages: LanguagePair,
                kind=CorpusKind.A_PSEUDO, provenance=Provenance.PSEUDO) -> Corpus:
    return Corpus(tuple(make_pair(s, t, languages, provenance=provenance) for s, t in texts),
                  kind, languages)


# --- TSV bitext format -------------------------------------------------------

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape_field(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def unescape_field(text: str) -> str:
    if "\\" not in text:
        return text
    out = []
    it = iter(text)
    for c in it:
        if c == "\\":
            nxt = next(it, "")
            out.append(_UNESCAPES.get(nxt, "\\" + nxt))
        else:
            out.append(c)
    return "".join(out)


def format_score(score: Optional[float]) -> str:
    return "-" if score is None else f"{score:.6f}"


def format_pair(pair: SentencePair) -> str:
    origin = "-"
    if pair.origin is not None:
        origin = json.dumps({"domain": pair.origin.domain, "src_url": pair.origin.src_url,
                             "tgt_url": pair.origin.tgt_url}, ensure_ascii=False, sort_keys=True)
    return "\t".join([escape_field(pair.src.text), escape_field(pair.tgt.text),
                      format_score(pair.score), pair.provenance.value, origin])


def parse_pair(line: str, languages: LanguagePair, path="<string>", lineno=0) -> SentencePair:
    cols = line.split("\t")
    if len(cols) != 5:
        raise CorpusFormatError(path, lineno, f"expected 5 tab-separated columns, got {len(cols)}")
    src, tgt, score, prov, origin = cols
    try:
        score_val = None if score == "-" else float(score)
        origin_val = None
        if origin != "-":
            o = json.loads(origin)
            origin_val = Origin(o["domain"], o["src_url"], o["tgt_url"])
        return make_pair(unescape_field(src), unescape_field(tgt), languages, score_val,
                         Provenance(prov), origin_val)
    except (ValueError, KeyError, TypeError) as exc:
        raise CorpusFormatError(path, lineno, str(exc)) from exc


def read_corpus(path, kind: CorpusKind, languages: LanguagePair) -> Corpus:
    """Read a bitext TSV file; token fields are recomputed from the text."""
    pairs = []
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            pairs.append(parse_pair(line, languages, path, lineno))
    return Corpus(tuple(pairs), kind, languages)


@contextmanager
def atomic_output(path) -> Iterator:
    """Write through ``path + '.partial'`` and rename on success.

    A failure leaves the ``.partial`` file behind as a marker of the incomplete output.
    """
    path = os.fspath(path)
    tmp = path + ".partial"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        yield fh
    os.replace(tmp, path)


def write_corpus(corpus: Corpus, path) -> None:
    with atomic_output(path) as fh:
        for pair in corpus.pairs:
            fh.write(format_pair(pair))
            fh.write("\n")
