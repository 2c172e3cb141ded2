from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Optional
from urllib.parse import urlsplit, urlunsplit

from ..core import UNKNOWN_LANG, atomic_output
from .html import parse_html
from .langid import LanguageProfiles, detect_language
from .sentences import split_sentences


class FetchStatus(str, enum.Enum):
    FETCHED = "fetched"
    FROM_SNAPSHOT = "from_snapshot"
    FAILED = "failed"


def normalize_url(url: str) -> str:
    """Lowercase scheme and host, drop default ports and fragments."""
    parts = urlsplit(url.strip())
    scheme = (parts.scheme or "http").lower()
    host = (parts.hostname or "").lower()
    port = parts.port
    netloc = host if port is None or (scheme, port) in (("http", 80), ("https", 443)) else f"{host}:{port}"
    path = parts.path or "/"
    return urlunsplit((scheme, netloc, path, parts.query, ""))


def url_host(url: str) -> str:
    return (urlsplit(url).hostname or "").lower()


@dataclass(frozen=True)
class WebDocument:
    url: str
    raw_html: bytes
    text_blocks: tuple
    sentences: tuple
    lang: str
    tag_signature: tuple
    fetch_status: FetchStatus
    lang_confidence: float = 0.0

    @property
    def domain(self) -> str:
        return url_host(self.url)

    def tokens(self) -> list:
        return [t for s in self.sentences for t in s.tokens]


def build_document(url: str, text_blocks, tag_signature, status, lang: Optional[str] = None,
                   profiles: Optional[LanguageProfiles] = None, confidence: float = 0.0,
                   raw_html: bytes = b"", abbreviations=None) -> WebDocument:
    blocks = tuple(text_blocks)
    if lang is None:
        if profiles is not None:
            lang, confidence = detect_language(" ".join(blocks), profiles)
        else:
            lang = UNKNOWN_LANG
    sentences = tuple(s for b in blocks for s in split_sentences(b, lang, abbreviations))
    return WebDocument(url, raw_html, blocks, sentences, lang, tuple(tag_signature),
                       FetchStatus(status), confidence)


def make_document(url: str, raw_html: bytes, status=FetchStatus.FETCHED,
                  profiles: Optional[LanguageProfiles] = None, abbreviations=None) -> WebDocument:
    blocks, signature, _ = parse_html(raw_html)
    return build_document(normalize_url(url), blocks, signature, status, profiles=profiles,
                          raw_html=raw_html, abbreviations=abbreviations)


def failed_document(url: str) -> WebDocument:
    return WebDocument(normalize_url(url), b"", (), (), UNKNOWN_LANG, (), FetchStatus.FAILED)


def write_documents(docs, path) -> None:
    """JSON Lines; the raw HTML is not persisted, sentences are re-derived from the blocks."""
    with atomic_output(path) as fh:
        for d in docs:
            fh.write(json.dumps({
                "url": d.url, "domain": d.domain, "lang": d.lang,
                "lang_confidence": round(d.lang_confidence, 6),
                "fetch_status": d.fetch_status.value,
                "tag_signature": list(d.tag_signature), "text_blocks": list(d.text_blocks),
            }, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def read_documents(path, abbreviations=None) -> list:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            o = json.loads(line)
            docs.append(build_document(o["url"], o["text_blocks"], o["tag_signature"],
                                       o["fetch_status"], lang=o["lang"],
                                       confidence=o.get("lang_confidence", 0.0),
                                       abbreviations=abbreviations))
    return docs

