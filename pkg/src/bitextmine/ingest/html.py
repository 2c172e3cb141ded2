"""Tag-soup tolerant HTML text extraction."""

from __future__ import annotations

import re
from html.parser import HTMLParser
from urllib.parse import urljoin

from ..core import normalize_ws

# subtrees whose text and tags are dropped entirely
SKIP_TAGS = frozenset({"script", "style", "head", "noscript", "template"})

BLOCK_TAGS = frozenset({
    "address", "article", "aside", "blockquote", "body", "br", "caption", "dd", "div", "dl",
    "dt", "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hr", "html", "li", "main", "nav", "ol", "p", "pre", "section", "table",
    "tbody", "td", "tfoot", "th", "thead", "title", "tr", "ul",
})

VOID_TAGS = frozenset({
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param",
    "source", "track", "wbr",
})

_CHARSET_RE = re.compile(rb"""<meta[^>]+charset\s*=\s*["']?([A-Za-z0-9_\-]+)""", re.I)


def decode_html(raw: bytes) -> str:
    if isinstance(raw, str):
        return raw
    encoding = "utf-8"
    m = _CHARSET_RE.search(raw[:4096])
    if m:
        encoding = m.group(1).decode("ascii", "ignore")
    try:
        return raw.decode(encoding, errors="replace")
    except LookupError:
        return raw.decode("utf-8", errors="replace")


class _Extractor(HTMLParser):
    def __init__(self, base_url=None):
        super().__init__(convert_charrefs=True)
        self.base_url = base_url
        self.blocks = []
        self.signature = []
        self.links = []
        self._buf = []
        self._skip = []

    def _flush(self):
        text = normalize_ws("".join(self._buf))
        if text:
            self.blocks.append(text)
        self._buf = []

    def handle_starttag(self, tag, attrs):
        if tag == "body" and "head" in self._skip:
            # unterminated <head>
            self._skip = [t for t in self._skip if t != "head"]
        if self._skip:
            if tag in SKIP_TAGS and tag not in VOID_TAGS:
                self._skip.append(tag)
            return
        if tag in SKIP_TAGS:
            self._flush()
            self._skip.append(tag)
            return
        self.signature.append(tag)
        if tag in BLOCK_TAGS:
            self._flush()
        if tag == "a":
            href = dict(attrs).get("href")
            if href:
                self.links.append(urljoin(self.base_url, href) if self.base_url else href)

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag in SKIP_TAGS and self._skip and self._skip[-1] == tag:
            self._skip.pop()

    def handle_endtag(self, tag):
        if self._skip:
            if tag in self._skip:
                while self._skip and self._skip.pop() != tag:
                    pass
            return
        if tag in BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if not self._skip:
            self._buf.append(data)

    def close(self):
        super().close()
        self._flush()


def parse_html(html, base_url=None):
    """Return ``(text_blocks, tag_signature, links)`` for an HTML document."""
    parser = _Extractor(base_url)
    parser.feed(decode_html(html))
    parser.close()
    return parser.blocks, parser.signature, parser.links


def extract_text(html) -> tuple[list[str], list[str]]:
    """Boilerplate-free text blocks and the document-order tag signature.

    >>> extract_text(b"<html><body><p>Hello</p></body></html>")
    (['Hello'], ['html', 'body', 'p'])
    """
    blocks, signature, _ = parse_html(html)
    return blocks, signature
