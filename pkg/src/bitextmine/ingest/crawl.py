"""A small breadth-first, robots-aware, single-domain crawler."""

from __future__ import annotations

import logging
import time
import urllib.error
import urllib.request
from collections import deque
from typing import Callable, NamedTuple, Optional
from urllib.parse import urlsplit
from urllib.robotparser import RobotFileParser

from .documents import FetchStatus, failed_document, make_document, normalize_url
from .html import parse_html

log = logging.getLogger(__name__)

USER_AGENT = "bitextmine/0.1"


class CrawlError(RuntimeError):
    pass


class FetchResult(NamedTuple):
    status: int
    content_type: str
    body: bytes


def urllib_fetcher(url: str, timeout: float = 20.0) -> FetchResult:
    req = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return FetchResult(resp.status, resp.headers.get("Content-Type", ""), resp.read())
    except urllib.error.HTTPError as exc:
        return FetchResult(exc.code, exc.headers.get("Content-Type", "") if exc.headers else "", b"")


def _is_html(content_type: str) -> bool:
    ct = (content_type or "").split(";")[0].strip().lower()
    return ct in ("", "text/html", "application/xhtml+xml")


def _netloc(url: str) -> str:
    return urlsplit(url).netloc


def _same_site(host: str, domain: str) -> bool:
    return host == domain or host == "www." + domain or "www." + host == domain


class _PoliteFetcher:
    def __init__(self, fetcher, delay_ms, clock, sleep):
        self.fetcher = fetcher
        self.delay = delay_ms / 1000.0
        self.clock = clock
        self.sleep = sleep
        self.last = None
        self.request_times = []

    def __call__(self, url):
        if self.last is not None:
            wait = self.delay - (self.clock() - self.last)
            if wait > 0:
                self.sleep(wait)
        self.last = self.clock()
        self.request_times.append(self.last)
        return self.fetcher(url)


def _load_robots(fetch, root: str) -> RobotFileParser:
    robots = RobotFileParser()
    try:
        res = fetch(root + "robots.txt")
    except OSError:
        res = None
    if res is not None and res.status == 200:
        robots.parse(res.body.decode("utf-8", errors="replace").splitlines())
    else:
        robots.parse([])
    return robots


def fetch_domain(domain: str, max_pages: int = 100, max_depth: int = 5, delay_ms: int = 1000,
                 fetcher: Optional[Callable[[str], FetchResult]] = None,
                 clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep,
                 profiles=None, abbreviations=None, scheme: str = "http",
                 stats: Optional[dict] = None) -> list:
    """Crawl ``domain`` breadth-first from its root page.

    Links found on a page are queued in lexicographic order after everything
    discovered earlier. Connection failures mark the page as failed instead of
    aborting. Raises CrawlError when not a single page could be fetched.
    """
    if max_pages < 1 or max_depth < 0 or delay_ms < 0:
        raise ValueError("crawl limits must be positive")
    domain = domain.strip().lower()
    fetch = _PoliteFetcher(fetcher or urllib_fetcher, delay_ms, clock, sleep)
    root = f"{scheme}://{domain}/"
    robots = _load_robots(fetch, root)

    docs = []
    queue = deque([(normalize_url(root), 0)])
    seen = {queue[0][0]}
    while queue and len(docs) < max_pages:
        url, depth = queue.popleft()
        if not robots.can_fetch(USER_AGENT, url):
            log.debug("robots.txt disallows %s", url)
            continue
        try:
            res = fetch(url)
        except OSError as exc:
            log.warning("fetch failed for %s: %s", url, exc)
            docs.append(failed_document(url))
            continue
        if res.status >= 400:
            docs.append(failed_document(url))
            continue
        if not _is_html(res.content_type):
            continue
        docs.append(make_document(url, res.body, FetchStatus.FETCHED, profiles, abbreviations))
        if depth >= max_depth:
            continue
        _, _, links = parse_html(res.body, base_url=url)
        fresh = set()
        for link in links:
            if not link.lower().startswith(("http://", "https://")):
                continue
            link = normalize_url(link)
            if _same_site(_netloc(link), domain) and link not in seen:
                fresh.add(link)
        for link in sorted(fresh):
            seen.add(link)
            queue.append((link, depth + 1))

    if stats is not None:
        stats["request_times"] = list(fetch.request_times)
    if not any(d.fetch_status is FetchStatus.FETCHED for d in docs):
        raise CrawlError(f"nothing fetched from {domain}")
    return docs
