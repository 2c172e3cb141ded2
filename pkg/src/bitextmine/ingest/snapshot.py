"""Offline snapshots: a TSV manifest mapping URLs to local HTML files."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .crawl import FetchResult
from .documents import FetchStatus, make_document, normalize_url


class SnapshotError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    url: str
    path: str
    content_type: Optional[str] = None


@dataclass(frozen=True)
class SnapshotManifest:
    root: str
    entries: tuple

    def resolve(self, entry: ManifestEntry) -> str:
        return os.path.join(self.root, entry.path)


def read_manifest(manifest_path) -> SnapshotManifest:
    """Parse ``url <TAB> relative_path [<TAB> content_type]`` lines."""
    if os.path.isdir(manifest_path):
        manifest_path = os.path.join(manifest_path, "manifest.tsv")
    root = os.path.dirname(os.path.abspath(manifest_path))
    entries = []
    seen = set()
    with open(manifest_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) not in (2, 3):
                raise SnapshotError(f"{manifest_path}:{lineno}: expected url, path[, content_type]")
            url = normalize_url(cols[0])
            if url in seen:
                raise SnapshotError(f"{manifest_path}:{lineno}: duplicate URL {url}")
            seen.add(url)
            entries.append(ManifestEntry(url, cols[1], cols[2] if len(cols) == 3 else None))
    return SnapshotManifest(root, tuple(entries))


def write_manifest(entries, manifest_path) -> None:
    with open(manifest_path, "w", encoding="utf-8") as fh:
        for e in entries:
            cols = [e.url, e.path] + ([e.content_type] if e.content_type else [])
            fh.write("\t".join(cols) + "\n")


def load_snapshot(manifest_path, profiles=None, abbreviations=None) -> list:
    """One document per manifest entry, in manifest order."""
    manifest = read_manifest(manifest_path)
    missing = [e for e in manifest.entries if not os.path.isfile(manifest.resolve(e))]
    if missing:
        raise SnapshotError(f"snapshot file missing for {missing[0].url}: {missing[0].path}")
    docs = []
    for e in manifest.entries:
        with open(manifest.resolve(e), "rb") as fh:
            raw = fh.read()
        docs.append(make_document(e.url, raw, FetchStatus.FROM_SNAPSHOT, profiles, abbreviations))
    return docs


class SnapshotFetcher:
    """Serve a snapshot as if it were a live site (for crawling tests and offline runs)."""

    def __init__(self, manifest: SnapshotManifest, robots: Optional[dict] = None):
        self.manifest = manifest
        self._by_url = {e.url: e for e in manifest.entries}
        self.robots = robots or {}
        self.requests = []

    def __call__(self, url: str) -> FetchResult:
        url = normalize_url(url)
        self.requests.append(url)
        if url.endswith("/robots.txt"):
            host = url.split("/")[2]
            if host in self.robots:
                return FetchResult(200, "text/plain", self.robots[host].encode("utf-8"))
        entry = self._by_url.get(url)
        if entry is None:
            return FetchResult(404, "text/plain", b"")
        with open(self.manifest.resolve(entry), "rb") as fh:
            return FetchResult(200, entry.content_type or "text/html", fh.read())
