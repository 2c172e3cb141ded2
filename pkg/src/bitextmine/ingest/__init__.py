"""Web document acquisition: crawling, snapshots, HTML text extraction, language ID, sentence splitting."""

from .crawl import CrawlError, FetchResult, fetch_domain, urllib_fetcher
from .documents import (FetchStatus, WebDocument, build_document, make_document, normalize_url,
                        read_documents, url_host, write_documents)
from .html import extract_text, parse_html
from .langid import LanguageProfiles, build_profile, detect_language
from .sentences import load_abbreviations, split_sentences, split_text
from .snapshot import (ManifestEntry, SnapshotError, SnapshotFetcher, SnapshotManifest,
                       load_snapshot, read_manifest, write_manifest)
