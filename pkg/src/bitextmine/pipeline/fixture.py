"""Synthetic bilingual websites with known ground truth.

The source "language" is random syllable words; the target language is a
bijective word cipher of it written with a disjoint consonant inventory, so
trigram language ID can tell the two apart. Every site has twin pages under
``/<src>/`` and ``/<tgt>/``.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from html import escape

import numpy as np

from ..core import CorpusKind, LanguagePair, Provenance, make_pair, write_corpus, Corpus
from ..dictionary import SeedDictionary, write_seed
from ..ingest.snapshot import ManifestEntry, write_manifest

SRC_CONSONANTS = "bdgkptfs"
TGT_CONSONANTS = "lmnrvwzh"
VOWELS = "aeiou"


@dataclass(frozen=True)
class SyntheticFixtureSpec:
    vocab_size: int = 400
    sentences_per_page: int = 8
    pages_per_site: int = 10
    n_sites: int = 1
    unpaired_fraction: float = 0.0
    inserted_fraction: float = 0.0
    near_duplicate_fraction: float = 0.0
    pseudo_noise: float = 0.0
    min_words: int = 5
    max_words: int = 12
    zipf_offset: float = 10.0
    seed: int = 0
    src_lang: str = "xx"
    tgt_lang: str = "yy"

    def __post_init__(self):
        for name in ("unpaired_fraction", "inserted_fraction", "near_duplicate_fraction", "pseudo_noise"):
            if not (0.0 <= getattr(self, name) <= 1.0):
                raise ValueError(f"{name} must be in [0, 1]")
        if self.min_words < 1 or self.max_words < self.min_words:
            raise ValueError("bad sentence length range")
        if min(self.vocab_size, self.sentences_per_page, self.pages_per_site, self.n_sites) < 1:
            raise ValueError("sizes must be positive")

    @property
    def languages(self) -> LanguagePair:
        return LanguagePair(self.src_lang, self.tgt_lang)


# the acceptance-scale configuration
STANDARD_SPEC = SyntheticFixtureSpec(
    sentences_per_page=8, pages_per_site=10, n_sites=40, unpaired_fraction=0.10,
    inserted_fraction=0.10, pseudo_noise=0.15, seed=42)


@dataclass
class Fixture:
    root: str
    manifest: str
    truth_path: str
    cipher_path: str
    pseudo_path: str
    domains_path: str
    truth: list
    cipher: SeedDictionary
    stats: dict = field(default_factory=dict)


def _make_words(rng, n, consonants, taken=frozenset()):
    words, seen = [], set(taken)
    while len(words) < n:
        syllables = int(rng.integers(1, 4))
        w = "".join(consonants[rng.integers(len(consonants))] + VOWELS[rng.integers(len(VOWELS))]
                    for _ in range(syllables))
        if rng.random() < 0.3:
            w += consonants[rng.integers(len(consonants))]
        if len(w) >= 2 and w not in seen:
            seen.add(w)
            words.append(w)
    return words


class CipherLanguage:
    """Random source vocabulary, its cipher image and a Zipf-like word sampler."""

    def __init__(self, vocab_size, rng, zipf_offset=10.0):
        self.src_words = _make_words(rng, vocab_size, SRC_CONSONANTS)
        tgt_words = _make_words(rng, vocab_size, TGT_CONSONANTS)
        rng.shuffle(tgt_words)
        self.cipher = dict(zip(self.src_words, tgt_words))
        weights = 1.0 / (np.arange(vocab_size) + zipf_offset)
        self.probs = weights / weights.sum()
        self.tgt_words = tgt_words

    def words(self, rng, n):
        idx = rng.choice(len(self.src_words), size=n, p=self.probs)
        return [self.src_words[i] for i in idx]

    def translate(self, words):
        return [self.cipher[w] for w in words]


def render(words, terminal="."):
    text = " ".join(words)
    return text[:1].upper() + text[1:] + terminal


def sentence_pair(lang: CipherLanguage, rng, min_words, max_words):
    words = lang.words(rng, int(rng.integers(min_words, max_words + 1)))
    return render(words), render(lang.translate(words))


def cipher_corpus(n_pairs: int, vocab_size: int = 200, seed: int = 0, min_words=5, max_words=12,
                  zipf_offset=10.0, languages=LanguagePair("xx", "yy")):
    """A corpus of ``n_pairs`` cipher-parallel sentences plus the cipher itself."""
    rng = np.random.default_rng(seed)
    lang = CipherLanguage(vocab_size, rng, zipf_offset)
    texts = [sentence_pair(lang, rng, min_words, max_words) for _ in range(n_pairs)]
    corpus = Corpus(tuple(make_pair(s, t, languages, provenance=Provenance.SYNTHETIC) for s, t in texts),
                    CorpusKind.A_PSEUDO, languages)
    return corpus, lang.cipher


def _page_html(lang_code, title, nav, paragraphs, host, year):
    nav_html = "".join(f'<li><a href="{escape(href)}">{escape(text)}</a></li>' for href, text in nav)
    body = "".join("<p>" + escape(" ".join(p)) + "</p>" for p in paragraphs)
    return (
        f'<!DOCTYPE html>\n<html lang="{lang_code}"><head><meta charset="utf-8">'
        f"<title>{escape(title)}</title><style>body {{ font-family: sans-serif; }}</style></head>\n"
        f'<body><div class="nav"><ul>{nav_html}</ul></div>\n'
        f'<div class="content"><h1>{escape(title)}</h1>\n{body}</div>\n'
        f'<div class="footer"><p>&copy; {year}</p></div>'
        f"<script>var site = \"{host}\";</script></body></html>\n"
    )


def _paragraphs(sentences, rng):
    out, i = [], 0
    while i < len(sentences):
        k = int(rng.integers(1, 4))
        out.append(sentences[i:i + k])
        i += k
    return out


def gen_fixture(spec: SyntheticFixtureSpec, out_dir) -> Fixture:
    """Write a snapshot of ``spec.n_sites`` bilingual sites plus ground truth under ``out_dir``.

    Files: ``snapshot/manifest.tsv`` and pages, ``truth.tsv``, ``cipher.tsv``,
    ``pseudo.tsv`` (the noisy pseudo-parallel corpus), ``domains.txt`` and
    ``fixture.json``.
    """
    rng = np.random.default_rng(spec.seed)
    langs = spec.languages
    lang = CipherLanguage(spec.vocab_size, rng, spec.zipf_offset)
    snap_dir = os.path.join(out_dir, "snapshot")
    os.makedirs(snap_dir, exist_ok=True)

    def new_pair():
        return sentence_pair(lang, rng, spec.min_words, spec.max_words)

    def title_pair():
        words = lang.words(rng, int(rng.integers(2, 4)))
        return render(words, ""), render(lang.translate(words), "")

    entries, truth, seen_truth, hosts = [], [], set(), []
    stats = {"pages": 0, "unpaired_slots": 0, "inserted_sentences": 0, "near_duplicate_slots": 0}
    for site in range(spec.n_sites):
        host = f"site{site:02d}.example"
        hosts.append(host)
        year = 2000 + int(rng.integers(0, 25))
        slots = []
        prev_pairs = None
        for k in range(spec.pages_per_site):
            title = title_pair()
            if rng.random() < spec.unpaired_fraction:
                tag = int(rng.integers(1000, 10000))
                src_s = [new_pair()[0] for _ in range(spec.sentences_per_page)]
                tgt_s = [new_pair()[1] for _ in range(spec.sentences_per_page)]
                other = title_pair()
                slots.append({"src_slug": f"note-{k}-{tag}.html", "tgt_slug": f"info-{k}-{tag + 1}.html",
                              "src_title": title[0], "tgt_title": other[1], "src": src_s, "tgt": tgt_s})
                stats["unpaired_slots"] += 1
                prev_pairs = None
                continue
            if prev_pairs is not None and rng.random() < spec.near_duplicate_fraction:
                pairs = list(prev_pairs)
                pairs[int(rng.integers(len(pairs)))] = new_pair()
                stats["near_duplicate_slots"] += 1
            else:
                pairs = [new_pair() for _ in range(spec.sentences_per_page)]
            prev_pairs = pairs
            src_s, tgt_s = [], []
            for s, t in pairs:
                src_s.append(s)
                tgt_s.append(t)
                if (s, t) not in seen_truth:
                    seen_truth.add((s, t))
                    truth.append((s, t))
                if rng.random() < spec.inserted_fraction:
                    extra = new_pair()
                    if rng.random() < 0.5:
                        src_s.append(extra[0])
                    else:
                        tgt_s.append(extra[1])
                    stats["inserted_sentences"] += 1
            slots.append({"src_slug": f"page-{k}.html", "tgt_slug": f"page-{k}.html",
                          "src_title": title[0], "tgt_title": title[1], "src": src_s, "tgt": tgt_s})

        for side, code in (("src", langs.src), ("tgt", langs.tgt)):
            nav = [(f"/{code}/{sl[side + '_slug']}", sl[side + "_title"]) for sl in slots]
            for sl in slots:
                rel = os.path.join(host, code, sl[side + "_slug"])
                path = os.path.join(snap_dir, rel)
                os.makedirs(os.path.dirname(path), exist_ok=True)
                html = _page_html(code, sl[side + "_title"], nav, _paragraphs(sl[side], rng), host, year)
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(html)
                entries.append(ManifestEntry(f"http://{host}/{code}/{sl[side + '_slug']}", rel, "text/html"))
                stats["pages"] += 1

    manifest = os.path.join(snap_dir, "manifest.tsv")
    write_manifest(entries, manifest)

    truth_path = os.path.join(out_dir, "truth.tsv")
    write_corpus(Corpus(tuple(make_pair(s, t, langs, provenance=Provenance.SYNTHETIC) for s, t in truth),
                        CorpusKind.A_PSEUDO, langs), truth_path)

    cipher = SeedDictionary.from_pairs(lang.cipher.items())
    cipher_path = os.path.join(out_dir, "cipher.tsv")
    write_seed(cipher, cipher_path)

    # pseudo-parallel corpus: target side corrupted by random word substitutions
    pseudo = []
    for s, t in truth:
        words = t[:-1].lower().split()
        noisy = [lang.tgt_words[rng.integers(len(lang.tgt_words))] if rng.random() < spec.pseudo_noise else w
                 for w in words]
        pseudo.append(make_pair(s, render(noisy), langs, provenance=Provenance.PSEUDO))
    pseudo_path = os.path.join(out_dir, "pseudo.tsv")
    write_corpus(Corpus(tuple(pseudo), CorpusKind.A_PSEUDO, langs), pseudo_path)

    domains_path = os.path.join(out_dir, "domains.txt")
    with open(domains_path, "w", encoding="utf-8") as fh:
        fh.write("".join(h + "\n" for h in hosts))

    stats["truth_pairs"] = len(truth)
    with open(os.path.join(out_dir, "fixture.json"), "w", encoding="utf-8") as fh:
        json.dump({"spec": asdict(spec), "stats": stats}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return Fixture(out_dir, manifest, truth_path, cipher_path, pseudo_path, domains_path, truth, cipher, stats)
