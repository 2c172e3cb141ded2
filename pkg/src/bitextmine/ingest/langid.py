"""Character-trigram language identification."""

from __future__ import annotations

import json
import math
from collections import Counter
from typing import Iterable, Mapping

from ..core import UNKNOWN_LANG, normalize_ws

MIN_CHARS = 20
MIN_MARGIN = 0.05


def trigrams(text: str) -> Counter:
    text = " " + normalize_ws(text.lower()) + " "
    return Counter(text[i:i + 3] for i in range(len(text) - 2))


def build_profile(texts: Iterable[str], top_k: int = 2000) -> dict:
    """Relative trigram frequencies over ``texts``, truncated to the ``top_k`` most common."""
    counts = Counter()
    for text in texts:
        counts.update(trigrams(text))
    common = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]
    total = sum(c for _, c in common) or 1
    return {g: c / total for g, c in common}


def _cosine(vec: Counter, profile: Mapping[str, float], vec_norm: float, prof_norm: float) -> float:
    if vec_norm == 0 or prof_norm == 0:
        return 0.0
    dot = sum(c * profile.get(g, 0.0) for g, c in vec.items())
    return dot / (vec_norm * prof_norm)


class LanguageProfiles:
    """Per-language trigram profiles with cached norms."""

    def __init__(self, profiles: Mapping[str, Mapping[str, float]]):
        # sorted keys make every sum below independent of how the profile was built
        self.profiles = {lang: dict(sorted(p.items())) for lang, p in sorted(profiles.items())}
        self._norms = {lang: math.sqrt(sum(v * v for v in p.values()))
                       for lang, p in self.profiles.items()}

    @classmethod
    def train(cls, texts_by_lang: Mapping[str, Iterable[str]], top_k: int = 2000):
        return cls({lang: build_profile(texts, top_k) for lang, texts in texts_by_lang.items()})

    def similarities(self, text: str) -> dict:
        vec = trigrams(text)
        norm = math.sqrt(sum(c * c for c in vec.values()))
        return {lang: _cosine(vec, p, norm, self._norms[lang]) for lang, p in self.profiles.items()}

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.profiles, fh, ensure_ascii=False, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))


def detect_language(text: str, profiles: LanguageProfiles) -> tuple[str, float]:
    """Best-matching language and its normalized margin over the runner-up.

    Confidence is ``(best - second) / best`` over cosine similarities. Texts shorter
    than 20 characters, or with a margin below 0.05, come back as unknown.
    """
    if len(text.strip()) < MIN_CHARS or not profiles.profiles:
        return UNKNOWN_LANG, 0.0
    sims = profiles.similarities(text)
    ranked = sorted(sims.items(), key=lambda kv: (-kv[1], kv[0]))
    best_lang, best = ranked[0]
    second = ranked[1][1] if len(ranked) > 1 else 0.0
    if best <= 0:
        return UNKNOWN_LANG, 0.0
    margin = (best - second) / best
    if margin < MIN_MARGIN:
        return UNKNOWN_LANG, margin
    return best_lang, margin
