"""Lexical translation dictionaries induced with IBM Model 1 EM.

The probabilistic table ``t(tgt | src)`` is stored sparsely: only source/target
token pairs that co-occur in at least one sentence pair get an entry. Pairs that
never co-occur receive zero expected counts in every E-step, so dropping them
does not change the EM trajectory.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import Corpus, atomic_output

NULL = "<NULL>"


@dataclass
class ProbabilisticDictionary:
    table: dict  # src token -> {tgt token: probability}
    tgt_vocab: frozenset
    smoothing: float = 0.0
    iterations_run: int = 0
    log_likelihoods: list = field(default_factory=list)

    @property
    def src_vocab(self) -> frozenset:
        return frozenset(self.table)

    @property
    def final_log_likelihood(self) -> float:
        return self.log_likelihoods[-1] if self.log_likelihoods else float("nan")

    def prob(self, src: str, tgt: str) -> float:
        return self.table.get(src, {}).get(tgt, 0.0)

    def best(self, src: str) -> Optional[str]:
        row = self.table.get(src)
        if not row:
            return None
        return min(row.items(), key=lambda kv: (-kv[1], kv[0]))[0]


@dataclass(frozen=True)
class SeedDictionary:
    entries: tuple  # (src, tgt, prob), grouped by src, descending prob within a group
    cap: int = 4
    min_prob: float = 0.0

    def __post_init__(self):
        lookup = defaultdict(list)
        for s, t, p in self.entries:
            lookup[s].append(t)
        object.__setattr__(self, "_lookup", {s: tuple(ts) for s, ts in lookup.items()})
        object.__setattr__(self, "_pairs", frozenset((s, t) for s, t, _ in self.entries))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, pair) -> bool:
        return pair in self._pairs

    def translations(self, src: str) -> tuple:
        return self._lookup.get(src, ())

    def top1(self, src: str) -> Optional[str]:
        ts = self._lookup.get(src)
        return ts[0] if ts else None

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], prob: float = 1.0) -> "SeedDictionary":
        entries = sorted({(s, t) for s, t in pairs})
        return cls(tuple((s, t, prob) for s, t in entries), cap=max(1, len(entries)))

    def inverted(self) -> "SeedDictionary":
        rows = sorted(((t, s, p) for s, t, p in self.entries), key=lambda e: (e[0], -e[2], e[1]))
        return SeedDictionary(tuple(rows), self.cap, self.min_prob)


def _token_pairs(corpus: Corpus):
    pairs = [(p.src.tokens, p.tgt.tokens) for p in corpus.pairs]
    return pairs


def _init_table(pairs, tgt_vocab) -> dict:
    uniform = 1.0 / len(tgt_vocab)
    table = defaultdict(dict)
    for src, tgt in pairs:
        for s in (NULL,) + tuple(src):
            row = table[s]
            for t in tgt:
                row[t] = uniform
    return dict(table)


def _corpus_log_likelihood(table, pairs, floor) -> float:
    total = 0.0
    for src, tgt in pairs:
        src_null = (NULL,) + tuple(src)
        norm = 1.0 / len(src_null)
        rows = [table.get(s, {}) for s in src_null]
        # uniform length term P(m | l) = 1 / (l + 1)
        ll = math.log(norm)
        for t in tgt:
            mass = sum(row.get(t, 0.0) for row in rows)
            ll += math.log(max(mass * norm, floor))
        total += ll
    return total


def _floor(smoothing: float) -> float:
    return smoothing if smoothing > 0 else 1e-300


def train_ibm1(corpus: Corpus, iterations: int = 10, smoothing: float = 1e-6,
               init: Optional[ProbabilisticDictionary] = None) -> ProbabilisticDictionary:
    """Estimate t(tgt|src) by IBM Model 1 EM with a NULL source token.

    ``init`` continues training from an earlier table, so k + k iterations give
    the same table as 2k at once.
    """
    if len(corpus) == 0:
        raise ValueError("cannot train on an empty corpus")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")

    pairs = _token_pairs(corpus)
    tgt_vocab = frozenset(t for _, tgt in pairs for t in tgt)
    if not tgt_vocab:
        raise ValueError("corpus has no target tokens")
    if init is None:
        table = _init_table(pairs, tgt_vocab)
        history = [_corpus_log_likelihood(table, pairs, _floor(smoothing))]
        done = 0
    else:
        table = {s: dict(row) for s, row in init.table.items()}
        history = list(init.log_likelihoods)
        done = init.iterations_run

    for _ in range(iterations):
        counts = defaultdict(lambda: defaultdict(float))
        for src, tgt in pairs:
            src_null = (NULL,) + tuple(src)
            rows = [table[s] for s in src_null]
            crows = [counts[s] for s in src_null]
            for t in tgt:
                z = 0.0
                for row in rows:
                    z += row[t]
                if z == 0.0:
                    continue
                for row, crow in zip(rows, crows):
                    crow[t] += row[t] / z
        table = {}
        for s, crow in counts.items():
            denom = sum(crow.values()) + smoothing * len(crow)
            table[s] = {t: (c + smoothing) / denom for t, c in crow.items()}
        done += 1
        history.append(_corpus_log_likelihood(table, pairs, _floor(smoothing)))

    return ProbabilisticDictionary(table, tgt_vocab, smoothing, done, history)


def log_likelihood(pdict: ProbabilisticDictionary, corpus: Corpus) -> float:
    """Corpus log-likelihood under Model 1 with a uniform 1/(l+1) length term.

    Target tokens the table cannot explain get the smoothing floor.
    """
    return _corpus_log_likelihood(pdict.table, _token_pairs(corpus), _floor(pdict.smoothing))


def extract_seed(pdict: ProbabilisticDictionary, min_prob: float = 0.1, cap: int = 4) -> SeedDictionary:
    if not (0.0 < min_prob <= 1.0):
        raise ValueError("min_prob must be in (0, 1]")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    entries = []
    for s in sorted(pdict.table):
        if s == NULL:
            continue
        ranked = sorted(pdict.table[s].items(), key=lambda kv: (-kv[1], kv[0]))[:cap]
        entries.extend((s, t, p) for t, p in ranked if p >= min_prob)
    return SeedDictionary(tuple(entries), cap, min_prob)


# --- file format: src <TAB> tgt <TAB> prob --------------------------------------

def _format_prob(p: float) -> str:
    return repr(float(p))


def write_seed(seed: SeedDictionary, path) -> None:
    rows = sorted(seed.entries, key=lambda e: (e[0], -e[2], e[1]))
    with atomic_output(path) as fh:
        for s, t, p in rows:
            fh.write(f"{s}\t{t}\t{_format_prob(p)}\n")


def read_seed(path, cap: Optional[int] = None, min_prob: float = 0.0) -> SeedDictionary:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise ValueError(f"{path}:{lineno}: expected src, tgt, prob")
            rows.append((cols[0], cols[1], float(cols[2])))
    rows.sort(key=lambda e: (e[0], -e[2], e[1]))
    if cap is None:
        per_src = defaultdict(int)
        for s, _, _ in rows:
            per_src[s] += 1
        cap = max(per_src.values(), default=1)
    return SeedDictionary(tuple(rows), cap, min_prob)


def write_table(pdict: ProbabilisticDictionary, path) -> None:
    with atomic_output(path) as fh:
        for s in sorted(pdict.table):
            for t, p in sorted(pdict.table[s].items(), key=lambda kv: (-kv[1], kv[0])):
                fh.write(f"{s}\t{t}\t{_format_prob(p)}\n")


def read_table(path) -> ProbabilisticDictionary:
    table = defaultdict(dict)
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                s, t, p = line.split("\t")
                table[s][t] = float(p)
    tgt_vocab = frozenset(t for row in table.values() for t in row)
    return ProbabilisticDictionary(dict(table), tgt_vocab)
