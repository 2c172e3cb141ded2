"""Pipeline configuration: an INI file with sections, plus per-stage seeds."""

from __future__ import annotations

import configparser
import hashlib
import os
from io import StringIO
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from ..core import LanguagePair
from ..sentalign import AlignParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DictParams:
    iterations: int = 10
    smoothing: float = 1e-6
    min_prob: float = 0.1
    cap: int = 4


@dataclass(frozen=True)
class CrawlParams:
    max_pages: int = 100
    max_depth: int = 5
    delay_ms: int = 1000


@dataclass(frozen=True)
class DocAlignParams:
    weights: tuple = (0.5, 0.25, 0.25)
    threshold: float = 0.5
    aliases: Optional[str] = None


@dataclass(frozen=True)
class FilterParams:
    neg_ratio: float = 1.0
    n_trees: int = 100
    max_depth: int = 12
    feature_subsample: int = 4
    threshold: float = 0.5


@dataclass(frozen=True)
class PipelineConfig:
    languages: LanguagePair
    pseudo_corpus: str
    out_dir: str
    snapshot: Optional[str] = None
    domains: Optional[str] = None
    abbreviations: Optional[str] = None
    seed_dict: Optional[str] = None  # external seed dictionary for the alignment stages
    seed: int = 42
    workers: int = 1
    dictionary: DictParams = field(default_factory=DictParams)
    crawl: CrawlParams = field(default_factory=CrawlParams)
    docalign: DocAlignParams = field(default_factory=DocAlignParams)
    align: AlignParams = field(default_factory=AlignParams)
    filter: FilterParams = field(default_factory=FilterParams)

    def stage_seed(self, stage: str) -> int:
        return derive_seed(self.seed, stage)

    def path(self, *parts) -> str:
        return os.path.join(self.out_dir, *parts)


def derive_seed(global_seed: int, stage: str) -> int:
    """Stage-keyed seed: first 8 bytes of sha256("<seed>:<stage>")."""
    digest = hashlib.sha256(f"{global_seed}:{stage}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def validate(config: PipelineConfig, need_inputs: bool = True) -> PipelineConfig:
    """Check parameter ranges and, when ``need_inputs``, that every input path exists."""
    d, c, da, a, f = config.dictionary, config.crawl, config.docalign, config.align, config.filter
    checks = [
        (d.iterations >= 1, "dictionary.iterations must be >= 1"),
        (d.smoothing >= 0, "dictionary.smoothing must be >= 0"),
        (0 < d.min_prob <= 1, "dictionary.min_prob must be in (0, 1]"),
        (d.cap >= 1, "dictionary.cap must be >= 1"),
        (c.max_pages >= 1 and c.max_depth >= 0 and c.delay_ms >= 0, "crawl limits must be positive"),
        (len(da.weights) == 3 and min(da.weights) >= 0 and abs(sum(da.weights) - 1) <= 1e-9,
         "docalign.weights must be three non-negative numbers summing to 1"),
        (0 <= da.threshold <= 1, "docalign.threshold must be in [0, 1]"),
        (f.neg_ratio > 0, "filter.neg_ratio must be positive"),
        (f.n_trees >= 1 and f.max_depth >= 1 and f.feature_subsample >= 1,
         "forest hyperparameters must be positive"),
        (0 <= f.threshold <= 1, "filter.threshold must be in [0, 1]"),
        (config.workers >= 1, "workers must be >= 1"),
    ]
    for ok, message in checks:
        if not ok:
            raise ConfigError(message)
    if need_inputs:
        if not config.pseudo_corpus or not os.path.isfile(config.pseudo_corpus):
            raise ConfigError(f"pseudo-parallel corpus not found: {config.pseudo_corpus}")
        if config.snapshot is None and config.domains is None:
            raise ConfigError("either a snapshot or a domain list is required")
        if config.snapshot is not None and not os.path.exists(_manifest_path(config.snapshot)):
            raise ConfigError(f"snapshot manifest not found: {config.snapshot}")
        for name in ("domains", "abbreviations", "seed_dict"):
            p = getattr(config, name)
            if p is not None and not os.path.isfile(p):
                raise ConfigError(f"{name} file not found: {p}")
        if da.aliases is not None and not os.path.isfile(da.aliases):
            raise ConfigError(f"alias file not found: {da.aliases}")
    return config


def _manifest_path(snapshot: str) -> str:
    return os.path.join(snapshot, "manifest.tsv") if os.path.isdir(snapshot) else snapshot


def _typed(dc, section: configparser.SectionProxy):
    kwargs = {}
    for f in fields(dc):
        key = f.name
        if key not in section:
            continue
        raw = section[key]
        default = f.default
        if isinstance(default, tuple):
            kwargs[f.name] = tuple(float(x) for x in raw.split(","))
        elif isinstance(default, bool):
            kwargs[f.name] = section.getboolean(key)
        elif isinstance(default, int):
            kwargs[f.name] = int(raw)
        elif isinstance(default, float):
            kwargs[f.name] = float(raw)
        else:
            kwargs[f.name] = raw
    try:
        return dc(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section.name}]: {exc}") from exc


def load_config(path) -> PipelineConfig:
    """Read an INI config; relative paths resolve against the config file's directory.

    Sections: [languages] src/tgt, [inputs] pseudo_corpus/snapshot/domains/abbreviations/seed_dict,
    [output] dir, [run] seed/workers, [dictionary], [crawl], [docalign], [sentalign], [filter].
    """
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise ConfigError(f"cannot read config {path}")
    base = os.path.dirname(os.path.abspath(path))

    def rel(p):
        return p if p is None or os.path.isabs(p) else os.path.join(base, p)

    def get(section, key, default=None):
        return parser.get(section, key, fallback=default) if parser.has_section(section) else default

    try:
        languages = LanguagePair(get("languages", "src", ""), get("languages", "tgt", ""))
    except ValueError as exc:
        raise ConfigError(f"[languages]: {exc}") from exc
    for name in ("dictionary", "crawl", "docalign", "sentalign", "filter"):
        if not parser.has_section(name):
            parser.add_section(name)
    docalign = _typed(DocAlignParams, parser["docalign"])
    if docalign.aliases:
        docalign = replace(docalign, aliases=rel(docalign.aliases))
    try:
        return PipelineConfig(
            languages=languages,
            pseudo_corpus=rel(get("inputs", "pseudo_corpus")),
            out_dir=rel(get("output", "dir", "out")),
            snapshot=rel(get("inputs", "snapshot")),
            domains=rel(get("inputs", "domains")),
            abbreviations=rel(get("inputs", "abbreviations")),
            seed_dict=rel(get("inputs", "seed_dict")),
            seed=int(get("run", "seed", 42)),
            workers=int(get("run", "workers", 1)),
            dictionary=_typed(DictParams, parser["dictionary"]),
            crawl=_typed(CrawlParams, parser["crawl"]),
            docalign=docalign,
            align=_typed(AlignParams, parser["sentalign"]),
            filter=_typed(FilterParams, parser["filter"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def dump_config(config: PipelineConfig) -> str:
    """INI text that load_config reads back to an equal config (with absolute paths)."""
    parser = configparser.ConfigParser()
    parser["languages"] = {"src": config.languages.src, "tgt": config.languages.tgt}
    inputs = {"pseudo_corpus": os.path.abspath(config.pseudo_corpus)}
    for name in ("snapshot", "domains", "abbreviations", "seed_dict"):
        if getattr(config, name):
            inputs[name] = os.path.abspath(getattr(config, name))
    parser["inputs"] = inputs
    parser["output"] = {"dir": os.path.abspath(config.out_dir)}
    parser["run"] = {"seed": str(config.seed), "workers": str(config.workers)}
    for name, params in (("dictionary", config.dictionary), ("crawl", config.crawl),
                         ("docalign", config.docalign), ("sentalign", config.align),
                         ("filter", config.filter)):
        section = {}
        for f in fields(params):
            v = getattr(params, f.name)
            if v is None:
                continue
            section[f.name] = ",".join(repr(x) for x in v) if isinstance(v, tuple) else (
                os.path.abspath(v) if f.name == "aliases" else repr(v) if isinstance(v, float) else str(v))
        parser[name] = section
    buf = StringIO()
    parser.write(buf)
    return buf.getvalue()
