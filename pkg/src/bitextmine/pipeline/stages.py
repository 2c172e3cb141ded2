"""Pipeline stages.

Every stage reads the persisted outputs of earlier stages from the output
directory and writes its own, so running the stages one by one (as separate
processes) gives the same files as a single ``run_pipeline`` call.
"""

from __future__ import annotations

import json
import logging
import os
import time
from collections import defaultdict

from ..core import (Corpus, CorpusKind, Origin, SentencePair, atomic_output, read_corpus,
                    write_corpus)
from ..dictionary import extract_seed, read_seed, train_ibm1, write_seed, write_table
from ..docalign import align_documents, load_aliases, read_document_pairs, write_document_pairs
from ..filtering import (classify_corpus, feature_matrix, gen_negatives, heuristic_filter,
                         load_model, save_model, train_forest, write_removed)
from ..ingest import (CrawlError, FetchStatus, LanguageProfiles, fetch_domain, load_abbreviations,
                      load_snapshot, read_documents, write_documents)
from ..sentalign import align_sentences
from .config import PipelineConfig, validate
from .report import build_report, write_report

log = logging.getLogger(__name__)

# artifact file names inside the output directory
FILES = {
    "table_st": "dict/table_st.tsv",
    "table_ts": "dict/table_ts.tsv",
    "seed_st": "dict/seed_st.tsv",
    "seed_ts": "dict/seed_ts.tsv",
    "profiles": "profiles.json",
    "documents": "documents.jsonl",
    "doc_pairs": "doc_pairs.jsonl",
    "raw": "raw.tsv",
    "heuristic": "heuristic.tsv",
    "heuristic_removed": "heuristic_removed.jsonl",
    "rules": "rules.json",
    "model": "model.forest",
    "filtered": "filtered.tsv",
    "rejected": "rejected.tsv",
    "timings": "timings.json",
    "report_json": "report.json",
    "report_txt": "report.txt",
}

STAGES = ("induce-dict", "ingest", "align-docs", "align-sents", "filter-rules", "train-filter",
          "classify", "report")


class StageError(RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"stage {stage} failed: {cause}")
        self.stage = stage
        self.cause = cause


def artifact(config: PipelineConfig, name: str) -> str:
    return config.path(FILES[name])


def _abbreviations(config):
    return load_abbreviations(config.abbreviations) if config.abbreviations else None


def _pseudo(config):
    return read_corpus(config.pseudo_corpus, CorpusKind.A_PSEUDO, config.languages)


def _seeds(config):
    return read_seed(artifact(config, "seed_st")), read_seed(artifact(config, "seed_ts"))


def _align_seed(config):
    return read_seed(config.seed_dict) if config.seed_dict else read_seed(artifact(config, "seed_st"))


def _profiles(config):
    return LanguageProfiles.load(artifact(config, "profiles"))


def induce_dict(config: PipelineConfig) -> None:
    corpus = _pseudo(config)
    p = config.dictionary
    os.makedirs(config.path("dict"), exist_ok=True)
    for direction, c in (("st", corpus), ("ts", _reverse(corpus))):
        table = train_ibm1(c, p.iterations, p.smoothing)
        log.info("IBM-1 %s: log-likelihood %.3f after %d iterations", direction,
                 table.final_log_likelihood, table.iterations_run)
        write_table(table, artifact(config, "table_" + direction))
        write_seed(extract_seed(table, p.min_prob, p.cap), artifact(config, "seed_" + direction))


def _reverse(corpus):
    pairs = tuple(SentencePair(p.tgt, p.src, p.score, p.provenance) for p in corpus.pairs)
    return Corpus(pairs, corpus.kind, corpus.languages.reversed())


def ingest(config: PipelineConfig, fetcher=None) -> None:
    """Language profiles from the pseudo corpus, then documents from a snapshot or a live crawl."""
    corpus = _pseudo(config)
    langs = config.languages
    profiles = LanguageProfiles.train({langs.src: [p.src.text for p in corpus.pairs],
                                       langs.tgt: [p.tgt.text for p in corpus.pairs]})
    os.makedirs(config.out_dir, exist_ok=True)
    with atomic_output(artifact(config, "profiles")) as fh:
        json.dump(profiles.profiles, fh, ensure_ascii=False, sort_keys=True)

    domains = None
    if config.domains:
        with open(config.domains, encoding="utf-8") as fh:
            domains = [line.strip().lower() for line in fh if line.strip() and not line.startswith("#")]
    abbrevs = _abbreviations(config)
    if config.snapshot:
        docs = load_snapshot(config.snapshot, profiles, abbrevs)
        if domains is not None:
            wanted = set(domains)
            docs = [d for d in docs if d.domain in wanted]
    else:
        docs = []
        c = config.crawl
        for domain in domains:
            try:
                docs.extend(fetch_domain(domain, c.max_pages, c.max_depth, c.delay_ms, fetcher=fetcher,
                                         profiles=profiles, abbreviations=abbrevs))
            except CrawlError as exc:
                log.warning("%s", exc)
        if not docs:
            raise CrawlError("nothing fetched from any domain")
    write_documents(docs, artifact(config, "documents"))


def _documents_by_domain(config):
    docs = read_documents(artifact(config, "documents"), _abbreviations(config))
    by_domain = defaultdict(lambda: ([], []))
    for d in docs:
        if d.fetch_status is FetchStatus.FAILED or not d.sentences:
            continue
        if d.lang == config.languages.src:
            by_domain[d.domain][0].append(d)
        elif d.lang == config.languages.tgt:
            by_domain[d.domain][1].append(d)
    return docs, by_domain


def align_docs(config: PipelineConfig) -> None:
    seed_st = _align_seed(config)
    aliases = load_aliases(config.docalign.aliases) if config.docalign.aliases else None
    _, by_domain = _documents_by_domain(config)
    pairs = []
    for domain in sorted(by_domain):
        docs_p, docs_q = by_domain[domain]
        pairs.extend(align_documents(docs_p, docs_q, seed_st, config.languages, config.docalign.weights,
                                     config.docalign.threshold, aliases))
    write_document_pairs(pairs, artifact(config, "doc_pairs"))


def align_sents(config: PipelineConfig) -> None:
    seed_st = _align_seed(config)
    docs, _ = _documents_by_domain(config)
    by_url = {d.url: d for d in docs}
    pairs = []
    for dp in read_document_pairs(artifact(config, "doc_pairs")):
        src, tgt = by_url[dp["src_url"]], by_url[dp["tgt_url"]]
        origin = Origin(src.domain, src.url, tgt.url)
        _, emitted = align_sentences(list(src.sentences), list(tgt.sentences), seed_st, config.align,
                                     config.languages, origin)
        pairs.extend(emitted)
    write_corpus(Corpus(tuple(pairs), CorpusKind.B_RAW, config.languages), artifact(config, "raw"))


def filter_rules(config: PipelineConfig) -> None:
    raw = read_corpus(artifact(config, "raw"), CorpusKind.B_RAW, config.languages)
    kept, removed, report = heuristic_filter(raw)
    write_corpus(kept, artifact(config, "heuristic"))
    write_removed(removed, artifact(config, "heuristic_removed"))
    with atomic_output(artifact(config, "rules")) as fh:
        json.dump(report.as_dict(), fh, sort_keys=True)
        fh.write("\n")


def train_filter(config: PipelineConfig) -> None:
    corpus = _pseudo(config)
    seed_st, seed_ts = _seeds(config)
    profiles = _profiles(config)
    f = config.filter
    negatives = gen_negatives(corpus, f.neg_ratio, config.stage_seed("negatives"))
    pos = feature_matrix(corpus.pairs, seed_st, seed_ts, profiles)
    neg = feature_matrix(negatives, seed_st, seed_ts, profiles)
    model = train_forest(pos, neg, f.n_trees, f.max_depth, f.feature_subsample,
                         config.stage_seed("forest") % (2 ** 32), config.workers)
    save_model(model, artifact(config, "model"))


def classify(config: PipelineConfig) -> None:
    corpus = read_corpus(artifact(config, "heuristic"), CorpusKind.B_RAW, config.languages)
    seed_st, seed_ts = _seeds(config)
    model = load_model(artifact(config, "model"))
    accepted, rejected = classify_corpus(corpus, model, config.filter.threshold, seed_st, seed_ts,
                                         _profiles(config))
    write_corpus(accepted, artifact(config, "filtered"))
    write_corpus(rejected, artifact(config, "rejected"))


def report(config: PipelineConfig):
    timings = {}
    path = artifact(config, "timings")
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            timings = json.load(fh)
    rep = build_report(config, timings)
    write_report(rep, artifact(config, "report_json"), artifact(config, "report_txt"))
    return rep


STAGE_FUNCS = {
    "induce-dict": induce_dict,
    "ingest": ingest,
    "align-docs": align_docs,
    "align-sents": align_sents,
    "filter-rules": filter_rules,
    "train-filter": train_filter,
    "classify": classify,
    "report": report,
}


def run_stage(name: str, config: PipelineConfig, **kwargs):
    """Run one stage, recording its wall-clock time; failures become StageError."""
    os.makedirs(config.out_dir, exist_ok=True)
    start = time.perf_counter()
    try:
        result = STAGE_FUNCS[name](config, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc
    if name != "report":
        _record_timing(config, name, time.perf_counter() - start)
    return result


def _record_timing(config, name, seconds):
    path = artifact(config, "timings")
    timings = {}
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            timings = json.load(fh)
    timings[name] = round(seconds, 3)
    with atomic_output(path) as fh:
        json.dump(timings, fh, sort_keys=True)


def run_pipeline(config: PipelineConfig, fetcher=None):
    """Validate the config, then run every stage in order and return the report."""
    validate(config)
    os.makedirs(config.out_dir, exist_ok=True)
    timings = artifact(config, "timings")
    if os.path.exists(timings):
        os.remove(timings)
    for name in STAGES[:-1]:
        log.info("stage %s", name)
        run_stage(name, config, **({"fetcher": fetcher} if name == "ingest" else {}))
    return run_stage("report", config)

