"""Command line interface.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 stage failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from .core import CorpusKind, LanguagePair, read_corpus
from .pipeline.config import ConfigError, PipelineConfig, load_config, validate
from .pipeline.evaluate import evaluate_against_truth
from .pipeline.fixture import STANDARD_SPEC, SyntheticFixtureSpec, gen_fixture
from .pipeline.stages import StageError, run_pipeline, run_stage

EXIT_OK, EXIT_CONFIG, EXIT_STAGE = 0, 1, 2

# which inputs each stage reads besides earlier stage outputs
STAGE_INPUTS = {
    "induce-dict": ("pseudo_corpus",),
    "ingest": ("pseudo_corpus",),
    "train-filter": ("pseudo_corpus",),
}


def _floats(text):
    return tuple(float(x) for x in text.split(","))


def add_common(p):
    p.add_argument("--config", help="INI config file; flags override its values")
    p.add_argument("--src", help="source language code")
    p.add_argument("--tgt", help="target language code")
    p.add_argument("--corpus", help="pseudo-parallel corpus (TSV bitext)")
    p.add_argument("--out", help="output directory holding every stage artifact")
    p.add_argument("--seed", type=int, help="global seed")
    p.add_argument("--workers", type=int)
    p.add_argument("--abbreviations", help="sentence splitter abbreviation list")


def add_dict(p):
    g = p.add_argument_group("dictionary")
    g.add_argument("--iterations", type=int)
    g.add_argument("--smoothing", type=float)
    g.add_argument("--min-prob", type=float)
    g.add_argument("--cap", type=int)


def add_ingest(p, depth_flag="--max-depth"):
    g = p.add_argument_group("ingest")
    g.add_argument("--domains", help="file with one hostname per line")
    g.add_argument("--snapshot", help="snapshot directory (or its manifest.tsv)")
    g.add_argument("--max-pages", type=int)
    g.add_argument(depth_flag, dest="crawl_depth", type=int, help="crawl link depth")
    g.add_argument("--delay-ms", type=int)


def add_docalign(p):
    g = p.add_argument_group("document alignment")
    g.add_argument("--weights", type=_floats, help="url,structure,content weights")
    g.add_argument("--doc-threshold", type=float)
    g.add_argument("--aliases", help="extra language-token alias file")
    g.add_argument("--dict", dest="seed_dict", help="seed dictionary overriding the induced one")


def add_sentalign(p, with_dict=True):
    g = p.add_argument_group("sentence alignment")
    if with_dict:
        g.add_argument("--dict", dest="seed_dict", help="seed dictionary overriding the induced one")
    g.add_argument("--dict-weight", type=float)
    g.add_argument("--length-weight", type=float)
    g.add_argument("--gap-penalty", type=float)
    g.add_argument("--accept-threshold", type=float)


def add_filter(p, depth_flag="--max-depth"):
    g = p.add_argument_group("filter")
    g.add_argument("--neg-ratio", type=float)
    g.add_argument("--trees", type=int)
    g.add_argument(depth_flag, dest="tree_depth", type=int, help="maximum tree depth")
    g.add_argument("--feat-subsample", type=int)


def add_classify(p):
    p.add_argument("--cls-threshold", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bitextmine", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run every stage")
    add_common(p)
    add_dict(p)
    add_ingest(p)
    add_docalign(p)
    add_sentalign(p, with_dict=False)
    add_filter(p, depth_flag="--tree-depth")
    add_classify(p)

    builders = {
        "induce-dict": [add_dict],
        "ingest": [add_ingest],
        "align-docs": [add_docalign],
        "align-sents": [add_sentalign],
        "filter-rules": [],
        "train-filter": [add_filter],
        "classify": [add_classify],
        "report": [],
    }
    for name, adders in builders.items():
        p = sub.add_parser(name, help=f"run the {name} stage")
        add_common(p)
        for add in adders:
            add(p)

    p = sub.add_parser("gen-fixture", help="write a synthetic bilingual-website fixture")
    p.add_argument("--out", required=True)
    p.add_argument("--standard", action="store_true", help="the 40-site acceptance fixture")
    p.add_argument("--seed", type=int)
    p.add_argument("--sites", type=int)
    p.add_argument("--pages", type=int, help="pages per side per site")
    p.add_argument("--sentences", type=int, help="sentences per page")
    p.add_argument("--vocab", type=int)
    p.add_argument("--unpaired", type=float)
    p.add_argument("--inserted", type=float)
    p.add_argument("--near-dup", type=float)
    p.add_argument("--noise", type=float, help="pseudo-corpus token substitution rate")
    p.add_argument("--src", default="xx")
    p.add_argument("--tgt", default="yy")

    p = sub.add_parser("evaluate", help="precision/recall of a mined corpus against ground truth")
    p.add_argument("--mined", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    return parser


def _set(obj, **changes):
    changes = {k: v for k, v in changes.items() if v is not None}
    return replace(obj, **changes) if changes else obj


def config_from_args(args) -> PipelineConfig:
    if args.config:
        config = load_config(args.config)
    else:
        if not (args.src and args.tgt):
            raise ConfigError("--src and --tgt are required without --config")
        config = PipelineConfig(LanguagePair(args.src, args.tgt), args.corpus, args.out or "out")
    if args.src or args.tgt:
        config = replace(config, languages=LanguagePair(args.src or config.languages.src,
                                                        args.tgt or config.languages.tgt))
    a = vars(args)
    config = _set(config, pseudo_corpus=a.get("corpus"), out_dir=a.get("out"), seed=a.get("seed"),
                  workers=a.get("workers"), abbreviations=a.get("abbreviations"),
                  snapshot=a.get("snapshot"), domains=a.get("domains"), seed_dict=a.get("seed_dict"))
    return replace(
        config,
        dictionary=_set(config.dictionary, iterations=a.get("iterations"), smoothing=a.get("smoothing"),
                        min_prob=a.get("min_prob"), cap=a.get("cap")),
        crawl=_set(config.crawl, max_pages=a.get("max_pages"), max_depth=a.get("crawl_depth"),
                   delay_ms=a.get("delay_ms")),
        docalign=_set(config.docalign, weights=a.get("weights"), threshold=a.get("doc_threshold"),
                      aliases=a.get("aliases")),
        align=_set(config.align, dict_weight=a.get("dict_weight"), length_weight=a.get("length_weight"),
                   gap_penalty=a.get("gap_penalty"), accept_threshold=a.get("accept_threshold")),
        filter=_set(config.filter, neg_ratio=a.get("neg_ratio"), n_trees=a.get("trees"),
                    max_depth=a.get("tree_depth"), feature_subsample=a.get("feat_subsample"),
                    threshold=a.get("cls_threshold")),
    )


def _gen_fixture(args) -> int:
    spec = STANDARD_SPEC if args.standard else SyntheticFixtureSpec()
    spec = _set(spec, seed=args.seed, n_sites=args.sites, pages_per_site=args.pages,
                sentences_per_page=args.sentences, vocab_size=args.vocab, unpaired_fraction=args.unpaired,
                inserted_fraction=args.inserted, near_duplicate_fraction=args.near_dup,
                pseudo_noise=args.noise, src_lang=args.src, tgt_lang=args.tgt)
    fx = gen_fixture(spec, args.out)
    print(json.dumps({"manifest": fx.manifest, "truth": fx.truth_path, "cipher": fx.cipher_path,
                      "pseudo_corpus": fx.pseudo_path, "domains": fx.domains_path, **fx.stats},
                     indent=2, sort_keys=True))
    return EXIT_OK


def _evaluate(args) -> int:
    langs = LanguagePair(args.src, args.tgt)
    mined = read_corpus(args.mined, CorpusKind.B_RAW, langs)  # any bitext file, scored or not
    truth = read_corpus(args.truth, CorpusKind.A_PSEUDO, langs)
    scores = evaluate_against_truth(mined, truth)
    print(json.dumps(scores._asdict(), sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "gen-fixture":
            return _gen_fixture(args)
        if args.command == "evaluate":
            return _evaluate(args)
        config = config_from_args(args)
        if args.command == "run":
            report = run_pipeline(config)
            print(report.render(), end="")
            return EXIT_OK
        validate(config, need_inputs=False)
        for name in STAGE_INPUTS.get(args.command, ()):
            path = getattr(config, name)
            if not path or not os.path.isfile(path):
                raise ConfigError(f"{name} not found: {path}")
        if args.command == "ingest" and not (config.snapshot or config.domains):
            raise ConfigError("ingest needs --snapshot or --domains")
        result = run_stage(args.command, config)
        if args.command == "report":
            print(result.render(), end="")
        return EXIT_OK
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
