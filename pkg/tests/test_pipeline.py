import filecmp
import json
import os
from dataclasses import replace

import pytest

from bitextmine import cli
from bitextmine.core import CorpusKind, LanguagePair, atomic_output, make_pair, read_corpus
from bitextmine.ingest import FetchResult, SnapshotFetcher, read_manifest
from bitextmine.pipeline import (ConfigError, CrawlParams, FilterParams, PipelineConfig, SyntheticFixtureSpec,
                                 artifact, derive_seed, dump_config, evaluate_against_truth, gen_fixture,
                                 load_config, run_pipeline, validate)

LP = LanguagePair("xx", "yy")
SMALL = SyntheticFixtureSpec(vocab_size=150, sentences_per_page=5, pages_per_site=4, n_sites=3,
                             unpaired_fraction=0.25, inserted_fraction=0.1, pseudo_noise=0.1, seed=3)


@pytest.fixture(scope="module")
def small_fixture(tmp_path_factory):
    return gen_fixture(SMALL, tmp_path_factory.mktemp("fx"))


def config_for(fx, out, **kw):
    base = PipelineConfig(LP, fx.pseudo_path, str(out), snapshot=os.path.dirname(fx.manifest),
                          filter=FilterParams(n_trees=20, max_depth=8))
    return replace(base, **kw)


# --- fixture ------------------------------------------------------------------------

def test_fixture_arithmetic(tmp_path):
    spec = SyntheticFixtureSpec(sentences_per_page=5, pages_per_site=10, seed=1)
    fx = gen_fixture(spec, tmp_path)
    assert len(fx.truth) == 50
    assert len(read_manifest(fx.manifest).entries) == 20
    assert len(read_corpus(fx.truth_path, CorpusKind.A_PSEUDO, LP)) == 50


def test_fixture_deterministic(tmp_path):
    a, b = gen_fixture(SMALL, tmp_path / "a"), gen_fixture(SMALL, tmp_path / "b")
    cmp = filecmp.dircmp(a.root, b.root)
    assert not cmp.diff_files and not cmp.left_only and not cmp.right_only
    for sub in ("snapshot",):
        files = []
        for dirpath, _, names in os.walk(os.path.join(a.root, sub)):
            files += [os.path.relpath(os.path.join(dirpath, n), a.root) for n in names]
        match, mismatch, errors = filecmp.cmpfiles(a.root, b.root, files, shallow=False)
        assert not mismatch and not errors


def test_unpaired_pages_excluded_from_truth(tmp_path):
    spec = SyntheticFixtureSpec(sentences_per_page=4, pages_per_site=10, n_sites=2, unpaired_fraction=0.2, seed=5)
    fx = gen_fixture(spec, tmp_path)
    paired = spec.n_sites * spec.pages_per_site - fx.stats["unpaired_slots"]
    assert fx.stats["unpaired_slots"] > 0
    assert len(fx.truth) == paired * spec.sentences_per_page
    assert fx.stats["pages"] == 2 * spec.n_sites * spec.pages_per_site


def test_fixture_spec_validation():
    with pytest.raises(ValueError):
        SyntheticFixtureSpec(unpaired_fraction=1.5)


# --- evaluation ---------------------------------------------------------------------

def test_evaluate_examples():
    truth = [("a b", "x y"), ("c d", "z w"), ("e f", "u v"), ("g h", "s t")]
    assert evaluate_against_truth(truth, truth)[:2] == (1.0, 1.0)
    assert evaluate_against_truth([], truth)[:2] == (0.0, 0.0)
    half = evaluate_against_truth(truth[:2], truth)
    assert (half.precision, half.recall) == (1.0, 0.5)
    mixed = [make_pair("a  b", "x y", LP), make_pair("q", "r", LP)]
    assert evaluate_against_truth(mixed, truth)[:2] == (0.5, 0.25)


# --- configuration -------------------------------------------------------------------

def test_validation_errors(small_fixture, tmp_path):
    cfg = config_for(small_fixture, tmp_path / "out")
    validate(cfg)
    with pytest.raises(ConfigError):
        validate(replace(cfg, snapshot=str(tmp_path / "nope")))
    with pytest.raises(ConfigError):
        validate(replace(cfg, pseudo_corpus=str(tmp_path / "none.tsv")))
    with pytest.raises(ConfigError):
        validate(replace(cfg, snapshot=None))
    with pytest.raises(ConfigError):
        validate(replace(cfg, filter=FilterParams(threshold=2.0)))


def test_missing_snapshot_fails_before_any_stage(small_fixture, tmp_path):
    out = tmp_path / "out"
    with pytest.raises(ConfigError):
        run_pipeline(config_for(small_fixture, out, snapshot=str(tmp_path / "missing")))
    assert not out.exists()


def test_config_file_round_trip(small_fixture, tmp_path):
    cfg = config_for(small_fixture, tmp_path / "out", seed=9)
    path = tmp_path / "run.ini"
    path.write_text(dump_config(cfg))
    back = load_config(path)
    assert back.filter == cfg.filter and back.align == cfg.align and back.seed == 9
    assert os.path.samefile(back.pseudo_corpus, cfg.pseudo_corpus)


def test_relative_paths_and_bad_values(tmp_path):
    (tmp_path / "a.tsv").write_text("")
    path = tmp_path / "c.ini"
    path.write_text("[languages]\nsrc = xx\ntgt = yy\n[inputs]\npseudo_corpus = a.tsv\n")
    assert load_config(path).pseudo_corpus == str(tmp_path / "a.tsv")
    path.write_text("[languages]\nsrc = xx\ntgt = xx\n")
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text("[languages]\nsrc = xx\ntgt = yy\n[filter]\nn_trees = many\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_stage_seeds_differ():
    assert derive_seed(42, "forest") != derive_seed(42, "negatives")
    assert derive_seed(42, "forest") == derive_seed(42, "forest")


def test_atomic_output_leaves_partial_on_failure(tmp_path):
    target = tmp_path / "x.txt"
    with pytest.raises(RuntimeError):
        with atomic_output(target) as fh:
            fh.write("half")
            raise RuntimeError("boom")
    assert not target.exists() and (tmp_path / "x.txt.partial").exists()


# --- end to end -----------------------------------------------------------------------

def count(path):
    with open(path, encoding="utf-8") as fh:
        return sum(1 for line in fh if line.strip())


def test_run_pipeline_small(small_fixture, tmp_path):
    cfg = config_for(small_fixture, tmp_path / "out")
    report = run_pipeline(cfg)
    assert report.domains_processed == SMALL.n_sites
    assert report.documents_fetched == small_fixture.stats["pages"]
    assert report.filtered_pairs + report.rejected_pairs == report.heuristic["kept"]
    assert report.raw_pairs == count(artifact(cfg, "raw"))
    assert set(report.stage_seconds) >= {"induce-dict", "ingest", "classify"}
    kept = open(artifact(cfg, "heuristic"), encoding="utf-8").read().splitlines()
    acc = open(artifact(cfg, "filtered"), encoding="utf-8").read().splitlines()
    rej = open(artifact(cfg, "rejected"), encoding="utf-8").read().splitlines()

    def strip_score(lines):
        return sorted(line.split("\t")[:2] + line.split("\t")[3:] for line in lines)

    assert strip_score(acc + rej) == strip_score(kept)
    mined = read_corpus(artifact(cfg, "filtered"), CorpusKind.C_FILTERED, LP)
    scores = evaluate_against_truth(mined, small_fixture.truth)
    assert scores.precision >= 0.9 and scores.recall >= 0.8
    assert not [f for f in os.listdir(cfg.out_dir) if f.endswith(".partial")]
    with open(artifact(cfg, "report_json")) as fh:
        assert json.load(fh)["filtered_pairs"] == report.filtered_pairs


def test_crawl_mode_with_fake_server(small_fixture, tmp_path):
    inner = SnapshotFetcher(read_manifest(small_fixture.manifest))

    def fetcher(url):
        host = url.split("/")[2]
        if url == f"http://{host}/":
            body = f'<html><body><a href="/xx/page-0.html">x</a><a href="/yy/page-0.html">y</a></body></html>'
            return FetchResult(200, "text/html", body.encode())
        return inner(url)

    cfg = config_for(small_fixture, tmp_path / "out", snapshot=None, domains=small_fixture.domains_path,
                     crawl=CrawlParams(max_pages=100, max_depth=3, delay_ms=0))
    report = run_pipeline(cfg, fetcher=fetcher)
    assert report.domains_processed == SMALL.n_sites
    assert report.filtered_pairs > 0


# --- command line ------------------------------------------------------------------------

def test_cli_exit_codes(small_fixture, tmp_path, capsys):
    out = tmp_path / "out"
    common = ["--src", "xx", "--tgt", "yy", "--out", str(out)]
    assert cli.main(["run", *common, "--corpus", str(tmp_path / "none.tsv"),
                     "--snapshot", os.path.dirname(small_fixture.manifest)]) == 1
    assert "not found" in capsys.readouterr().err
    assert cli.main(["induce-dict", *common, "--corpus", small_fixture.pseudo_path, "--iterations", "3"]) == 0
    assert (out / "dict" / "seed_st.tsv").exists()
    # align-docs without ingested documents is a stage failure
    assert cli.main(["align-docs", *common]) == 2
    assert "stage align-docs failed" in capsys.readouterr().err
    assert cli.main(["run", *common, "--corpus", small_fixture.pseudo_path,
                     "--snapshot", os.path.dirname(small_fixture.manifest), "--weights", "0.5,0.5,0.5"]) == 1


def test_cli_gen_fixture_and_evaluate(tmp_path, capsys):
    assert cli.main(["gen-fixture", "--out", str(tmp_path / "fx"), "--sites", "1", "--pages", "2",
                     "--sentences", "3"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["truth_pairs"] == 6
    truth = str(tmp_path / "fx" / "truth.tsv")
    assert cli.main(["evaluate", "--mined", truth, "--truth", truth, "--src", "xx", "--tgt", "yy"]) == 0
    assert json.loads(capsys.readouterr().out)["precision"] == 1.0
