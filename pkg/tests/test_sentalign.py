import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bitextmine.core import LanguagePair, Sentence
from bitextmine.dictionary import SeedDictionary
from bitextmine.pipeline.fixture import cipher_corpus
from bitextmine.sentalign import (BEAD_PRIORITY, AlignParams, Bead, align_sentences, bead_score,
                                  bead_table, best_path, dict_coverage, length_score)

from oracles import brute_force_path, naive_coverage

SEED = SeedDictionary.from_pairs([("la", "the"), ("maison", "house")])
P = AlignParams()


def fr(text):
    return Sentence(text, "fr")


def en(text):
    return Sentence(text, "en")


def test_coverage_examples():
    assert dict_coverage(fr("la maison"), en("the house"), SEED) == 1.0
    assert dict_coverage(fr("le chat"), en("the house"), SEED) == 0.0
    assert dict_coverage(fr("la la"), en("the"), SEED) == pytest.approx(2 / 3)
    assert dict_coverage(fr(""), en(""), SEED) == 0.0


toks = st.lists(st.sampled_from("abcde"), max_size=8)


@settings(max_examples=300)
@given(toks, toks, st.lists(st.tuples(st.sampled_from("abcde"), st.sampled_from("abcde")), max_size=8))
def test_coverage_matches_naive(src, tgt, entries):
    seed = SeedDictionary.from_pairs(entries)
    assert dict_coverage(src, tgt, seed) == naive_coverage(src, tgt, seed)


def test_length_examples():
    assert length_score(5, 5) == 1.0
    assert length_score(2, 4) == 0.5
    assert length_score(0, 3) == 0.0
    with pytest.raises(ValueError):
        length_score(0, 0)


def test_bead_examples():
    assert bead_score([fr("x")], [], SEED, P) == P.gap_penalty
    assert bead_score([fr("la maison")], [en("the house")], SEED, P) == pytest.approx(1.0)
    assert bead_score([fr("a b")], [en("c d e f")], SEED, P) == pytest.approx(0.15)


def test_params_validation():
    with pytest.raises(ValueError):
        AlignParams(gap_penalty=0.1)
    with pytest.raises(ValueError):
        AlignParams(dict_weight=0.0, length_weight=0.0)


def test_single_sentence_pair():
    path, pairs = align_sentences([fr("la maison")], [en("the house")], SEED)
    assert path.labels() == ["1-1"]
    assert len(pairs) == 1 and pairs[0].score == pytest.approx(1.0)
    with pytest.raises(ValueError):
        align_sentences([], [en("x")], SEED)


@pytest.fixture(scope="module")
def cipher():
    corpus, mapping = cipher_corpus(40, vocab_size=60, seed=9)
    return corpus, SeedDictionary.from_pairs(mapping.items())


def test_parallel_documents_align_diagonally(cipher):
    corpus, cdict = cipher
    src = [p.src for p in corpus.pairs[:3]]
    tgt = [p.tgt for p in corpus.pairs[:3]]
    path, pairs = align_sentences(src, tgt, cdict)
    assert path.labels() == ["1-1"] * 3
    table = bead_table(src, tgt, cdict, P)
    total, best = brute_force_path(3, 3, table)
    assert [b for b, _, _ in best] == [Bead.ONE_ONE] * 3 and total == path.total_score
    assert [p.src.text for p in pairs] == [s.text for s in src]


def test_inserted_sentence_gives_one_gap(cipher):
    corpus, cdict = cipher
    tgt = [p.tgt for p in corpus.pairs[:4]]
    src = [p.src for p in corpus.pairs[:4]]
    src.insert(2, Sentence("Zzq vvk wwp qqj kkz.", src[0].lang))
    path, _ = align_sentences(src, tgt, cdict)
    gaps = [b for b in path.beads if b.bead.is_gap]
    assert len(gaps) == 1 and gaps[0].bead is Bead.ONE_ZERO and gaps[0].src == range(2, 3)


def test_identity_alignment(cipher):
    corpus, _ = cipher
    sents = [p.src for p in corpus.pairs[:6]]
    vocab = {t for s in sents for t in s.tokens}
    ident = SeedDictionary.from_pairs((t, t) for t in vocab)
    path, pairs = align_sentences(sents, sents, ident)
    assert path.labels() == ["1-1"] * 6
    assert all(dict_coverage(s, s, ident) == 1.0 for s in sents)
    assert all(p.score == pytest.approx(1.0) for p in pairs)


def check_tiling(path, n, m):
    i = j = 0
    for b in path.beads:
        assert b.src.start == i and b.tgt.start == j
        assert (len(b.src), len(b.tgt)) == b.bead.value
        i, j = b.src.stop, b.tgt.stop
    assert (i, j) == (n, m)


def random_docs(rng, n, m, vocab=6):
    words = [f"w{k}" for k in range(vocab)]

    def sent(lang):
        return Sentence(" ".join(rng.choice(words, size=rng.integers(1, 5))), lang)

    return [sent("fr") for _ in range(n)], [sent("en") for _ in range(m)]


def random_seed(rng, vocab=6):
    return SeedDictionary.from_pairs((f"w{a}", f"w{b}") for a, b in rng.integers(0, vocab, size=(vocab, 2)))


def test_dp_matches_brute_force_small():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n, m = rng.integers(1, 6, size=2)
        src, tgt = random_docs(rng, n, m)
        table = bead_table(src, tgt, random_seed(rng), P)
        path = best_path(n, m, table)
        check_tiling(path, n, m)
        total, best = brute_force_path(n, m, table)
        assert path.total_score == total
        assert [(b.bead, b.src.start, b.tgt.start) for b in path.beads] == best


def test_tie_break_with_quantized_scores():
    # integer-valued scores make many tilings tie exactly
    rng = np.random.default_rng(13)
    for _ in range(80):
        n, m = rng.integers(1, 6, size=2)
        table = {}
        for bead in BEAD_PRIORITY:
            di, dj = bead.value
            for i in range(n - di + 1):
                for j in range(m - dj + 1):
                    table[bead, i, j] = float(rng.integers(-1, 2))
        path = best_path(n, m, table)
        total, best = brute_force_path(n, m, table)
        assert path.total_score == total
        assert [(b.bead, b.src.start, b.tgt.start) for b in path.beads] == best


def test_all_equal_scores_prefer_one_one():
    table = {(bead, i, j): 0.0 for bead in BEAD_PRIORITY for i in range(4) for j in range(4)}
    assert best_path(3, 3, table).labels() == ["1-1"] * 3


def test_accept_threshold_monotone():
    rng = np.random.default_rng(21)
    for _ in range(40):
        src, tgt = random_docs(rng, *rng.integers(1, 7, size=2))
        seed = random_seed(rng)
        counts = [len(align_sentences(src, tgt, seed, AlignParams(accept_threshold=t))[1])
                  for t in np.linspace(-0.2, 1.2, 15)]
        assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_emitted_pairs_join_groups(cipher):
    corpus, cdict = cipher
    src = [corpus.pairs[0].src, corpus.pairs[1].src]
    joined = Sentence(corpus.pairs[0].tgt.text + " " + corpus.pairs[1].tgt.text, "yy")
    path, pairs = align_sentences(src, [joined], cdict, languages=LanguagePair("xx", "yy"))
    assert path.labels() == ["2-1"]
    assert pairs[0].src.text == src[0].text + " " + src[1].text
