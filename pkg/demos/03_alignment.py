"""
Aligning documents, then sentences
==================================

Two tiny sites in a cipher language pair are aligned. Document pairs come
from URL, structure and content scores. Sentences inside each pair are
aligned with a dynamic program over 1-1, 2-1, 1-2, 2-2, 1-0 and 0-1 beads.
"""

from bitextmine.core import LanguagePair, Sentence
from bitextmine.dictionary import SeedDictionary
from bitextmine.docalign import align_documents, url_match_score
from bitextmine.ingest import FetchStatus, build_document
from bitextmine.pipeline import cipher_corpus
from bitextmine.sentalign import align_document_pair

pair = LanguagePair("xx", "yy")
corpus, cipher = cipher_corpus(12, vocab_size=60, seed=4)
seed = SeedDictionary.from_pairs(list(cipher.items()) + [(".", ".")])

print(url_match_score("site.com/xx/news/1", "site.com/yy/news/1", pair))
print(url_match_score("site.com/xx/news/1", "site.com/yy/news/2", pair))

src_pages, tgt_pages = [], []
for k in range(3):
    chunk = corpus.pairs[4 * k: 4 * k + 4]
    src_text = [p.src.text for p in chunk]
    tgt_text = [p.tgt.text for p in chunk]
    if k == 1:
        # an extra sentence only on the source side
        src_text.insert(2, "Zzq vvk wwp qqj kkz.")
    src_pages.append(build_document(f"http://site.com/xx/page-{k}", [" ".join(src_text)],
                                    ("html", "body", "p"), FetchStatus.FROM_SNAPSHOT, lang="xx"))
    tgt_pages.append(build_document(f"http://site.com/yy/page-{k}", [" ".join(tgt_text)],
                                    ("html", "body", "p"), FetchStatus.FROM_SNAPSHOT, lang="yy"))

doc_pairs = align_documents(src_pages, tgt_pages, seed, pair)
for dp in doc_pairs:
    print(f"{dp.src_doc.url} <-> {dp.tgt_doc.url}  total {dp.total:.3f}")

# page-1 carries the extra source sentence, which becomes a 1-0 bead
page1 = next(dp for dp in doc_pairs if dp.src_doc.url.endswith("page-1"))
path, sentence_pairs = align_document_pair(page1, seed, languages=pair)
print("beads:", path.labels())
for sp in sentence_pairs[:2]:
    print(f"  {sp.score:.2f}  {sp.src.text}  |  {sp.tgt.text}")
