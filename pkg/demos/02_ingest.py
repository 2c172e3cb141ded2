"""
From HTML to sentences
======================

Text is pulled out of an HTML page while scripts and navigation are
dropped. The language is guessed from character trigrams, and the text is
split into sentences.
"""

from bitextmine.ingest import LanguageProfiles, detect_language, extract_text, split_sentences

page = b"""<html><head><title>Nouvelles</title><script>var x = 1;</script></head>
<body><nav><a href="/en/">English</a></nav>
<h1>La maison verte</h1>
<p>La maison est grande. Le jardin est petit, mais il y a des fleurs.</p>
<p>M. Dupont habite ici depuis 1998. Il aime le soleil!</p>
</body></html>"""

blocks, signature = extract_text(page)
print("text blocks:", blocks)
print("tag signature:", signature[:8], "...")

profiles = LanguageProfiles.train({
    "fr": ["le chat est sur la table et la maison est grande", "nous avons des fleurs dans le jardin"],
    "en": ["the cat is on the table and the house is big", "we have flowers in the garden"],
})
text = " ".join(blocks)
lang, confidence = detect_language(text, profiles)
print(f"language {lang} with confidence {confidence:.2f}")

# "M." is a known abbreviation, so no split after it
for block in blocks:
    for sentence in split_sentences(block, lang):
        print(" ", sentence.text)
