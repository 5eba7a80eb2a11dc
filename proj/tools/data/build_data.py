"""Regenerates the bundled NLP data files under data/.

Sources (fetch with `pip download --no-deps python-rake textblob langdetect`):
  * SMART stop list (571 entries) from python-rake, MIT licensed.
  * Brill tagger lexicon and word-frequency list from textblob, MIT licensed.
  * Character n-gram profiles from langdetect, Apache-2.0 licensed.

usage: build_data.py <python-rake whl> <textblob whl> <langdetect sdist dir> <out dir>
"""
import importlib.util
import io
import json
import os
import sys
import zipfile

LANGS = ["en", "de", "fr", "es", "it", "nl", "pt"]
LEXICON_SIZE = 10000


def coarse_tag(tag):
    if tag.startswith("NN"):
        return "Noun"
    if tag.startswith("VB"):
        return "Verb"
    if tag.startswith("JJ"):
        return "Adjective"
    return "Other"


def main(rake_whl, textblob_whl, langdetect_dir, out):
    z = zipfile.ZipFile(rake_whl)
    src = z.read("RAKE/stoplists/SmartStopList.py").decode()
    ns = {}
    exec(src, ns)
    with open(os.path.join(out, "stopwords_en.txt"), "w") as f:
        for w in ns["wordlist"]:
            f.write(w + "\n")

    z = zipfile.ZipFile(textblob_whl)
    freq = {}
    for line in io.StringIO(z.read("textblob/en/en-spelling.txt").decode()):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) == 2:
            freq[parts[0]] = int(parts[1])
    lex = {}
    for line in io.StringIO(z.read("textblob/en/en-lexicon.txt").decode()):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) < 2:
            continue
        word, tag = parts[0], parts[1]
        if word.isalpha() and word.islower() and word.isascii() and word not in lex:
            lex[word] = coarse_tag(tag)
    ranked = sorted((w for w in lex if w in freq), key=lambda w: (-freq[w], w))
    with open(os.path.join(out, "lexicon_en.tsv"), "w") as f:
        for w in sorted(ranked[:LEXICON_SIZE]):
            f.write(f"{w}\t{lex[w]}\n")

    for lang in LANGS:
        prof = json.load(open(os.path.join(langdetect_dir, "langdetect", "profiles", lang)))
        grams = {g: c for g, c in prof["freq"].items() if len(g) == 3}
        with open(os.path.join(out, "langprofiles", lang + ".tsv"), "w") as f:
            f.write(f"#lang\t{lang}\n")
            for g in sorted(grams, key=lambda g: (-grams[g], g)):
                f.write(f"{g}\t{grams[g]}\n")


if __name__ == "__main__":
    main(*sys.argv[1:5])
