#!/usr/bin/env python3
"""Generate the toy bilingual dataset shipped under data/toy/.

A tiny synthetic English-like/German-like language pair with a one-to-one
content vocabulary, gendered determiners, varied punctuation and optional
adverbs and verb conjunctions.  The variation matters: words that co-occur
with everything (a fixed sentence-final period, a single determiner) would
stay tied with the true translation in the alignment table and depress
projection confidences below the default threshold.

Outputs:
  data/toy/en_srl.conllu    50 source sentences with gold frames
  data/toy/de_trans.conllu  index-aligned bare translations (10 columns)
  data/toy/de_tagged.conllu 150 tagged target sentences for POS fitting
  data/toy/de_dev.conllu    20 gold target sentences for evaluation
  data/toy/bitext.txt       200 parallel pairs for alignment training
  data/toy/manifest.tsv     naive text-scan statistics of en_srl.conllu

Run from the repository root:  python3 demos/make_toy_data.py
"""

from collections import Counter
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "toy"

# (english, german, gender) with m/f/n driving determiner forms
NOUNS = [
    ("dog", "hund", "m"), ("cat", "katze", "f"), ("man", "mann", "m"),
    ("woman", "frau", "f"), ("child", "kind", "n"), ("bird", "vogel", "m"),
    ("house", "haus", "n"), ("car", "wagen", "m"), ("tree", "baum", "m"),
    ("river", "fluss", "m"),
]
VERBS = [
    ("sees", "sieht", "see", "sehen", "see.01"),
    ("likes", "mag", "like", "moegen", "like.01"),
    ("finds", "findet", "find", "finden", "find.01"),
    ("helps", "hilft", "help", "helfen", "help.01"),
    ("follows", "folgt", "follow", "folgen", "follow.01"),
]
ADVERBS = [("today", "heute"), ("often", "oft"), ("never", "nie")]

DET_DE = {  # (definite, gender, case) -> form
    (True, "m", "nom"): "der", (True, "m", "acc"): "den",
    (True, "f", "nom"): "die", (True, "f", "acc"): "die",
    (True, "n", "nom"): "das", (True, "n", "acc"): "das",
    (False, "m", "nom"): "ein", (False, "m", "acc"): "einen",
    (False, "f", "nom"): "eine", (False, "f", "acc"): "eine",
    (False, "n", "nom"): "ein", (False, "n", "acc"): "ein",
}


def sample_sentence(rng):
    """One parallel sentence as (en_tokens, de_tokens, frames).

    Tokens are (form_en, form_de, lemma_en, lemma_de, upos, head, deprel);
    frames are (pred_position, sense, [(arg_position, role), ...]).
    """
    subj = NOUNS[rng.integers(len(NOUNS))]
    verb = VERBS[rng.integers(len(VERBS))]
    obj = NOUNS[rng.integers(len(NOUNS))]
    with_adv = rng.random() < 0.4
    with_conj = rng.random() < 0.25
    punct = "." if rng.random() < 0.7 else "!"

    def det(definite, noun, case):
        en = "the" if definite else "a"
        lemma_de = "der" if definite else "ein"
        return (en, DET_DE[(definite, noun[2], case)], en, lemma_de, "DET", None, "det")

    tokens = []

    def push(tok, head):
        form_en, form_de, lem_en, lem_de, upos, _, deprel = tok
        tokens.append([form_en, form_de, lem_en, lem_de, upos, head, deprel])
        return len(tokens)  # 1-based position

    d1 = push(det(rng.random() < 0.65, subj, "nom"), None)
    n1 = push((subj[0], subj[1], subj[0], subj[1], "NOUN", None, "nsubj"), None)
    v1 = push((verb[0], verb[1], verb[2], verb[3], "VERB", 0, "root"), 0)
    d2 = push(det(rng.random() < 0.65, obj, "acc"), None)
    n2 = push((obj[0], obj[1], obj[0], obj[1], "NOUN", None, "obj"), None)
    tokens[d1 - 1][5] = n1
    tokens[n1 - 1][5] = v1
    tokens[d2 - 1][5] = n2
    tokens[n2 - 1][5] = v1

    frames = [(v1, verb[4], [(n1, "A0"), (n2, "A1")])]
    if with_adv:
        adv = ADVERBS[rng.integers(len(ADVERBS))]
        a = push((adv[0], adv[1], adv[0], adv[1], "ADV", v1, "advmod"), v1)
        frames[0][2].append((a, "AM-TMP"))
    if with_conj:
        verb2 = VERBS[rng.integers(len(VERBS))]
        obj2 = NOUNS[rng.integers(len(NOUNS))]
        c = push(("and", "und", "and", "und", "CCONJ", None, "cc"), None)
        v2 = push((verb2[0], verb2[1], verb2[2], verb2[3], "VERB", v1, "conj"), v1)
        d3 = push(det(rng.random() < 0.65, obj2, "acc"), None)
        n3 = push((obj2[0], obj2[1], obj2[0], obj2[1], "NOUN", None, "obj"), None)
        tokens[c - 1][5] = v2
        tokens[d3 - 1][5] = n3
        tokens[n3 - 1][5] = v2
        frames.append((v2, verb2[4], [(n1, "A0"), (n3, "A1")]))
    push((punct, punct, punct, punct, "PUNCT", v1, "punct"), v1)
    return tokens, frames


def conllu_block(tokens, frames, side, lang, sent_id, with_frames):
    """Render one sentence; side 0 = source forms, 1 = target forms."""
    frames = sorted(frames, key=lambda f: f[0])
    lines = [f"# sent_id = {sent_id}", f"# lang = {lang}"]
    for i, tok in enumerate(tokens, start=1):
        form = tok[0] if side == 0 else tok[1]
        lemma = tok[2] if side == 0 else tok[3]
        row = [str(i), form, lemma, tok[4], "_", "_", str(tok[5]), tok[6], "_", "_"]
        if with_frames:
            pred = next((f[1] for f in frames if f[0] == i), "_")
            row.append(pred)
            for f in frames:
                row.append(dict(f[2]).get(i, "_"))
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n\n"


def naive_stats(text):
    """Manifest counts by direct text scanning, independent of the parser."""
    sentences = predicates = arguments = 0
    roles = Counter()
    for block in text.split("\n\n"):
        token_lines = [l for l in block.split("\n") if l and not l.startswith("#")]
        if not token_lines:
            continue
        sentences += 1
        for line in token_lines:
            cells = line.split("\t")
            if cells[10] != "_":
                predicates += 1
            for cell in cells[11:]:
                if cell != "_":
                    arguments += 1
                    roles[cell] += 1
    lines = [f"sentences\t{sentences}", f"predicates\t{predicates}",
             f"arguments\t{arguments}"]
    lines += [f"role:{r}\t{c}" for r, c in sorted(roles.items())]
    return "\n".join(lines) + "\n"


def main():
    rng = np.random.default_rng(7240)
    OUT.mkdir(parents=True, exist_ok=True)

    en_blocks, de_blocks, bitext = [], [], []
    for i in range(1, 51):
        tokens, frames = sample_sentence(rng)
        en_blocks.append(conllu_block(tokens, frames, 0, "EN", f"toy-en-{i:03d}", True))
        de_blocks.append(conllu_block(tokens, frames, 1, "DE", f"toy-de-{i:03d}", False))
        bitext.append(" ".join(t[0] for t in tokens) + " ||| "
                      + " ".join(t[1] for t in tokens))

    for i in range(51, 201):
        tokens, frames = sample_sentence(rng)
        bitext.append(" ".join(t[0] for t in tokens) + " ||| "
                      + " ".join(t[1] for t in tokens))

    tagged_blocks = []
    for i in range(1, 151):
        tokens, frames = sample_sentence(rng)
        tagged_blocks.append(conllu_block(tokens, frames, 1, "DE", f"toy-tag-{i:03d}", False))

    dev_blocks = []
    for i in range(1, 21):
        tokens, frames = sample_sentence(rng)
        dev_blocks.append(conllu_block(tokens, frames, 1, "DE", f"toy-dev-{i:03d}", True))

    en_text = "".join(en_blocks)
    (OUT / "en_srl.conllu").write_text(en_text, encoding="utf-8")
    (OUT / "de_trans.conllu").write_text("".join(de_blocks), encoding="utf-8")
    (OUT / "de_tagged.conllu").write_text("".join(tagged_blocks), encoding="utf-8")
    (OUT / "de_dev.conllu").write_text("".join(dev_blocks), encoding="utf-8")
    (OUT / "bitext.txt").write_text("\n".join(bitext) + "\n", encoding="utf-8")
    (OUT / "manifest.tsv").write_text(naive_stats(en_text), encoding="utf-8")
    print(f"wrote toy dataset under {OUT}")
    print(naive_stats(en_text))


if __name__ == "__main__":
    main()
