#!/usr/bin/env python3
"""Regenerate the lexical data files shipped in crates/core/data.

Inputs: a WordNet 3.0 database directory (data.*, index.*, *.exc) and the
`wordfreq` package. Usage:

    python3 scripts/build_lexicon.py /path/to/wordnet-3.0 crates/core/data
"""
import os
import sys
from collections import defaultdict

import wordfreq

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
VOCAB_SIZE = 40000
KB_VOCAB = 25000
FREQ_SIZE = 20000


def read_index(wn, pos):
    lemmas = {}
    with open(os.path.join(wn, "index." + POS_FILES[pos]), encoding="latin-1") as f:
        for line in f:
            if line.startswith(" "):
                continue
            parts = line.split()
            lemma = parts[0]
            synset_cnt = int(parts[2])
            p_cnt = int(parts[3])
            tagsense_cnt = int(parts[5 + p_cnt])
            offsets = parts[6 + p_cnt : 6 + p_cnt + synset_cnt]
            lemmas[lemma] = (tagsense_cnt, offsets)
    return lemmas


def read_noun_data(wn):
    synsets = {}
    with open(os.path.join(wn, "data.noun"), encoding="latin-1") as f:
        for line in f:
            if line.startswith(" "):
                continue
            parts = line.split(" | ")[0].split()
            offset = parts[0]
            w_cnt = int(parts[3], 16)
            words = [parts[4 + 2 * i].lower() for i in range(w_cnt)]
            i = 4 + 2 * w_cnt
            p_cnt = int(parts[i])
            hyper = None
            for j in range(p_cnt):
                sym, target, tpos = parts[i + 1 + 4 * j : i + 4 + 4 * j]
                if sym in ("@", "@i") and tpos == "n" and hyper is None:
                    hyper = target
            synsets[offset] = (words, hyper)
    return synsets


def read_exc(wn, pos):
    out = {}
    path = os.path.join(wn, POS_FILES[pos] + ".exc")
    with open(path, encoding="latin-1") as f:
        for line in f:
            parts = line.split()
            if len(parts) >= 2:
                out.setdefault(parts[0], parts[1])
    return out


SUFFIXES = {
    "n": [("s", ""), ("ses", "s"), ("xes", "x"), ("zes", "z"), ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y")],
    "v": [("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"), ("ed", ""), ("ing", "e"), ("ing", "")],
    "a": [("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
}


def morphy(word, pos, index, exc):
    if word in exc.get(pos, {}):
        return exc[pos][word]
    if word in index[pos]:
        return word
    for suf, rep in SUFFIXES.get(pos, []):
        if word.endswith(suf):
            cand = word[: len(word) - len(suf)] + rep
            if cand in index[pos]:
                return cand
    return None


def main():
    wn, out = sys.argv[1], sys.argv[2]
    index = {p: read_index(wn, p) for p in POS_FILES}
    exc = {p: read_exc(wn, p) for p in ("n", "v", "a")}
    top = wordfreq.top_n_list("en", VOCAB_SIZE)
    top_set = set(top)
    kb_set = set(top[:KB_VOCAB])

    # Open-class lemma inventory: word -> per-POS tagged-sense counts.
    with open(os.path.join(out, "lemmas.tsv"), "w") as f:
        f.write("# lemma\tnoun\tverb\tadj\tadv  (tagged sense counts; -1 = absent)\n")
        words = set()
        for p in POS_FILES:
            words.update(w for w in index[p] if "_" not in w and w in top_set)
        for w in sorted(words):
            counts = [str(index[p][w][0]) if w in index[p] else "-1" for p in "nvar"]
            f.write(w + "\t" + "\t".join(counts) + "\n")

    with open(os.path.join(out, "exceptions.tsv"), "w") as f:
        f.write("# inflected\tpos\tlemma\n")
        for p in ("n", "v", "a"):
            for form, lemma in sorted(exc[p].items()):
                if form in top_set and "_" not in form:
                    f.write(f"{form}\t{p}\t{lemma}\n")

    # Lexical knowledge base: most-frequent noun sense per lemma plus ancestors.
    synsets = read_noun_data(wn)

    def sense_name(offset):
        words, _ = synsets[offset]
        first = words[0]
        offs = index["n"][first][1]
        num = offs.index(offset) + 1 if offset in offs else 1
        return f"{first}.n.{num:02d}"

    def kb_lemma_ok(lemma):
        parts = lemma.split("_")
        return len(parts) <= 3 and all(p in kb_set for p in parts)

    lines = []
    needed = set()
    for lemma in sorted(index["n"]):
        if not kb_lemma_ok(lemma):
            continue
        first = index["n"][lemma][1][0]
        lines.append((first, lemma))
        cur = synsets[first][1]
        while cur is not None and cur not in needed:
            needed.add(cur)
            cur = synsets[cur][1]
    seen_pairs = set(lines)
    anc = []
    for off in sorted(needed):
        lemma = synsets[off][0][0]
        if (off, lemma) not in seen_pairs:
            anc.append((off, lemma))
    with open(os.path.join(out, "lexical_kb.tsv"), "w") as f:
        f.write("# sense_id\tlemma\thypernym_sense_id (derived from WordNet 3.0)\n")
        for off, lemma in lines + anc:
            hyper = synsets[off][1]
            f.write(f"{sense_name(off)}\t{lemma.replace('_', ' ')}\t{sense_name(hyper) if hyper else ''}\n")

    # Lemma frequency ranks.
    agg = defaultdict(float)
    for w in top:
        if not w.isalpha():
            continue
        lemma = morphy(w, "n", index, exc) or morphy(w, "v", index, exc) or morphy(w, "a", index, exc) or w
        agg[lemma] += wordfreq.word_frequency(w, "en")
    ranked = sorted(agg.items(), key=lambda kv: (-kv[1], kv[0]))[:FREQ_SIZE]
    with open(os.path.join(out, "frequency.tsv"), "w") as f:
        f.write("# lemma\trank (1 = most frequent; aggregated from wordfreq English)\n")
        for rank, (lemma, _) in enumerate(ranked, 1):
            f.write(f"{lemma}\t{rank}\n")


if __name__ == "__main__":
    main()
