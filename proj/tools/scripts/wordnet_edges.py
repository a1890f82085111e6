#!/usr/bin/env python3
"""Extract the WordNet noun hypernym graph as a `child<TAB>parent` edges TSV.

Reads the raw WordNet 3.0 database files (data.noun, index.noun) directly,
so any copy of the database works (the nltk corpus, the `wn==0.0.23` wheel,
or the Princeton tarball). Synset ids follow the nltk naming scheme,
e.g. `craftsman.n.02`.

    python3 wordnet_edges.py /path/to/wordnet-3.0 > wordnet_nouns.tsv
"""
import argparse
import pathlib
import sys


def read_index(path):
    sense_of = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith(" "):
                continue
            fields = line.split()
            lemma = fields[0]
            synset_cnt = int(fields[2])
            offsets = fields[-synset_cnt:]
            for i, off in enumerate(offsets):
                sense_of[(lemma, off)] = i + 1
    return sense_of


def read_data(path):
    synsets = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith(" "):
                continue
            fields = line.split(" | ")[0].split()
            offset = fields[0]
            w_cnt = int(fields[3], 16)
            first = fields[4].lower()
            pos = 4 + 2 * w_cnt
            p_cnt = int(fields[pos])
            ptrs = []
            for k in range(p_cnt):
                sym, target, tpos = fields[pos + 1 + 4 * k: pos + 4 + 4 * k]
                if tpos == "n":
                    ptrs.append((sym, target))
            synsets[offset] = (first, ptrs)
    return synsets


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("wordnet_dir", type=pathlib.Path)
    ap.add_argument("--no-instances", action="store_true",
                    help="skip instance hypernym (@i) pointers")
    args = ap.parse_args()

    sense_of = read_index(args.wordnet_dir / "index.noun")
    synsets = read_data(args.wordnet_dir / "data.noun")

    def name(off):
        lemma = synsets[off][0]
        return f"{lemma}.n.{sense_of[(lemma, off)]:02d}"

    symbols = {"@"} if args.no_instances else {"@", "@i"}
    out = sys.stdout
    for off, (_, ptrs) in synsets.items():
        for sym, target in ptrs:
            if sym in symbols:
                out.write(f"{name(off)}\t{name(target)}\n")


if __name__ == "__main__":
    main()
