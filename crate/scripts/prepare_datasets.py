#!/usr/bin/env python3
"""Convert the public sentiment and topic corpora into the benchmark layout.

Output, under OUT (point $CREDWEIGHT_DATA at it):

    pl-sh.txt            sentence polarity, "+1|-1 TAB text" per line
    pl-sub.txt           subjective (+1) vs objective (-1) sentences
    pl-2k/{pos,neg}/     full-length movie reviews
    imdb/{train,test}/{pos,neg}/
    athr/{train,test}/{pos,neg}/     alt.atheism (+1) vs soc.religion.christian (-1)
    xgraph/{train,test}/{pos,neg}/   comp.graphics (+1) vs comp.windows.x (-1)

Source archives must already be extracted; pass their directories:

    --sentence-polarity   rt-polaritydata/   (rt-polarity.pos, rt-polarity.neg)
    --subjectivity        rotten_imdb/       (quote.tok.gt9.5000, plot.tok.gt9.5000)
    --review-polarity     txt_sentoken/      (pos/, neg/)
    --imdb                aclImdb/           (train/{pos,neg}, test/{pos,neg})
    --newsgroups          20news-bydate/     (20news-bydate-train/, 20news-bydate-test/)

Any source left out is skipped.
"""

import argparse
import shutil
import sys
from pathlib import Path


def read_lines(path):
    # the sentence files are Latin-1 encoded
    return path.read_text(encoding="latin-1").splitlines()


def write_labeled(out, positive, negative):
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8") as f:
        for label, lines in (("+1", positive), ("-1", negative)):
            for line in lines:
                line = " ".join(line.split())
                if line:
                    f.write(f"{label}\t{line}\n")
    print(f"wrote {out} ({len(positive)} + {len(negative)} lines)")


def copy_class_dir(src, dst):
    dst.mkdir(parents=True, exist_ok=True)
    files = sorted(p for p in src.iterdir() if p.is_file())
    for p in files:
        shutil.copyfile(p, dst / p.name)
    return len(files)


def newsgroup_pair(root, out, positive, negative):
    for split in ("train", "test"):
        base = root / f"20news-bydate-{split}"
        for group, cls in ((positive, "pos"), (negative, "neg")):
            n = copy_class_dir(base / group, out / split / cls)
            print(f"wrote {out / split / cls} ({n} files from {group})")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("out", type=Path)
    ap.add_argument("--sentence-polarity", type=Path)
    ap.add_argument("--subjectivity", type=Path)
    ap.add_argument("--review-polarity", type=Path)
    ap.add_argument("--imdb", type=Path)
    ap.add_argument("--newsgroups", type=Path)
    args = ap.parse_args()

    if args.sentence_polarity:
        d = args.sentence_polarity
        write_labeled(args.out / "pl-sh.txt", read_lines(d / "rt-polarity.pos"), read_lines(d / "rt-polarity.neg"))
    if args.subjectivity:
        d = args.subjectivity
        write_labeled(
            args.out / "pl-sub.txt",
            read_lines(d / "quote.tok.gt9.5000"),
            read_lines(d / "plot.tok.gt9.5000"),
        )
    if args.review_polarity:
        for cls in ("pos", "neg"):
            n = copy_class_dir(args.review_polarity / cls, args.out / "pl-2k" / cls)
            print(f"wrote {args.out / 'pl-2k' / cls} ({n} files)")
    if args.imdb:
        for split in ("train", "test"):
            for cls in ("pos", "neg"):
                n = copy_class_dir(args.imdb / split / cls, args.out / "imdb" / split / cls)
                print(f"wrote {args.out / 'imdb' / split / cls} ({n} files)")
    if args.newsgroups:
        newsgroup_pair(args.newsgroups, args.out / "athr", "alt.atheism", "soc.religion.christian")
        newsgroup_pair(args.newsgroups, args.out / "xgraph", "comp.graphics", "comp.windows.x")
    if not any(vars(args)[k] for k in ("sentence_polarity", "subjectivity", "review_polarity", "imdb", "newsgroups")):
        print("nothing to do: pass at least one source directory", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
