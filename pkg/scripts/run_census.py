#!/usr/bin/env python3
"""Reproduce the headline enumerations: maximal-clone witness counts for
k = 2..4 and the minimal-clone censuses for k = 2, 3."""

import argparse
import time
from collections import Counter

from cloneforge import enumerate_minimal_clones, gen_all_maximal


def maximal_summary(k):
    start = time.monotonic()
    ws = gen_all_maximal(k)
    elapsed = time.monotonic() - start
    counts = Counter(w.rtype for w in ws)
    print(f"maximal k={k}: {len(ws)} witnesses in {elapsed:.2f}s")
    for rtype, n in sorted(counts.items()):
        print(f"  {rtype}: {n}")


def minimal_summary(k):
    start = time.monotonic()
    rep = enumerate_minimal_clones(k)
    elapsed = time.monotonic() - start
    print(
        f"minimal k={k}: {rep.total_clones} clones, "
        f"{rep.similarity_classes} similarity classes in {elapsed:.1f}s"
    )
    for tag, n in sorted(rep.breakdown.items()):
        print(f"  {tag}: {n} classes")
    for c in rep.classes:
        table = list(c.representative.table)
        print(f"  [{c.tag}] x{c.clone_count}  representative {table}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--maximal", type=int, nargs="*", default=[2, 3, 4])
    parser.add_argument("--minimal", type=int, nargs="*", default=[2, 3])
    args = parser.parse_args()
    for k in args.maximal:
        maximal_summary(k)
    for k in args.minimal:
        minimal_summary(k)


if __name__ == "__main__":
    main()
