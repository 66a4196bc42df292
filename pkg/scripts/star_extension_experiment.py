#!/usr/bin/env python3
"""Majority-operation counts under the star extension.

Starting from a majority operation on {0..k-1}, the star extension adds a
new top element and returns the first argument on triples that involve it.
The experiment reports how the number of majority operations in the
ternary part of the generated clone evolves along repeated extensions.
"""

import argparse
import time

from cloneforge import builtin, part_statistics, star_extension


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2,
                        help="number of star extensions to apply")
    parser.add_argument("--cap", type=int, default=200000)
    args = parser.parse_args()

    f = builtin("median", k=2)
    for step in range(args.steps + 1):
        start = time.monotonic()
        stats = part_statistics([f], 3, cap=args.cap)
        elapsed = time.monotonic() - start
        print(
            f"k={f.k}: ternary part {stats['size']}, "
            f"majority operations {stats['majority_count']} "
            f"({elapsed:.1f}s)"
        )
        if step < args.steps:
            f = star_extension(f)


if __name__ == "__main__":
    main()
