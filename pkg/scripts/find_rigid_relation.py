#!/usr/bin/env python3
"""Search for a rigid relation on a 3-element domain.

A relation is rigid when its polymorphism clone is exactly the projections.
It suffices to check that no generator of a minimal clone preserves it: any
non-trivial polymorphism clone contains a minimal clone, so it contains one
of the census generators.
"""

import argparse
import itertools
import random
import time

from cloneforge import enumerate_minimal_clones, is_rigid, make_relation


def candidate_relations(k, arity, rng, attempts):
    universe = list(itertools.product(range(k), repeat=arity))
    for _ in range(attempts):
        size = rng.randrange(2, len(universe))
        yield make_relation(k, arity, rng.sample(universe, size))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--arity", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--attempts", type=int, default=20000)
    parser.add_argument("--count", type=int, default=3,
                        help="stop after this many rigid relations")
    args = parser.parse_args()

    print(f"building the minimal-clone generator list for k={args.k} ...")
    start = time.monotonic()
    census = enumerate_minimal_clones(args.k)
    generators = [
        op for c in census.classes for op in c.clone_representatives
    ]
    print(
        f"  {len(generators)} generators "
        f"({time.monotonic() - start:.1f}s)"
    )

    rng = random.Random(args.seed)
    found = 0
    tested = 0
    start = time.monotonic()
    for rho in candidate_relations(args.k, args.arity, rng, args.attempts):
        tested += 1
        if is_rigid(rho, generators):
            found += 1
            print(f"rigid: {list(rho.tuples)}  (candidate #{tested})")
            if found >= args.count:
                break
    elapsed = time.monotonic() - start
    print(f"{found} rigid relations out of {tested} candidates "
          f"in {elapsed:.1f}s")


if __name__ == "__main__":
    main()
