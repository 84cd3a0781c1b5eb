#!/usr/bin/env python3
"""Differential check of the engine against brute-force enumeration.

Every sat answer is validated on the original formula; instances the oracle
proves satisfiable inside the box but the engine misses are listed.
"""
import argparse
import sys

from lsia.frontend import to_cnf
from lsia.generate import random_instance
from lsia.oracle import Box, SpaceTooLarge, brute_force, eval_ast
from lsia.search import SearchParams, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=500)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--radius", type=int, default=20)
    ap.add_argument("--time-limit", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    in_box = solved = invalid = skipped = 0
    missed = []
    for inst in range(args.start, args.start + args.n):
        ast, decls = random_instance(inst)
        r = solve(to_cnf(ast, decls), SearchParams(seed=args.seed, time_limit=args.time_limit))
        if r.sat and not eval_ast(ast, r.model):
            invalid += 1
            print(f"instance {inst}: invalid model {r.model}")
        try:
            box_sat = brute_force(ast, Box(args.radius), declarations=decls, cap=2 * 10**7).sat
        except SpaceTooLarge:
            skipped += 1
            continue
        if box_sat:
            in_box += 1
            solved += r.sat
            if not r.sat:
                missed.append(inst)
    rate = solved / in_box if in_box else float("nan")
    print(f"in-box sat: {in_box}  solved: {solved} ({rate:.1%})  invalid: {invalid}  skipped: {skipped}")
    if missed:
        print("missed:", " ".join(map(str, missed)))
    return 1 if invalid else 0


if __name__ == "__main__":
    sys.exit(main())
