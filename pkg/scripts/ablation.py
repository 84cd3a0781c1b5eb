#!/usr/bin/env python3
"""Compare search variants on random instances and the smoke benchmark.

Reports solved counts and mean steps on solved instances for each variant.
"""
import argparse
import statistics
from pathlib import Path

from lsia.frontend import read_formula, to_cnf
from lsia.generate import InstanceShape, random_instance
from lsia.search import SearchParams, solve

ROOT = Path(__file__).resolve().parent.parent
VARIANTS = ["default", "fix_1", "focused", "extended", "score_only"]


def workload(n, linear_only):
    shape = InstanceShape(max_degree=1) if linear_only else InstanceShape()
    for seed in range(n):
        ast, decls = random_instance(seed, shape)
        yield f"random-{seed}", to_cnf(ast, decls)
    for path in sorted((ROOT / "benchmarks" / "smoke").glob("*.smt2")):
        yield path.stem, read_formula(path)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=200, help="number of random instances")
    ap.add_argument("--max-steps", type=int, default=2000)
    ap.add_argument("--linear", action="store_true", help="generate linear instances only")
    ap.add_argument("--variants", nargs="+", default=VARIANTS)
    args = ap.parse_args()

    formulas = list(workload(args.n, args.linear))
    print(f"{'variant':12s} {'solved':>8s} {'mean steps':>11s}")
    for v in args.variants:
        steps = []
        for i, (_, f) in enumerate(formulas):
            r = solve(f, SearchParams(seed=i, max_steps=args.max_steps, variant=v))
            if r.sat:
                steps.append(r.stats.steps)
        mean = statistics.mean(steps) if steps else float("nan")
        print(f"{v:12s} {len(steps):>4d}/{len(formulas):<3d} {mean:11.1f}")


if __name__ == "__main__":
    main()
