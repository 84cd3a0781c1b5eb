#!/usr/bin/env python3
"""Run the engine on every file of the smoke benchmark and print a table."""
import argparse
from pathlib import Path

from lsia.frontend import read_formula
from lsia.search import SearchParams, solve

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", type=Path, default=ROOT / "benchmarks" / "smoke")
    ap.add_argument("--time-limit", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--variant", default="default")
    args = ap.parse_args()

    files = sorted(args.dir.glob("*.smt2"))
    solved = 0
    for path in files:
        r = solve(read_formula(path), SearchParams(seed=args.seed, time_limit=args.time_limit, variant=args.variant))
        solved += r.sat
        print(f"{path.stem:24s} {r.status:8s} steps={r.stats.steps:<8d} time={r.stats.time:.3f}s")
    print(f"solved {solved}/{len(files)} ({solved / max(len(files), 1):.1%})")


if __name__ == "__main__":
    main()
