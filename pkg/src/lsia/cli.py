"""Batch driver: ``lsia FILE.smt2`` prints ``sat`` plus a model, or ``unknown``.

Exit codes: 10 sat, 0 unknown, 1 input or usage error, 2 a sat model failed
validation against the original assertions.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing as mp
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .formula import Formula
from .frontend import BoolConst, ParseError, parse_script, to_cnf
from .oracle import eval_ast
from .search import SearchParams, SoundnessError, Stats, solve

EXIT_SAT = 10
EXIT_UNKNOWN = 0
EXIT_INPUT = 1
EXIT_INVALID = 2


@dataclass
class RunConfig:
    input: str
    params: SearchParams
    validate: bool = True
    stats: bool = False
    trace: str | None = None
    portfolio: int = 1
    gcd_reduce: bool = True


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    d = SearchParams()
    p = _Parser(prog="lsia", description="Local-search solver for QF_LIA / QF_IDL / QF_NIA.")
    p.add_argument("input", help="SMT-LIB 2 file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=1200.0, help="seconds (default 1200)")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--L", type=float, default=d.L, help="episode length factor")
    p.add_argument("--t", type=int, default=d.t, help="BMS sample size")
    p.add_argument("--tt-base", type=int, default=d.tt_base)
    p.add_argument("--tt-rand", type=int, default=d.tt_rand)
    p.add_argument("--max-no-improve", type=int, default=d.max_no_improve)
    p.add_argument("--sp", type=float, default=d.sp, help="PAWS smoothing probability")
    p.add_argument("--variant", default=d.variant,
                   help="default, fix_<n>, focused, extended or score_only")
    p.add_argument("--validate", dest="validate", action="store_true", default=True)
    p.add_argument("--no-validate", dest="validate", action="store_false")
    p.add_argument("--stats", action="store_true", help="print search statistics to stderr")
    p.add_argument("--trace", metavar="PATH", help="write one JSON line per step")
    p.add_argument("--portfolio", type=int, default=1, metavar="K", help="run K seeds in parallel")
    p.add_argument("--no-gcd-reduce", dest="gcd_reduce", action="store_false")
    return p


def config_from_args(ns) -> RunConfig:
    params = SearchParams(
        L=ns.L, t=ns.t, tt_base=ns.tt_base, tt_rand=ns.tt_rand, max_no_improve=ns.max_no_improve,
        sp=ns.sp, seed=ns.seed, time_limit=ns.time_limit, max_steps=ns.max_steps, variant=ns.variant,
    )
    if ns.portfolio < 1:
        raise ValueError("--portfolio must be at least 1")
    return RunConfig(ns.input, params, ns.validate, ns.stats, ns.trace, ns.portfolio, ns.gcd_reduce)


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v) if v >= 0 else f"(- {-v})"


def format_model(model: dict, declarations) -> str:
    lines = ["(model"]
    for name, sort in declarations:
        if name in model:
            lines.append(f"  (define-fun {name} () {sort} {format_value(model[name])})")
    lines.append(")")
    return "\n".join(lines)


def _trace_writer(fh, formula: Formula):
    def write(step, mode, op, cost):
        rec = {"step": step, "mode": mode, "cost": cost}
        if op is not None:
            if op.value is None:
                rec.update(flip=formula.bool_names[op.var])
            else:
                rec.update(var=formula.int_names[op.var], value=op.value)
        fh.write(json.dumps(rec) + "\n")
    return write


def _worker(formula, params, stop, queue):
    try:
        r = solve(formula, params, should_stop=stop.is_set)
    except SoundnessError as e:
        queue.put(("invalid", str(e), None))
        return
    if r.sat:
        stop.set()
    queue.put((r.status, r.model, r.stats))


def run_portfolio(formula: Formula, params: SearchParams, k: int):
    """Run ``k`` engines with seeds ``seed..seed+k-1``; the first sat stops the rest."""
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    stop, queue = ctx.Event(), ctx.Queue()
    procs = []
    for i in range(k):
        p = SearchParams(**{f.name: getattr(params, f.name) for f in fields(params)})
        p.seed = params.seed + i
        procs.append(ctx.Process(target=_worker, args=(formula, p, stop, queue), daemon=True))
    for pr in procs:
        pr.start()
    best = None
    for _ in procs:
        status, payload, stats = queue.get()
        if status == "invalid":
            stop.set()
            raise SoundnessError(payload)
        if status == "sat" and best is None:
            best = (payload, stats)
            stop.set()
    for pr in procs:
        pr.join()
    return best


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    path = Path(cfg.input)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: cannot read {path}: {e.strerror}", file=err)
        return EXIT_INPUT
    try:
        script = parse_script(text)
        ast = script.ast if script.assertions else BoolConst(True)
        formula = to_cnf(ast, script.declarations, gcd_reduce=cfg.gcd_reduce)
    except ParseError as e:
        print(f"{path}:{e}", file=err)
        return EXIT_INPUT
    for w in script.warnings:
        print(f"warning: {w}", file=err)

    try:
        if cfg.portfolio > 1:
            if cfg.trace:
                print("warning: --trace is ignored with --portfolio", file=err)
            found = run_portfolio(formula, cfg.params, cfg.portfolio)
            model, stats = found if found else (None, Stats())
        else:
            trace_fh = open(cfg.trace, "w", encoding="utf-8") if cfg.trace else None
            try:
                trace = _trace_writer(trace_fh, formula) if trace_fh else None
                r = solve(formula, cfg.params, trace=trace)
            finally:
                if trace_fh:
                    trace_fh.close()
            model, stats = r.model, r.stats
            if not r.sat and r.reason and cfg.stats:
                print(f"reason: {r.reason}", file=err)
    except SoundnessError as e:
        print(f"error: {e}", file=err)
        return EXIT_INVALID

    if cfg.stats:
        print(
            f"steps: {stats.steps}\nrestarts: {stats.restarts}\nmode_switches: {stats.mode_switches}\n"
            f"weight_updates: {stats.weight_updates}\ntime: {stats.time:.3f}",
            file=err,
        )
    if model is None:
        print("unknown", file=out)
        return EXIT_UNKNOWN
    if cfg.validate and not eval_ast(formula.original_ast, model):
        print(f"error: model fails validation: {model}", file=err)
        return EXIT_INVALID
    print("sat", file=out)
    print(format_model(model, formula.declarations), file=out)
    return EXIT_SAT


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
