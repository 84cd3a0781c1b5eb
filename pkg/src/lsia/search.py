"""Two-mode local search over Boolean flips and integer critical moves."""

from __future__ import annotations

import logging
import random
import re
import time
from dataclasses import dataclass, field

from .formula import LIA, Formula
from .operators import (
    Operation,
    equality_fallback,
    false_literals,
    flip_op,
    move,
    ops_from_literals,
    within_capacity,
)
from .oracle import eval_ast
from .state import SearchState, init_assignment

log = logging.getLogger(__name__)

BOOLEAN = "bool"
INTEGER = "int"

# returned by an idle walk step (all candidates tabu) while the other mode
# still has falsified clauses to work on; ends the episode
STUCK = "stuck"

VARIANTS = ("default", "fix_1", "fix_5", "focused", "extended", "score_only")
_FIX = re.compile(r"fix_(\d+)$")


@dataclass
class SearchParams:
    L: float = 20
    t: int = 45
    tt_base: int = 3
    tt_rand: int = 10
    max_no_improve: int = 500_000
    sp: float = 0.0003
    seed: int = 0
    time_limit: float | None = None
    max_steps: int | None = None
    variant: str = "default"

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("L must be positive")
        if self.t <= 0:
            raise ValueError("t must be positive")
        if not 0.0 <= self.sp <= 1.0:
            raise ValueError("sp must lie in [0, 1]")
        if self.max_no_improve <= 0:
            raise ValueError("max_no_improve must be positive")
        if self.tt_base < 0 or self.tt_rand < 0:
            raise ValueError("tabu tenure components must be non-negative")
        if self.variant not in VARIANTS and not _FIX.match(self.variant):
            raise ValueError(f"unknown variant {self.variant!r}; choose from {VARIANTS} or fix_<n>")

    @property
    def fixed_increment(self) -> int | None:
        m = _FIX.match(self.variant)
        return int(m.group(1)) if m else None


@dataclass
class Stats:
    steps: int = 0
    restarts: int = 0
    mode_switches: int = 0
    weight_updates: int = 0
    time: float = 0.0


@dataclass
class Result:
    status: str  # "sat" or "unknown"
    model: dict | None = None
    reason: str | None = None  # timeout | step-limit | contradictory-bounds | trivially-unsat | stopped
    stats: Stats = field(default_factory=Stats)

    @property
    def sat(self) -> bool:
        return self.status == "sat"


class SoundnessError(RuntimeError):
    """A model claimed satisfying fails validation on the original assertions."""


class StallMonitor:
    """Fires when the falsified-clause count has not improved for ``limit`` steps."""

    def __init__(self, limit: int):
        self.limit = limit
        self.reset(None, 0)

    def reset(self, n_false, step):
        self.best = n_false
        self.since = step

    def observe(self, n_false: int, step: int) -> bool:
        if self.best is None or n_false < self.best:
            self.reset(n_false, step)
            return False
        return step - self.since >= self.limit


def _pick_best(ops, key, rng):
    """Argmax of ``key`` over ``ops`` with uniform random tie-breaking."""
    best, best_val, ties = None, None, 0
    for op in ops:
        v = key(op)
        if best_val is None or v > best_val:
            best, best_val, ties = op, v, 1
        elif v == best_val:
            ties += 1
            if rng.randrange(ties) == 0:
                best = op
    return best, best_val


class Engine:
    def __init__(self, formula: Formula, params: SearchParams | None = None, *,
                 trace=None, on_mode_entry=None, should_stop=None, debug=False):
        self.formula = formula
        self.params = params or SearchParams()
        self.rng = random.Random(self.params.seed)
        self.state = SearchState(formula, self.rng, debug=debug)
        self.trace = trace
        self.on_mode_entry = on_mode_entry
        self.should_stop = should_stop
        self.stats = Stats()
        self.theory = formula.theory
        self.fixed_inc = self.params.fixed_increment
        self.monitor = StallMonitor(self.params.max_no_improve)
        self._clear_tabu()

    # ------------------------------------------------------------------
    # tabu

    def _clear_tabu(self):
        self.bool_tabu = [-1] * self.formula.n_bool
        self.inc_tabu = [-1] * self.formula.n_int
        self.dec_tabu = [-1] * self.formula.n_int

    def allowed(self, op: Operation) -> bool:
        s = self.state.step
        if op.value is None:
            return s > self.bool_tabu[op.var]
        if op.value > self.state.int_vals[op.var]:
            return s > self.inc_tabu[op.var]
        return s > self.dec_tabu[op.var]

    def tenure(self) -> int:
        p = self.params
        return p.tt_base + (self.rng.randrange(p.tt_rand) if p.tt_rand > 0 else 0)

    def execute(self, op: Operation, mode: str) -> bool:
        """Apply ``op``, update tabu, and report whether the cost went down."""
        st = self.state
        s = st.step
        until = s + self.tenure()
        if op.value is None:
            self.bool_tabu[op.var] = until
        elif op.value > st.int_vals[op.var]:
            self.dec_tabu[op.var] = until
        else:
            self.inc_tabu[op.var] = until
        before = st.cost
        st.apply(op)
        if self.trace is not None:
            self.trace(s, mode, op, st.cost)
        return st.cost < before

    def update_weights(self):
        self.stats.weight_updates += 1
        self.state.update_weights(self.params.sp, self.rng)

    def _random_falsified(self, want_int: bool) -> int:
        st = self.state
        has = st.clause_has_int if want_int else st.clause_has_bool
        pool = [c for c in st.falsified if has[c]]
        assert pool, "mode step without a falsified clause of its kind"
        return pool[self.rng.randrange(len(pool))]

    # ------------------------------------------------------------------
    # Boolean mode

    def boolean_step(self) -> bool:
        st = self.state
        cands: dict[int, None] = {}
        for c in st.falsified:
            for is_arith, v, _ in st.clause_lits[c]:
                if not is_arith:
                    cands[v] = None
        flips = [flip_op(v) for v in cands]
        op, sc = _pick_best([f for f in flips if self.allowed(f)], st.score, self.rng)
        if op is not None and sc > 0:
            return self.execute(op, BOOLEAN)
        self.update_weights()
        c = self._random_falsified(want_int=False)
        flips = [flip_op(v) for is_arith, v, _ in st.clause_lits[c] if not is_arith]
        free = [f for f in flips if self.allowed(f)]
        if not free:
            self._idle(BOOLEAN)
            return STUCK if st.n_false_int > 0 else False
        op, _ = _pick_best(free, st.score, self.rng)
        return self.execute(op, BOOLEAN)

    # ------------------------------------------------------------------
    # Integer mode

    def _ops(self, keys, allowed=True):
        return ops_from_literals(
            self.state, keys, self.rng, self.theory, self.fixed_inc, self.allowed if allowed else None
        )

    def _best_decreasing(self, ops):
        op, sc = _pick_best(ops, self.state.score, self.rng)
        return op if op is not None and sc > 0 else None

    def integer_step(self) -> bool:
        st = self.state
        variant = self.params.variant
        s_keys = false_literals(st, in_falsified=True)
        if variant == "extended":
            keys = s_keys + false_literals(st, in_falsified=False)
            op = self._best_decreasing(self._ops(keys))
        else:
            s_ops = self._ops(s_keys)
            op = self._best_decreasing(s_ops)
            if op is None and variant != "focused":
                seen = set(s_ops)
                rest = [o for o in self._ops(false_literals(st, in_falsified=False)) if o not in seen]
                if len(rest) > self.params.t:
                    rest = self.rng.sample(rest, self.params.t)
                op = self._best_decreasing(rest)
        if op is not None:
            return self.execute(op, INTEGER)

        self.update_weights()
        c = self._random_falsified(want_int=True)
        keys = [(i, pos) for is_arith, i, pos in st.clause_lits[c] if is_arith]
        ops = self._ops(keys, allowed=False)
        if not ops:
            op = self._stall_move(keys)
            if self.allowed(op) and within_capacity(op):
                return self.execute(op, INTEGER)
            return self._idle(INTEGER)
        free = [o for o in ops if self.allowed(o)]
        if not free:
            self._idle(INTEGER)
            return STUCK if st.n_false_bool > 0 else False
        use_dscore = self.theory == LIA and variant != "score_only"
        op, _ = _pick_best(free, st.dscore if use_dscore else st.score, self.rng)
        return self.execute(op, INTEGER)

    def _idle(self, mode) -> bool:
        """Let one step pass without a move so that tabu entries can expire."""
        self.state.step += 1
        if self.trace is not None:
            self.trace(self.state.step - 1, mode, None, self.state.cost)
        return False

    def _stall_move(self, keys) -> Operation:
        """±1 move when a clause yields no critical move at all."""
        st = self.state
        a, pos = keys[self.rng.randrange(len(keys))]
        lit = st.literal(a, pos)
        if st.atom_eq[a] and pos:
            return equality_fallback(lit, st.int_vals, self.rng, st.delta[a])
        vs = st.atom_vars[a]
        x = vs[self.rng.randrange(len(vs))]
        cur = st.int_vals[x]
        return move(x, cur + self.rng.choice((1, -1)), cur, lit)

    # ------------------------------------------------------------------
    # main loop

    def restart(self):
        st = self.state
        st.weights = [1] * st.n_clauses
        st.reset(*init_assignment(self.formula, self.rng))
        self._clear_tabu()
        self.monitor.reset(len(st.falsified), st.step)
        self.stats.restarts += 1

    def _finish(self, status, reason=None, model=None, t0=0.0) -> Result:
        self.stats.steps = self.state.step
        self.stats.time = time.perf_counter() - t0
        return Result(status, model, reason, self.stats)

    def _sat(self, t0) -> Result:
        model = self.state.model()
        ok = (
            eval_ast(self.formula.original_ast, model)
            if self.formula.original_ast is not None
            else self.formula.holds(self.state.bool_vals, self.state.int_vals)
        )
        if not ok:
            raise SoundnessError(f"model fails validation: {model}")
        return self._finish("sat", None, model, t0)

    def run(self) -> Result:
        t0 = time.perf_counter()
        p = self.params
        st = self.state
        deadline = t0 + p.time_limit if p.time_limit is not None else None
        if self.formula.trivially_false:
            return self._finish("unknown", "trivially-unsat", t0=t0)
        if self.formula.bounds_conflict:
            return self._finish("unknown", "contradictory-bounds", t0=t0)
        if not st.falsified:
            return self._sat(t0)
        self.monitor.reset(len(st.falsified), st.step)
        mode = INTEGER if st.has_int_literals else BOOLEAN
        current = None
        while True:
            pb, pi = st.literal_proportions()
            share = pi if mode == INTEGER else pb
            if share == 0:
                mode = BOOLEAN if mode == INTEGER else INTEGER
                share = pi if mode == INTEGER else pb
            if current is not None and mode != current:
                self.stats.mode_switches += 1
            current = mode
            if self.on_mode_entry is not None:
                self.on_mode_entry(st.step, mode, pb, pi)
            budget = p.L * share
            non_improve = 0
            step_fn = self.integer_step if mode == INTEGER else self.boolean_step
            while non_improve < budget:
                if (st.n_false_int if mode == INTEGER else st.n_false_bool) == 0:
                    break
                if p.max_steps is not None and st.step >= p.max_steps:
                    return self._finish("unknown", "step-limit", t0=t0)
                if deadline is not None and time.perf_counter() >= deadline:
                    return self._finish("unknown", "timeout", t0=t0)
                if self.should_stop is not None and st.step % 64 == 0 and self.should_stop():
                    return self._finish("unknown", "stopped", t0=t0)
                improved = step_fn()
                if improved is STUCK:
                    break
                if not improved:
                    non_improve += 1
                if not st.falsified:
                    return self._sat(t0)
                if self.monitor.observe(len(st.falsified), st.step):
                    self.restart()
                    break
            mode = BOOLEAN if mode == INTEGER else INTEGER


def solve(formula: Formula, params: SearchParams | None = None, **kwargs) -> Result:
    """Run the local search; returns a sat result with a validated model, or unknown."""
    return Engine(formula, params, **kwargs).run()
