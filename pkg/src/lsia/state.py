"""Mutable search state with incremental maintenance of literal values,
clause satisfaction, distances to satisfaction and weighted cost."""

from __future__ import annotations

import random

from .formula import EQ, Formula, Literal


def init_assignment(formula: Formula, rng: random.Random):
    """Initial complete assignment: Booleans true, integers from unit bounds.

    Integers bounded on both sides get a uniform value in ``[lb, ub]``,
    one-sided ones sit on their bound, unbounded ones start at 0.
    """
    bool_vals = [True] * formula.n_bool
    int_vals = [0] * formula.n_int
    for x, (lb, ub) in formula.bounds.items():
        if lb is not None and ub is not None:
            int_vals[x] = rng.randint(lb, ub) if lb <= ub else lb
        elif ub is not None:
            int_vals[x] = ub
        elif lb is not None:
            int_vals[x] = lb
    return bool_vals, int_vals


def dtt_of(is_eq: bool, positive: bool, delta: int) -> int:
    """Distance to truth of an arithmetic literal whose atom value is ``delta``."""
    if is_eq:
        return 0 if (delta == 0) == positive else 1
    if positive:
        return delta if delta > 0 else 0
    return 1 - delta if delta < 1 else 0


def atom_true(is_eq: bool, delta: int) -> bool:
    return delta == 0 if is_eq else delta <= 0


def compute_dtt(lit: Literal, bool_vals, int_vals) -> int:
    if lit.atom is None:
        return 0 if bool_vals[lit.var] == lit.positive else 1
    return dtt_of(lit.atom.rel == EQ, lit.positive, lit.atom.delta(int_vals))


def compute_dts(clause, bool_vals, int_vals) -> int:
    return min(compute_dtt(l, bool_vals, int_vals) for l in clause.literals)


class IndexedSet:
    """Set of ints with O(1) add/remove and indexable order."""

    def __init__(self):
        self.items: list[int] = []
        self.pos: dict[int, int] = {}

    def add(self, x):
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def remove(self, x):
        i = self.pos.pop(x)
        last = self.items.pop()
        if last != x:
            self.items[i] = last
            self.pos[last] = i

    def __contains__(self, x):
        return x in self.pos

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


class SearchState:
    """Assignment plus every cache the scoring functions read.

    Arithmetic literals are referenced as ``(atom_index, positive)``; clause
    literals are stored as ``(is_arith, index, positive)`` triples.
    """

    def __init__(self, formula: Formula, rng: random.Random | None = None, *,
                 assignment=None, debug: bool = False):
        self.formula = formula
        self.rng = rng if rng is not None else random.Random(0)
        self.debug = debug

        self.atoms = formula.atoms()
        index = {a: i for i, a in enumerate(self.atoms)}
        n_atoms = len(self.atoms)
        self.atom_terms = [a.lhs.terms for a in self.atoms]
        self.atom_rhs = [a.rhs for a in self.atoms]
        self.atom_eq = [a.rel == EQ for a in self.atoms]
        self.atom_vars = [a.lhs.variables() for a in self.atoms]
        self.atom_lin = [
            {m[0][0]: c for c, m in a.lhs.terms} if a.lhs.is_linear() else None for a in self.atoms
        ]
        self.var_atoms: list[list[int]] = [[] for _ in range(formula.n_int)]
        for i, vs in enumerate(self.atom_vars):
            for v in vs:
                self.var_atoms[v].append(i)

        self.clause_lits: list[tuple] = []
        self.atom_occ: list[list[tuple[int, bool]]] = [[] for _ in range(n_atoms)]
        self.bool_occ: list[list[tuple[int, bool]]] = [[] for _ in range(formula.n_bool)]
        self.lit_clauses: dict[tuple[int, bool], list[int]] = {}  # unique arith literal -> clauses
        self.clause_has_bool = []
        self.clause_has_int = []
        self.clause_n_bool = []
        self.clause_n_int = []
        for ci, clause in enumerate(formula.clauses):
            lits = []
            for lit in clause.literals:
                if lit.atom is None:
                    lits.append((False, lit.var, lit.positive))
                    self.bool_occ[lit.var].append((ci, lit.positive))
                else:
                    a = index[lit.atom]
                    lits.append((True, a, lit.positive))
                    self.atom_occ[a].append((ci, lit.positive))
                    self.lit_clauses.setdefault((a, lit.positive), []).append(ci)
            self.clause_lits.append(tuple(lits))
            nb = sum(1 for l in lits if not l[0])
            self.clause_n_bool.append(nb)
            self.clause_n_int.append(len(lits) - nb)
            self.clause_has_bool.append(nb > 0)
            self.clause_has_int.append(len(lits) > nb)
        self.n_clauses = len(formula.clauses)
        self._lit_objs = {key: Literal.arith(self.atoms[key[0]], key[1]) for key in self.lit_clauses}
        self.has_int_literals = any(self.clause_has_int)
        self.has_bool_literals = any(self.clause_has_bool)

        self.weights = [1] * self.n_clauses
        self.step = 0
        if assignment is None:
            assignment = init_assignment(formula, self.rng)
        self.reset(*assignment)

    def literal(self, a: int, positive: bool) -> Literal:
        lit = self._lit_objs.get((a, positive))
        return lit if lit is not None else Literal.arith(self.atoms[a], positive)

    # ------------------------------------------------------------------
    # full (re)computation

    def reset(self, bool_vals, int_vals):
        self.bool_vals = list(bool_vals)
        self.int_vals = list(int_vals)
        self.recompute()

    def recompute(self):
        self.delta = [self._eval_atom(a) for a in range(len(self.atoms))]
        self.sat_count = [0] * self.n_clauses
        self.dts = [0] * self.n_clauses
        self.falsified = IndexedSet()
        self.cost = 0
        self.n_false_bool = 0
        self.n_false_int = 0
        for c in range(self.n_clauses):
            self.sat_count[c] = sum(1 for l in self.clause_lits[c] if self.lit_true(l))
            self.dts[c] = self._clause_dts(c)
            if self.sat_count[c] == 0:
                self._mark_false(c)

    def set_weights(self, weights):
        self.weights = list(weights)
        self.cost = sum(self.weights[c] for c in self.falsified)

    def _eval_atom(self, a, x=None, v=None) -> int:
        vals = self.int_vals
        total = 0
        for c, m in self.atom_terms[a]:
            t = c
            for var, e in m:
                t *= (v if var == x else vals[var]) ** e
            total += t
        return total - self.atom_rhs[a]

    def atom_delta_after(self, a, x, v) -> int:
        """Value of atom ``a`` if integer variable ``x`` were set to ``v``."""
        lin = self.atom_lin[a]
        if lin is not None:
            return self.delta[a] + lin[x] * (v - self.int_vals[x])
        return self._eval_atom(a, x, v)

    def lit_true(self, lit) -> bool:
        is_arith, i, pos = lit
        if is_arith:
            d = self.delta[i]
            return ((d == 0) if self.atom_eq[i] else (d <= 0)) == pos
        return self.bool_vals[i] == pos

    def lit_dtt(self, lit) -> int:
        is_arith, i, pos = lit
        if is_arith:
            return dtt_of(self.atom_eq[i], pos, self.delta[i])
        return 0 if self.bool_vals[i] == pos else 1

    def _clause_dts(self, c) -> int:
        return min(self.lit_dtt(l) for l in self.clause_lits[c])

    def _mark_false(self, c):
        self.falsified.add(c)
        self.cost += self.weights[c]
        if self.clause_has_bool[c]:
            self.n_false_bool += 1
        if self.clause_has_int[c]:
            self.n_false_int += 1

    def _mark_true(self, c):
        self.falsified.remove(c)
        self.cost -= self.weights[c]
        if self.clause_has_bool[c]:
            self.n_false_bool -= 1
        if self.clause_has_int[c]:
            self.n_false_int -= 1

    # ------------------------------------------------------------------
    # incremental update

    def apply(self, op):
        """Execute ``op`` and return the operation that undoes it."""
        touched: dict[int, None] = {}
        if op.value is None:
            v = op.var
            old = self.bool_vals[v]
            self.bool_vals[v] = not old
            for c, pos in self.bool_occ[v]:
                self.sat_count[c] += -1 if old == pos else 1
                touched[c] = None
            undo = op
        else:
            x, new = op.var, op.value
            old = self.int_vals[x]
            if new == old:
                raise ValueError(f"no-op move on integer variable {x}")
            for a in self.var_atoms[x]:
                od = self.delta[a]
                nd = self.atom_delta_after(a, x, new)
                self.delta[a] = nd
                eq = self.atom_eq[a]
                was, now = atom_true(eq, od), atom_true(eq, nd)
                for c, pos in self.atom_occ[a]:
                    if was != now:
                        self.sat_count[c] += 1 if now == pos else -1
                    touched[c] = None
            self.int_vals[x] = new
            undo = type(op)(x, old)
        for c in touched:
            self.dts[c] = self._clause_dts(c)
            is_false = self.sat_count[c] == 0
            if is_false and c not in self.falsified:
                self._mark_false(c)
            elif not is_false and c in self.falsified:
                self._mark_true(c)
        self.step += 1
        if self.debug:
            self.check()
        return undo

    # ------------------------------------------------------------------
    # scoring

    def _sat_changes(self, op) -> dict[int, int]:
        changes: dict[int, int] = {}
        if op.value is None:
            val = self.bool_vals[op.var]
            for c, pos in self.bool_occ[op.var]:
                changes[c] = changes.get(c, 0) + (-1 if val == pos else 1)
        else:
            x, v = op.var, op.value
            for a in self.var_atoms[x]:
                eq = self.atom_eq[a]
                was = atom_true(eq, self.delta[a])
                now = atom_true(eq, self.atom_delta_after(a, x, v))
                if was == now:
                    continue
                for c, pos in self.atom_occ[a]:
                    changes[c] = changes.get(c, 0) + (1 if now == pos else -1)
        return changes

    def score(self, op) -> int:
        """Weighted cost decrease of ``op`` (positive means decreasing)."""
        s = 0
        for c, d in self._sat_changes(op).items():
            if not d:
                continue
            old = self.sat_count[c]
            new = old + d
            if old == 0 and new > 0:
                s += self.weights[c]
            elif old > 0 and new == 0:
                s -= self.weights[c]
        return s

    def dscore(self, op) -> int:
        """Weighted decrease of the summed distance to satisfaction."""
        if op.value is None:
            return self.score(op)
        x, v = op.var, op.value
        new_delta = {a: self.atom_delta_after(a, x, v) for a in self.var_atoms[x]}
        clauses: dict[int, None] = {}
        for a in new_delta:
            for c, _ in self.atom_occ[a]:
                clauses[c] = None
        s = 0
        for c in clauses:
            best = None
            for is_arith, i, pos in self.clause_lits[c]:
                if is_arith:
                    d = dtt_of(self.atom_eq[i], pos, new_delta.get(i, self.delta[i]))
                else:
                    d = 0 if self.bool_vals[i] == pos else 1
                if best is None or d < best:
                    best = d
                    if d == 0:
                        break
            s += (self.dts[c] - best) * self.weights[c]
        return s

    # ------------------------------------------------------------------
    # clause weighting

    def update_weights(self, sp: float, rng: random.Random | None = None) -> bool:
        """Probabilistic PAWS step; returns True when the increment branch ran."""
        rng = rng or self.rng
        if rng.random() < sp:
            for c in range(self.n_clauses):
                if self.sat_count[c] > 0 and self.weights[c] > 1:
                    self.weights[c] -= 1
            return False
        for c in self.falsified:
            self.weights[c] += 1
        self.cost += len(self.falsified)
        return True

    # ------------------------------------------------------------------
    # queries

    def literal_proportions(self) -> tuple[float, float]:
        """(P_b, P_i): share of Boolean / integer literal occurrences in falsified clauses."""
        nb = sum(self.clause_n_bool[c] for c in self.falsified)
        ni = sum(self.clause_n_int[c] for c in self.falsified)
        total = nb + ni
        if total == 0:
            return 0.0, 0.0
        return nb / total, ni / total

    def model(self) -> dict:
        f = self.formula
        out = {n: self.bool_vals[i] for i, n in enumerate(f.bool_names[: f.n_declared_bool])}
        out.update({n: self.int_vals[i] for i, n in enumerate(f.int_names)})
        return out

    def snapshot(self):
        return (
            tuple(self.bool_vals), tuple(self.int_vals), tuple(self.delta),
            tuple(self.sat_count), tuple(self.dts), tuple(sorted(self.falsified)),
            self.cost, self.n_false_bool, self.n_false_int, tuple(self.weights),
        )

    def check(self):
        """Compare every cache against recomputation from scratch."""
        delta = [self._eval_atom(a) for a in range(len(self.atoms))]
        assert delta == self.delta, "delta cache diverged"
        f = self.formula
        for c, clause in enumerate(f.clauses):
            sc = sum(1 for l in clause.literals if l.holds(self.bool_vals, self.int_vals))
            assert sc == self.sat_count[c], f"sat_count diverged on clause {c}"
            assert compute_dts(clause, self.bool_vals, self.int_vals) == self.dts[c], f"dts diverged on clause {c}"
            assert (sc == 0) == (c in self.falsified), f"falsified set diverged on clause {c}"
        assert self.cost == sum(self.weights[c] for c in self.falsified), "cost diverged"
        assert self.n_false_bool == sum(1 for c in self.falsified if self.clause_has_bool[c])
        assert self.n_false_int == sum(1 for c in self.falsified if self.clause_has_int[c])
        assert min(self.weights, default=1) >= 1


def apply_operation(state: SearchState, op):
    return state.apply(op)


def score(state: SearchState, op) -> int:
    return state.score(op)


def dscore(state: SearchState, op) -> int:
    return state.dscore(op)


def update_weights_paws(state: SearchState, sp: float, rng: random.Random | None = None) -> bool:
    return state.update_weights(sp, rng)
