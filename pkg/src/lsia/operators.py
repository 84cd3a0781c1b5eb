"""Candidate operations: Boolean flips and critical moves.

All root arithmetic is exact (``math.isqrt`` and floor division); a
floor/ceil off by one would hand back a move that leaves its literal false.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .formula import EQ, LE, LIA, Literal

DEGREE_TOO_HIGH = "degree>2"
CONSTANT = "constant"

# largest integer value the search will assign (signed 64-bit range); moves
# beyond it are dropped from the candidate pools
VALUE_LIMIT = 2**63 - 1


@dataclass(frozen=True)
class Operation:
    """``value is None`` means flip Boolean ``var``; otherwise assign integer ``var``."""

    var: int
    value: int | None = None
    source: Literal | None = field(default=None, compare=False, repr=False)
    direction: int = field(default=0, compare=False)

    @property
    def is_flip(self) -> bool:
        return self.value is None


def within_capacity(op: Operation) -> bool:
    return op.value is None or -VALUE_LIMIT <= op.value <= VALUE_LIMIT


def flip_op(x: int, source: Literal | None = None) -> Operation:
    return Operation(x, None, source)


def move(x: int, value: int, current: int, source: Literal | None = None) -> Operation:
    return Operation(x, value, source, (value > current) - (value < current))


def _ceil_div(n: int, d: int) -> int:
    return -(-n // d)


def _coefficient(atom, x) -> int:
    for c, m in atom.lhs.terms:
        if m == ((x, 1),):
            return c
    raise ValueError(f"variable {x} does not occur linearly in {atom}")


# --------------------------------------------------------------------------
# LIA


def cm_lia(lit: Literal, x: int, values: Sequence[int], delta: int | None = None) -> list[Operation]:
    """Critical moves of ``x`` for a falsified linear literal.

    Empty when the literal is already true or, for equalities, when the
    coefficient of ``x`` does not divide the current offset.
    """
    atom = lit.atom
    a = _coefficient(atom, x)
    d = atom.delta(values) if delta is None else delta
    cur = values[x]
    if atom.rel == LE:
        if lit.positive:
            if d <= 0:
                return []
            step = _ceil_div(d, abs(a))
            return [move(x, cur - step if a > 0 else cur + step, cur, lit)]
        if d >= 1:
            return []
        step = _ceil_div(1 - d, abs(a))
        return [move(x, cur + step if a > 0 else cur - step, cur, lit)]
    if lit.positive:
        if d == 0 or d % a:
            return []
        return [move(x, cur - d // a, cur, lit)]
    if d != 0:
        return []
    return [move(x, cur + 1, cur, lit), move(x, cur - 1, cur, lit)]


def equality_fallback(lit: Literal, values: Sequence[int], rng: random.Random,
                      delta: int | None = None) -> Operation:
    """±1 move on a random variable of a stalled equality, toward smaller |delta|."""
    atom = lit.atom
    d = atom.delta(values) if delta is None else delta
    x = rng.choice(atom.lhs.variables())
    cur = values[x]
    vals = list(values)
    dist = {}
    for v in (cur + 1, cur - 1):
        vals[x] = v
        dist[v] = abs(atom.delta(vals))
    up, down = dist[cur + 1], dist[cur - 1]
    if min(up, down) < abs(d) and up != down:
        return move(x, cur + 1 if up < down else cur - 1, cur, lit)
    return move(x, cur + rng.choice((1, -1)), cur, lit)


# --------------------------------------------------------------------------
# univariate analysis


class Univariate(NamedTuple):
    """``c2*x**2 + c1*x + c0``."""

    c0: int
    c1: int
    c2: int

    def __call__(self, x: int) -> int:
        return (self.c2 * x + self.c1) * x + self.c0

    @property
    def degree(self) -> int:
        return 2 if self.c2 else 1 if self.c1 else 0


def substitute(lit_or_atom, x: int, values: Sequence[int]):
    """Fix every variable but ``x`` and return ``p(x) - k`` as a :class:`Univariate`.

    Returns :data:`DEGREE_TOO_HIGH` if ``x`` occurs with exponent above 2 and
    :data:`CONSTANT` if no power of ``x`` survives the substitution.
    """
    atom = getattr(lit_or_atom, "atom", None) or lit_or_atom
    coeffs = [-atom.rhs, 0, 0]
    for c, m in atom.lhs.terms:
        e_x = 0
        t = c
        for v, e in m:
            if v == x:
                e_x = e
            else:
                t *= values[v] ** e
        if e_x > 2:
            return DEGREE_TOO_HIGH
        coeffs[e_x] += t
    if coeffs[1] == 0 and coeffs[2] == 0:
        return CONSTANT
    return Univariate(*coeffs)


@dataclass(frozen=True)
class Root:
    floor: int
    ceil: int
    is_integer: bool
    value: Fraction | None  # exact when rational


@dataclass(frozen=True)
class RootProfile:
    roots: tuple[Root, ...]
    signs: tuple[int, ...]  # +1 / -1 on (r_j, r_{j+1}), j = 0..n


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _root(n: int, sgn: int, disc: int, q: int) -> Root:
    """Exact descriptor of ``(n + sgn*sqrt(disc)) / q``."""
    r = math.isqrt(disc)
    if r * r == disc:
        num = n + sgn * r
        fl = num // q
        exact = num % q == 0
        return Root(fl, fl if exact else fl + 1, exact, Fraction(num, q))
    if q < 0:
        n, sgn, q = -n, -sgn, -q
    # floor((n + y) / q) == floor(floor(n + y) / q) for q > 0
    num_floor = n + r if sgn > 0 else n - r - 1
    fl = num_floor // q
    return Root(fl, fl + 1, False, None)


def analyze_roots(p: Univariate) -> RootProfile:
    c0, c1, c2 = p
    if c2 == 0:
        if c1 == 0:
            raise ValueError("constant polynomial has no root profile")
        return RootProfile((_root(-c0, 0, 0, c1),), (-_sign(c1), _sign(c1)))
    disc = c1 * c1 - 4 * c2 * c0
    s = _sign(c2)
    if disc < 0:
        return RootProfile((), (s,))
    if disc == 0:
        return RootProfile((_root(-c1, 0, 0, 2 * c2),), (s, s))
    lo, hi = _root(-c1, -1, disc, 2 * c2), _root(-c1, 1, disc, 2 * c2)
    if c2 < 0:
        lo, hi = hi, lo
    return RootProfile((lo, hi), (s, -s, s))


# --------------------------------------------------------------------------
# NIA


def cm_nia(lit: Literal, x: int, values: Sequence[int], delta: int | None = None) -> list[Operation]:
    """Critical moves of ``x`` for a falsified polynomial literal.

    Every returned move makes ``lit`` true; duplicates and the current value
    are dropped.
    """
    atom = lit.atom
    d = atom.delta(values) if delta is None else delta
    if (d <= 0 if atom.rel == LE else d == 0) == lit.positive:
        return []
    cur = values[x]
    p = substitute(atom, x, values)
    if p == DEGREE_TOO_HIGH or p == CONSTANT:
        return []
    if atom.rel == EQ and not lit.positive:
        return [move(x, v, cur, lit) for v in (cur + 1, cur - 1) if p(v) != 0]

    prof = analyze_roots(p)
    roots, n = prof.roots, len(prof.roots)
    targets: list[int] = []
    if atom.rel == EQ:
        targets = [r.floor for r in roots if r.is_integer]
    elif lit.positive:
        for j, s in enumerate(prof.signs):
            if s > 0:
                continue
            lo = roots[j - 1].ceil if j > 0 else None
            hi = roots[j].floor if j < n else None
            if lo is not None and hi is not None and lo > hi:
                continue
            targets += [v for v in (lo, hi) if v is not None]
        # a double root touching zero from above still satisfies <=
        targets += [r.floor for r in roots if r.is_integer]
    else:
        for j, s in enumerate(prof.signs):
            if s < 0:
                continue
            lo = roots[j - 1].floor + 1 if j > 0 else None
            hi = roots[j].ceil - 1 if j < n else None
            if lo is not None and hi is not None and lo > hi:
                continue
            targets += [v for v in (lo, hi) if v is not None]
    out: dict[int, Operation] = {}
    for v in targets:
        if v != cur and v not in out:
            out[v] = move(x, v, cur, lit)
    return list(out.values())


# --------------------------------------------------------------------------
# pools


def fixed_moves(lit: Literal, values: Sequence[int], inc: int) -> list[Operation]:
    """Fixed-increment moves used by the ``fix_<inc>`` ablation variants."""
    out = []
    for x in lit.atom.lhs.variables():
        cur = values[x]
        out.append(move(x, cur + inc, cur, lit))
        out.append(move(x, cur - inc, cur, lit))
    return out


def literal_moves(lit: Literal, values: Sequence[int], theory: str, rng: random.Random,
                  delta: int | None = None, fixed_inc: int | None = None) -> list[Operation]:
    """All moves generated by one false arithmetic literal."""
    if fixed_inc is not None:
        return fixed_moves(lit, values, fixed_inc)
    d = lit.atom.delta(values) if delta is None else delta
    gen = cm_lia if theory == LIA else cm_nia
    ops: list[Operation] = []
    for x in lit.atom.lhs.variables():
        ops += gen(lit, x, values, d)
    if not ops and lit.atom.rel == EQ and lit.positive:
        ops.append(equality_fallback(lit, values, rng, d))
    return ops


@dataclass
class CandidatePools:
    S: list[Operation]
    D: list[Operation]

    @property
    def rest(self) -> list[Operation]:
        in_s = set(self.S)
        return [op for op in self.D if op not in in_s]


def false_literals(state, *, in_falsified: bool) -> list[tuple[int, bool]]:
    """False arithmetic literals that do (or do not) occur in a falsified clause."""
    out = []
    for key, clauses in state.lit_clauses.items():
        if state.lit_true((True,) + key):
            continue
        hit = any(c in state.falsified for c in clauses)
        if hit == in_falsified:
            out.append(key)
    return out


def ops_from_literals(state, keys, rng, theory=None, fixed_inc=None, allowed=None) -> list[Operation]:
    theory = theory or state.formula.theory
    out: dict[Operation, Operation] = {}
    for a, pos in keys:
        lit = state.literal(a, pos)
        for op in literal_moves(lit, state.int_vals, theory, rng, state.delta[a], fixed_inc):
            if op not in out and within_capacity(op) and (allowed is None or allowed(op)):
                out[op] = op
    return list(out.values())


def build_pools(state, theory: str | None = None, rng: random.Random | None = None, *,
                fixed_inc: int | None = None, allowed=None) -> CandidatePools:
    """Two-level candidate pools: S from false literals in falsified clauses,
    D from every false literal (S is a subset of D)."""
    rng = rng or state.rng
    s_ops = ops_from_literals(state, false_literals(state, in_falsified=True), rng, theory, fixed_inc, allowed)
    rest = ops_from_literals(state, false_literals(state, in_falsified=False), rng, theory, fixed_inc, allowed)
    seen = set(s_ops)
    return CandidatePools(s_ops, s_ops + [op for op in rest if op not in seen])
