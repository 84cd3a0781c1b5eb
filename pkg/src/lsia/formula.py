"""Canonical in-memory representation of integer arithmetic formulae.

A monomial is a sorted tuple of ``(var, exponent)`` pairs over integer
variables; the empty tuple is the constant monomial.  Polynomials hold
integer coefficients over monomials in graded lexicographic order.
Arithmetic atoms are always ``lhs <= k`` or ``lhs = k`` with a
constant-free left-hand side; the other relations are rewritten by
:func:`normalize_atom`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[tuple[int, int], ...]

LE = "<="
EQ = "="

LIA = "LIA"
NIA = "NIA"


def monomial_key(m: Monomial):
    """Graded lexicographic sort key."""
    return (sum(e for _, e in m), m)


def make_monomial(raw: Iterable) -> Monomial:
    """Canonicalize a raw monomial.

    ``raw`` may mix bare variable indices (``x*y*x``) and ``(var, exp)``
    pairs; repeated variables have their exponents summed.
    """
    exps: dict[int, int] = {}
    for item in raw:
        if isinstance(item, tuple):
            v, e = item
        else:
            v, e = item, 1
        if e < 0:
            raise ValueError(f"negative exponent {e}")
        if e:
            exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def eval_monomial(m: Monomial, values: Sequence[int]) -> int:
    r = 1
    for v, e in m:
        r *= values[v] ** e
    return r


@dataclass(frozen=True)
class Polynomial:
    terms: tuple = ()  # tuple[tuple[int, Monomial], ...]

    def evaluate(self, values: Sequence[int]) -> int:
        return sum(c * eval_monomial(m, values) for c, m in self.terms)

    def variables(self) -> tuple[int, ...]:
        return tuple(sorted({v for _, m in self.terms for v, _ in m}))

    def degree(self, var: int) -> int:
        return max((e for _, m in self.terms for v, e in m if v == var), default=0)

    def is_linear(self) -> bool:
        return all(len(m) == 1 and m[0][1] == 1 for _, m in self.terms)

    def coefficients(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, m in self.terms:
            mono = "*".join(
                (names[v] if names else f"x{v}") + (f"^{e}" if e > 1 else "") for v, e in m
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def normalize_polynomial(raw_terms: Iterable[tuple[int, Iterable]]) -> tuple[Polynomial, int]:
    """Merge like terms, drop zeros and sort.

    Returns ``(polynomial, offset)`` where ``offset`` is the constant part,
    kept apart so callers can fold it into the right-hand side.
    """
    acc: dict[Monomial, int] = {}
    for c, raw in raw_terms:
        m = make_monomial(raw)
        acc[m] = acc.get(m, 0) + c
    offset = acc.pop((), 0)
    terms = tuple((c, m) for m, c in sorted(acc.items(), key=lambda kv: monomial_key(kv[0])) if c)
    return Polynomial(terms), offset


@dataclass(frozen=True)
class Atom:
    """``lhs rel rhs`` with ``rel`` in {LE, EQ}."""

    lhs: Polynomial
    rel: str
    rhs: int

    def delta(self, values: Sequence[int]) -> int:
        return self.lhs.evaluate(values) - self.rhs

    def holds(self, values: Sequence[int]) -> bool:
        d = self.delta(values)
        return d <= 0 if self.rel == LE else d == 0

    def format(self, names=None) -> str:
        return f"{self.lhs.format(names)} {self.rel} {self.rhs}"


def reduce_atom(lhs: Polynomial, rel: str, k: int) -> Atom:
    """Divide out common factors without changing the integer solution set."""
    coeffs = lhs.coefficients()
    if not coeffs:
        return Atom(lhs, rel, k)
    g = math.gcd(*coeffs)
    if rel == EQ:
        g = math.gcd(g, k)
        if g > 1:
            lhs = Polynomial(tuple((c // g, m) for c, m in lhs.terms))
            k //= g
    elif g > 1:
        lhs = Polynomial(tuple((c // g, m) for c, m in lhs.terms))
        k = k // g  # floor
    return Atom(lhs, rel, k)


@dataclass(frozen=True)
class Literal:
    """A Boolean variable or an arithmetic atom, with polarity.

    Exactly one of ``var`` (Boolean variable index, >= 0) and ``atom`` is set.
    """

    positive: bool
    var: int = -1
    atom: Atom | None = None

    @classmethod
    def boolean(cls, var: int, positive: bool = True) -> Literal:
        return cls(positive, var=var)

    @classmethod
    def arith(cls, atom: Atom, positive: bool = True) -> Literal:
        return cls(positive, atom=atom)

    @property
    def is_arith(self) -> bool:
        return self.atom is not None

    def negate(self) -> Literal:
        return Literal(not self.positive, self.var, self.atom)

    def holds(self, bool_vals: Sequence[bool], int_vals: Sequence[int]) -> bool:
        if self.atom is None:
            return bool_vals[self.var] == self.positive
        return self.atom.holds(int_vals) == self.positive

    def format(self, bool_names=None, int_names=None) -> str:
        if self.atom is None:
            s = bool_names[self.var] if bool_names else f"p{self.var}"
        else:
            s = "(" + self.atom.format(int_names) + ")"
        return s if self.positive else "!" + s


def normalize_atom(lhs: Polynomial, rel: str, k: int, *, reduce: bool = True) -> tuple[Literal, ...]:
    """Rewrite ``lhs rel k`` into one literal or a disjunction of two.

    ``rel`` is one of ``<, <=, >, >=, =, !=`` (``distinct`` is accepted as an
    alias of ``!=``).
    """
    if not lhs:
        raise ValueError("constant atom; evaluate it instead")

    def mk(p, r, c, positive=True):
        atom = reduce_atom(p, r, c) if reduce else Atom(p, r, c)
        return Literal.arith(atom, positive)

    if rel == "<=":
        return (mk(lhs, LE, k),)
    if rel == "<":
        return (mk(lhs, LE, k - 1),)
    if rel == ">":
        return (mk(lhs, LE, k, False),)
    if rel == ">=":
        return (mk(negate_polynomial(lhs), LE, -k),)
    if rel == "=":
        return (mk(lhs, EQ, k),)
    if rel in ("!=", "distinct"):
        return (mk(lhs, LE, k - 1), mk(lhs, LE, k, False))
    raise ValueError(f"unknown relation {rel!r}")


def negate_polynomial(p: Polynomial) -> Polynomial:
    return Polynomial(tuple((-c, m) for c, m in p.terms))


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    @property
    def n_bool(self) -> int:
        return sum(1 for lit in self.literals if not lit.is_arith)

    @property
    def n_int(self) -> int:
        return sum(1 for lit in self.literals if lit.is_arith)

    def holds(self, bool_vals, int_vals) -> bool:
        return any(lit.holds(bool_vals, int_vals) for lit in self.literals)


def make_clause(literals: Iterable[Literal]) -> Clause | None:
    """Deduplicate literals; returns None for tautologies (``l`` and ``!l``)."""
    seen: dict[Literal, None] = {}
    for lit in literals:
        if lit.negate() in seen:
            return None
        seen[lit] = None
    if not seen:
        raise ValueError("empty clause")
    return Clause(tuple(seen))


@dataclass
class Formula:
    """A clausal formula plus the metadata the search needs.

    ``bool_names`` lists declared Boolean variables first and Tseitin
    auxiliaries after them (``n_declared_bool`` marks the split).
    """

    clauses: list[Clause]
    bool_names: list[str]
    int_names: list[str]
    n_declared_bool: int | None = None
    theory: str = LIA
    max_degree: dict[int, int] = field(default_factory=dict)
    bounds: dict[int, tuple[int | None, int | None]] = field(default_factory=dict)
    original_ast: object = None
    declarations: list[tuple[str, str]] = field(default_factory=list)
    trivially_false: bool = False

    def __post_init__(self):
        if self.n_declared_bool is None:
            self.n_declared_bool = len(self.bool_names)
        if not self.declarations:
            self.declarations = [(n, "Bool") for n in self.bool_names[: self.n_declared_bool]]
            self.declarations += [(n, "Int") for n in self.int_names]
        self.theory = classify_theory(self)

    @property
    def n_bool(self) -> int:
        return len(self.bool_names)

    @property
    def n_int(self) -> int:
        return len(self.int_names)

    @property
    def bounds_conflict(self) -> bool:
        return any(lb is not None and ub is not None and lb > ub for lb, ub in self.bounds.values())

    def atoms(self) -> list[Atom]:
        """Distinct atoms in first-occurrence order."""
        seen: dict[Atom, None] = {}
        for c in self.clauses:
            for lit in c.literals:
                if lit.atom is not None:
                    seen.setdefault(lit.atom)
        return list(seen)

    def holds(self, bool_vals, int_vals) -> bool:
        return not self.trivially_false and all(c.holds(bool_vals, int_vals) for c in self.clauses)

    def format(self) -> str:
        return " &\n".join(
            "(" + " | ".join(l.format(self.bool_names, self.int_names) for l in c.literals) + ")"
            for c in self.clauses
        )


def classify_theory(formula: Formula) -> str:
    """Return LIA or NIA and cache per-variable maximum degrees on the formula."""
    degrees: dict[int, int] = {}
    linear = True
    for atom in formula.atoms():
        for _, m in atom.lhs.terms:
            if len(m) != 1 or m[0][1] != 1:
                linear = False
            for v, e in m:
                if e > degrees.get(v, 0):
                    degrees[v] = e
    formula.max_degree = degrees
    return LIA if linear else NIA


def evaluate_raw(raw_terms: Iterable[tuple[int, Iterable]], values: Mapping[int, int] | Sequence[int]) -> int:
    """Naive evaluation of uncanonicalized terms (test reference)."""
    total = 0
    for c, raw in raw_terms:
        t = c
        for item in raw:
            v, e = item if isinstance(item, tuple) else (item, 1)
            t *= values[v] ** e
        total += t
    return total
