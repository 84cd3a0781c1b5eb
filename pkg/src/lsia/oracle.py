"""Ground truth for tests: exact AST evaluation and bounded brute force.

``brute_force`` enumerates every assignment in a box in lexicographic
order (Boolean variables first, false < true, then integers ascending;
earlier variables are more significant).  The enumeration is vectorized
with numpy open grids, so literals are evaluated on the sub-grid of their
own variables and only clause conjunctions touch the full space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

import numpy as np

from .formula import EQ, Formula
from .frontend import (
    Add, And, BoolConst, Cmp, Distinct, Iff, Implies, Mul, Neg, Not, NumConst, Or, Sub, Var,
    _collect_vars,
)

DEFAULT_CAP = 10**7
_INT64_SAFE = 2**62


class SpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    """Inclusive integer ranges; ``ranges`` overrides ``radius`` per variable."""

    radius: int = 5
    ranges: tuple = ()  # ((name, lo, hi), ...)

    def range_of(self, name: str) -> tuple[int, int]:
        for n, lo, hi in self.ranges:
            if n == name:
                if lo > hi:
                    raise ValueError(f"empty range for {name}")
                return lo, hi
        return -self.radius, self.radius


@dataclass
class BruteResult:
    sat: bool
    model: dict | None = None
    size: int = 0

    def __bool__(self):
        return self.sat


# --------------------------------------------------------------------------
# scalar evaluation


def eval_term(node, model: Mapping):
    if isinstance(node, NumConst):
        return node.value
    if isinstance(node, Var):
        return model[node.name]
    if isinstance(node, Neg):
        return -eval_term(node.arg, model)
    if isinstance(node, Add):
        return sum(eval_term(a, model) for a in node.args)
    if isinstance(node, Sub):
        r = eval_term(node.args[0], model)
        for a in node.args[1:]:
            r -= eval_term(a, model)
        return r
    if isinstance(node, Mul):
        r = 1
        for a in node.args:
            r *= eval_term(a, model)
        return r
    raise TypeError(f"not an integer term: {node!r}")


_REL = {
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "=": lambda a, b: a == b,
}


def eval_ast(node, model: Mapping) -> bool:
    """Evaluate a Boolean AST under ``model`` (name -> bool/int) with exact arithmetic."""
    if isinstance(node, BoolConst):
        return node.value
    if isinstance(node, Var):
        return bool(model[node.name])
    if isinstance(node, Not):
        return not eval_ast(node.arg, model)
    if isinstance(node, And):
        return all(eval_ast(a, model) for a in node.args)
    if isinstance(node, Or):
        return any(eval_ast(a, model) for a in node.args)
    if isinstance(node, Implies):
        return (not eval_ast(node.lhs, model)) or eval_ast(node.rhs, model)
    if isinstance(node, Iff):
        return eval_ast(node.lhs, model) == eval_ast(node.rhs, model)
    if isinstance(node, Distinct):
        vals = [eval_term(a, model) for a in node.args]
        return len(set(vals)) == len(vals)
    if isinstance(node, Cmp):
        return _REL[node.rel](eval_term(node.lhs, model), eval_term(node.rhs, model))
    raise TypeError(f"not a Boolean node: {node!r}")


# --------------------------------------------------------------------------
# vectorized enumeration


class _Grid:
    def __init__(self, bool_names, int_names, box: Box, cap: int):
        self.names = list(bool_names) + list(int_names)
        self.ranges = [(0, 1)] * len(bool_names) + [box.range_of(n) for n in int_names]
        self.shape = tuple(hi - lo + 1 for lo, hi in self.ranges)
        self.size = int(np.prod(self.shape, dtype=object)) if self.shape else 1
        if self.size > cap:
            raise SpaceTooLarge(f"{self.size} assignments exceed cap {cap}")
        self.maxabs = max((max(abs(lo), abs(hi)) for lo, hi in self.ranges), default=0)
        self.nd = len(self.names)
        self.axes = {}
        for i, (n, (lo, hi)) in enumerate(zip(self.names, self.ranges)):
            shape = [1] * self.nd
            shape[i] = hi - lo + 1
            arr = np.arange(lo, hi + 1, dtype=np.int64).reshape(shape)
            self.axes[n] = arr.astype(bool) if i < len(bool_names) else arr

    def axis(self, name, exact=False):
        a = self.axes[name]
        return a.astype(object) if exact else a

    def first(self, mask) -> dict | None:
        full = np.broadcast_to(np.asarray(mask, dtype=bool), self.shape)
        if not full.any():
            return None
        idx = np.unravel_index(int(np.argmax(full)), self.shape) if self.shape else ()
        model = {}
        for n, (lo, _), i, k in zip(self.names, self.ranges, idx, range(self.nd)):
            model[n] = bool(i) if self.axes[n].dtype == bool else lo + int(i)
        return model


def _term_bound(node, maxabs):
    if isinstance(node, NumConst):
        return abs(node.value)
    if isinstance(node, Var):
        return maxabs
    if isinstance(node, Neg):
        return _term_bound(node.arg, maxabs)
    if isinstance(node, (Add, Sub)):
        return sum(_term_bound(a, maxabs) for a in node.args)
    r = 1
    for a in node.args:
        r *= _term_bound(a, maxabs)
    return r


def _vec_term(node, g: _Grid, exact):
    if isinstance(node, NumConst):
        v = node.value
        if isinstance(v, Fraction) and v.denominator != 1:
            raise ValueError("rational constants are not supported by the vectorized oracle")
        return int(v)
    if isinstance(node, Var):
        return g.axis(node.name, exact)
    if isinstance(node, Neg):
        return -_vec_term(node.arg, g, exact)
    if isinstance(node, Add):
        r = 0
        for a in node.args:
            r = r + _vec_term(a, g, exact)
        return r
    if isinstance(node, Sub):
        r = _vec_term(node.args[0], g, exact)
        for a in node.args[1:]:
            r = r - _vec_term(a, g, exact)
        return r
    r = 1
    for a in node.args:
        r = r * _vec_term(a, g, exact)
    return r


_VREL = {
    "<=": np.less_equal, "<": np.less, ">=": np.greater_equal, ">": np.greater, "=": np.equal,
}


def _vec_bool(node, g: _Grid):
    if isinstance(node, BoolConst):
        return np.bool_(node.value)
    if isinstance(node, Var):
        return g.axis(node.name)
    if isinstance(node, Not):
        return np.logical_not(_vec_bool(node.arg, g))
    if isinstance(node, And):
        r = np.bool_(True)
        for a in node.args:
            r = np.logical_and(r, _vec_bool(a, g))
        return r
    if isinstance(node, Or):
        r = np.bool_(False)
        for a in node.args:
            r = np.logical_or(r, _vec_bool(a, g))
        return r
    if isinstance(node, Implies):
        return np.logical_or(np.logical_not(_vec_bool(node.lhs, g)), _vec_bool(node.rhs, g))
    if isinstance(node, Iff):
        return np.equal(_vec_bool(node.lhs, g), _vec_bool(node.rhs, g))
    if isinstance(node, Distinct):
        r = np.bool_(True)
        for a, b in combinations(node.args, 2):
            r = np.logical_and(r, _vec_cmp("=", a, b, g, negate=True))
        return r
    if isinstance(node, Cmp):
        return _vec_cmp(node.rel, node.lhs, node.rhs, g)
    raise TypeError(f"not a Boolean node: {node!r}")


def _vec_cmp(rel, lhs, rhs, g, negate=False):
    exact = _term_bound(lhs, g.maxabs) + _term_bound(rhs, g.maxabs) >= _INT64_SAFE
    r = _VREL[rel](_vec_term(lhs, g, exact), _vec_term(rhs, g, exact))
    r = np.asarray(r, dtype=bool)
    return np.logical_not(r) if negate else r


def _brute_ast(ast, box, cap, declarations):
    decls = dict(declarations) if declarations else {}
    _collect_vars(ast, decls)
    g = _Grid([n for n, s in decls.items() if s == "Bool"], [n for n, s in decls.items() if s == "Int"], box, cap)
    model = g.first(_vec_bool(ast, g))
    return BruteResult(model is not None, model, g.size)


def _brute_formula(formula: Formula, box, cap):
    g = _Grid(formula.bool_names, formula.int_names, box, cap)
    if formula.trivially_false:
        return BruteResult(False, None, g.size)
    atom_cache = {}
    mask = np.bool_(True)
    for clause in formula.clauses:
        cl = np.bool_(False)
        for lit in clause.literals:
            if lit.atom is None:
                v = g.axis(formula.bool_names[lit.var])
            else:
                v = atom_cache.get(lit.atom)
                if v is None:
                    v = atom_cache[lit.atom] = _vec_atom(lit.atom, formula, g)
            cl = np.logical_or(cl, v if lit.positive else np.logical_not(v))
        mask = np.logical_and(mask, cl)
        if not np.any(mask):
            return BruteResult(False, None, g.size)
    model = g.first(mask)
    if model is None:
        return BruteResult(False, None, g.size)
    keep = set(formula.bool_names[: formula.n_declared_bool]) | set(formula.int_names)
    return BruteResult(True, {k: v for k, v in model.items() if k in keep}, g.size)


def _vec_atom(atom, formula, g):
    bound = abs(atom.rhs) + sum(
        abs(c) * g.maxabs ** sum(e for _, e in m) for c, m in atom.lhs.terms
    )
    exact = bound >= _INT64_SAFE
    total = 0
    for c, m in atom.lhs.terms:
        t = c
        for v, e in m:
            t = t * g.axis(formula.int_names[v], exact) ** e
        total = total + t
    d = total - atom.rhs
    return np.asarray(d <= 0 if atom.rel != EQ else d == 0, dtype=bool)


def brute_force(target, box: Box | int = 5, *, cap: int = DEFAULT_CAP, declarations=None) -> BruteResult:
    """Exhaustive satisfiability check of a Formula or AST inside ``box``.

    An unsatisfiable answer only speaks for the box.  Raises
    :class:`SpaceTooLarge` when the box holds more than ``cap`` assignments.
    For a Formula the witness is projected onto the declared variables.
    """
    if isinstance(box, int):
        box = Box(box)
    if isinstance(target, Formula):
        return _brute_formula(target, box, cap)
    return _brute_ast(target, box, cap, declarations)
