"""SMT-LIB2 front end for the QF_LIA / QF_IDL / QF_NIA subset.

``parse_script`` reads commands into a let-free assertion tree,
``to_cnf`` clausifies it (Tseitin with full equivalences for nested
structure) and ``detect_bounds`` reads integer bounds off unit clauses.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .formula import (
    Clause,
    Formula,
    Literal,
    normalize_atom,
    normalize_polynomial,
    make_clause,
)

log = logging.getLogger(__name__)

SUPPORTED_LOGICS = {"QF_LIA", "QF_IDL", "QF_NIA"}


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class NumConst:
    value: int | Fraction


@dataclass(frozen=True)
class Var:
    name: str
    sort: str  # "Int" or "Bool"


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Iff:
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Distinct:
    args: tuple  # integer terms


@dataclass(frozen=True)
class Cmp:
    rel: str  # one of <, <=, >, >=, =
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Add:
    args: tuple


@dataclass(frozen=True)
class Sub:
    args: tuple


@dataclass(frozen=True)
class Mul:
    args: tuple


@dataclass(frozen=True)
class Neg:
    arg: object


# --------------------------------------------------------------------------
# errors


class ParseError(Exception):
    kind = "parse-error"

    def __init__(self, message: str, line: int, col: int, token: str | None = None):
        super().__init__(f"{line}:{col}: {self.kind}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.token = token


class MalformedSexp(ParseError):
    kind = "malformed-sexp"


class UnsupportedConstruct(ParseError):
    kind = "unsupported-construct"


class SortMismatch(ParseError):
    kind = "sort-mismatch"


class UndeclaredSymbol(ParseError):
    kind = "undeclared-symbol"


# --------------------------------------------------------------------------
# s-expressions


@dataclass
class Tok:
    text: str
    line: int
    col: int
    quoted: bool = False  # |symbol| or "string"
    string: bool = False


@dataclass
class SList:
    items: list
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    i, n = 0, len(text)
    line, col = 1, 1

    def advance(k):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch.isspace():
            advance(1)
        elif ch == ";":
            while i < n and text[i] != "\n":
                advance(1)
        elif ch in "()":
            toks.append(Tok(ch, line, col))
            advance(1)
        elif ch == "|":
            l0, c0 = line, col
            j = text.find("|", i + 1)
            if j < 0:
                raise MalformedSexp("unterminated quoted symbol", l0, c0, "|")
            toks.append(Tok(text[i + 1 : j], l0, c0, quoted=True))
            advance(j + 1 - i)
        elif ch == '"':
            l0, c0 = line, col
            j = i + 1
            while True:
                j = text.find('"', j)
                if j < 0:
                    raise MalformedSexp("unterminated string literal", l0, c0, '"')
                if j + 1 < n and text[j + 1] == '"':
                    j += 2
                    continue
                break
            toks.append(Tok(text[i + 1 : j], l0, c0, quoted=True, string=True))
            advance(j + 1 - i)
        else:
            l0, c0 = line, col
            j = i
            while j < n and not text[j].isspace() and text[j] not in '();|"':
                j += 1
            toks.append(Tok(text[i:j], l0, c0))
            advance(j - i)
    return toks


def read_sexps(text: str) -> list:
    toks = tokenize(text)
    out = []
    stack: list[SList] = []
    for t in toks:
        if t.text == "(" and not t.quoted:
            stack.append(SList([], t.line, t.col))
        elif t.text == ")" and not t.quoted:
            if not stack:
                raise MalformedSexp("unbalanced ')'", t.line, t.col, ")")
            done = stack.pop()
            (stack[-1].items if stack else out).append(done)
        else:
            (stack[-1].items if stack else out).append(t)
    if stack:
        s = stack[-1]
        raise MalformedSexp("unbalanced '('", s.line, s.col, "(")
    return out


def _pos(s):
    return s.line, s.col


def _head(s) -> str | None:
    if isinstance(s, SList) and s.items and isinstance(s.items[0], Tok) and not s.items[0].quoted:
        return s.items[0].text
    return None


# --------------------------------------------------------------------------
# script parsing


@dataclass
class Script:
    assertions: list
    declarations: dict[str, str]  # name -> sort, in declaration order
    logic: str | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def ast(self):
        if len(self.assertions) == 1:
            return self.assertions[0]
        return And(tuple(self.assertions))


UNSUPPORTED_OPS = {
    "ite", "div", "mod", "abs", "forall", "exists", "select", "store", "to_real", "to_int",
    "is_int", "/", "bvadd", "concat", "extract", "_", "as", "push", "pop",
}

NUMERAL_CHARS = set("0123456789")


def _is_numeral(text: str) -> bool:
    return bool(text) and set(text) <= NUMERAL_CHARS


def _is_decimal(text: str) -> bool:
    a, dot, b = text.partition(".")
    return bool(dot) and _is_numeral(a) and _is_numeral(b)


class _Elaborator:
    def __init__(self):
        self.decls: dict[str, str] = {}
        self.macros: dict[str, tuple[object, str]] = {}

    def term(self, s, env: dict):
        """Return (node, sort)."""
        if isinstance(s, Tok):
            return self.atom(s, env)
        if not s.items:
            raise MalformedSexp("empty application", *_pos(s), "()")
        head = s.items[0]
        if isinstance(head, SList):
            h = _head(head)
            if h == "_":
                raise UnsupportedConstruct("indexed identifier", *_pos(head.items[0]), "_")
            raise UnsupportedConstruct("non-symbol application head", *_pos(head), "(")
        op = head.text
        args = s.items[1:]
        if head.quoted:
            raise UnsupportedConstruct(f"application of function symbol {op!r}", *_pos(head), op)
        if op == "let":
            return self.let(s, env)
        if op == "!":
            if not args:
                raise MalformedSexp("empty annotation", *_pos(head), op)
            return self.term(args[0], env)
        if op in UNSUPPORTED_OPS:
            raise UnsupportedConstruct(f"{op!r} is outside the supported subset", *_pos(head), op)

        if op in ("not", "and", "or", "=>", "xor"):
            nodes = [self.expect(a, env, "Bool") for a in args]
            if op == "not":
                self.arity(head, nodes, 1, 1)
                return Not(nodes[0]), "Bool"
            if op == "and":
                return And(tuple(nodes)), "Bool"
            if op == "or":
                return Or(tuple(nodes)), "Bool"
            self.arity(head, nodes, 2, None)
            if op == "=>":
                r = nodes[-1]
                for a in reversed(nodes[:-1]):
                    r = Implies(a, r)
                return r, "Bool"
            r = nodes[0]
            for a in nodes[1:]:
                r = Not(Iff(r, a))
            return r, "Bool"

        if op in ("=", "distinct"):
            pairs = [self.term(a, env) for a in args]
            if len(pairs) < 2:
                raise MalformedSexp(f"{op!r} needs at least two arguments", *_pos(head), op)
            sorts = {srt for _, srt in pairs}
            if len(sorts) > 1:
                raise SortMismatch(f"{op!r} over mixed sorts", *_pos(head), op)
            nodes = [nd for nd, _ in pairs]
            if sorts == {"Int"}:
                if op == "distinct":
                    return Distinct(tuple(nodes)), "Bool"
                return self.chain("=", nodes), "Bool"
            if op == "=":
                parts = [Iff(a, b) for a, b in zip(nodes, nodes[1:])]
            else:
                parts = [Not(Iff(a, b)) for a, b in combinations(nodes, 2)]
            return (parts[0] if len(parts) == 1 else And(tuple(parts))), "Bool"

        if op in ("<=", "<", ">=", ">"):
            nodes = [self.expect(a, env, "Int") for a in args]
            self.arity(head, nodes, 2, None)
            return self.chain(op, nodes), "Bool"

        if op in ("+", "-", "*"):
            nodes = [self.expect(a, env, "Int") for a in args]
            self.arity(head, nodes, 1, None)
            if op == "-" and len(nodes) == 1:
                arg = nodes[0]
                return (NumConst(-arg.value) if isinstance(arg, NumConst) else Neg(arg)), "Int"
            if len(nodes) == 1:
                return nodes[0], "Int"
            cls = {"+": Add, "-": Sub, "*": Mul}[op]
            return cls(tuple(nodes)), "Int"

        if op in self.decls or op in self.macros or op in env:
            raise UnsupportedConstruct(f"{op!r} applied to arguments", *_pos(head), op)
        raise UnsupportedConstruct(f"unknown function {op!r}", *_pos(head), op)

    @staticmethod
    def chain(rel, nodes):
        parts = [Cmp(rel, a, b) for a, b in zip(nodes, nodes[1:])]
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    @staticmethod
    def arity(head, nodes, lo, hi):
        if len(nodes) < lo or (hi is not None and len(nodes) > hi):
            raise MalformedSexp(f"wrong number of arguments to {head.text!r}", *_pos(head), head.text)

    def expect(self, s, env, sort):
        node, got = self.term(s, env)
        if got != sort:
            tok = s if isinstance(s, Tok) else s.items[0]
            raise SortMismatch(f"expected {sort}, got {got}", *_pos(tok), getattr(tok, "text", None))
        return node

    def atom(self, t: Tok, env):
        text = t.text
        if not t.quoted:
            if _is_numeral(text) or (text[:1] == "-" and _is_numeral(text[1:])):
                return NumConst(int(text)), "Int"
            if _is_decimal(text):
                raise UnsupportedConstruct("decimal (real) constant", t.line, t.col, text)
            if text.startswith("#"):
                raise UnsupportedConstruct("bit-vector constant", t.line, t.col, text)
            if text == "true":
                return BoolConst(True), "Bool"
            if text == "false":
                return BoolConst(False), "Bool"
        if text in env:
            return env[text]
        if text in self.macros:
            return self.macros[text]
        if text in self.decls:
            srt = self.decls[text]
            return Var(text, srt), srt
        raise UndeclaredSymbol(f"undeclared symbol {text!r}", t.line, t.col, text)

    def let(self, s: SList, env):
        if len(s.items) != 3 or not isinstance(s.items[1], SList):
            raise MalformedSexp("malformed let", *_pos(s.items[0]), "let")
        new_env = dict(env)
        for b in s.items[1].items:
            if not isinstance(b, SList) or len(b.items) != 2 or not isinstance(b.items[0], Tok):
                raise MalformedSexp("malformed let binding", *_pos(b), None)
            new_env[b.items[0].text] = self.term(b.items[1], env)  # parallel binding
        return self.term(s.items[2], new_env)

    def sort(self, s):
        if isinstance(s, Tok) and s.text in ("Int", "Bool"):
            return s.text
        tok = s if isinstance(s, Tok) else (s.items[0] if s.items else s)
        what = "real sort" if getattr(tok, "text", "") == "Real" else "sort"
        raise UnsupportedConstruct(f"unsupported {what}", *_pos(tok), getattr(tok, "text", None))


def parse_script(text: str) -> Script:
    """Parse an SMT-LIB2 script in the supported subset."""
    el = _Elaborator()
    script = Script([], el.decls)
    for cmd in read_sexps(text):
        if not isinstance(cmd, SList) or not cmd.items:
            raise MalformedSexp("expected a command", *_pos(cmd), getattr(cmd, "text", None))
        name = _head(cmd)
        head = cmd.items[0]
        if name is None:
            raise MalformedSexp("expected a command name", *_pos(head), None)
        args = cmd.items[1:]
        if name == "set-logic":
            if len(args) != 1 or not isinstance(args[0], Tok):
                raise MalformedSexp("set-logic expects a symbol", *_pos(head), name)
            script.logic = args[0].text
            if script.logic not in SUPPORTED_LOGICS:
                msg = f"logic {script.logic} is not one of {sorted(SUPPORTED_LOGICS)}; continuing"
                log.warning(msg)
                script.warnings.append(msg)
        elif name in ("set-info", "set-option", "check-sat", "get-model", "exit", "get-info"):
            pass
        elif name in ("declare-fun", "declare-const"):
            if name == "declare-fun":
                if len(args) != 3 or not isinstance(args[0], Tok) or not isinstance(args[1], SList):
                    raise MalformedSexp("malformed declare-fun", *_pos(head), name)
                if args[1].items:
                    raise UnsupportedConstruct("function with parameters", *_pos(args[0]), args[0].text)
                sym, srt = args[0], args[2]
            else:
                if len(args) != 2 or not isinstance(args[0], Tok):
                    raise MalformedSexp("malformed declare-const", *_pos(head), name)
                sym, srt = args
            sort = el.sort(srt)
            if sym.text in el.decls or sym.text in el.macros:
                raise MalformedSexp(f"symbol {sym.text!r} already declared", *_pos(sym), sym.text)
            el.decls[sym.text] = sort
        elif name == "define-fun":
            if len(args) != 4 or not isinstance(args[0], Tok) or not isinstance(args[1], SList):
                raise MalformedSexp("malformed define-fun", *_pos(head), name)
            if args[1].items:
                raise UnsupportedConstruct("define-fun with parameters", *_pos(args[0]), args[0].text)
            sort = el.sort(args[2])
            node = el.expect(args[3], {}, sort)
            el.macros[args[0].text] = (node, sort)
        elif name == "assert":
            if len(args) != 1:
                raise MalformedSexp("assert takes one term", *_pos(head), name)
            script.assertions.append(el.expect(args[0], {}, "Bool"))
        else:
            raise UnsupportedConstruct(f"command {name!r}", *_pos(head), name)
    return script


# --------------------------------------------------------------------------
# arithmetic terms to polynomials


def term_to_poly(node, int_index: dict[str, int]) -> dict:
    """Expand an integer term to {monomial: coefficient} (the empty monomial is the constant)."""
    if isinstance(node, NumConst):
        return {(): node.value} if node.value else {}
    if isinstance(node, Var):
        return {((int_index[node.name], 1),): 1}
    if isinstance(node, Neg):
        return {m: -c for m, c in term_to_poly(node.arg, int_index).items()}
    if isinstance(node, Add):
        acc: dict = {}
        for a in node.args:
            _add_into(acc, term_to_poly(a, int_index), 1)
        return acc
    if isinstance(node, Sub):
        acc = dict(term_to_poly(node.args[0], int_index))
        for a in node.args[1:]:
            _add_into(acc, term_to_poly(a, int_index), -1)
        return acc
    if isinstance(node, Mul):
        acc = {(): 1}
        for a in node.args:
            acc = _mul(acc, term_to_poly(a, int_index))
        return acc
    raise TypeError(f"not an integer term: {node!r}")


def _add_into(acc, p, sign):
    for m, c in p.items():
        v = acc.get(m, 0) + sign * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _mul(p, q):
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            exps = dict(m1)
            for v, e in m2:
                exps[v] = exps.get(v, 0) + e
            m = tuple(sorted(exps.items()))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


_COMPLEMENT = {"<=": ">", ">": "<=", "<": ">=", ">=": "<", "=": "!=", "!=": "="}
_CMP = {
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def atom_circuit(rel, lhs, rhs, int_index, reduce=True):
    """Normalize ``lhs rel rhs`` into a circuit node (literal, or / const)."""
    p = term_to_poly(lhs, int_index)
    _add_into(p, term_to_poly(rhs, int_index), -1)
    const = p.pop((), 0)
    k = -const
    if not p:
        return ("const", _CMP[rel](0, k))
    den = 1
    for c in list(p.values()) + [k]:
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    raw = [(int(c * den), m) for m, c in p.items()]
    k = int(k * den)
    poly, off = normalize_polynomial(raw)
    assert off == 0
    lits = normalize_atom(poly, rel, k, reduce=reduce)
    if len(lits) == 1:
        return ("lit", lits[0])
    return ("or", tuple(("lit", l) for l in lits))


# --------------------------------------------------------------------------
# clausification
#
# Circuits are nested tuples in negation normal form:
#   ("lit", Literal) | ("and", children) | ("or", children) | ("iff", a, b) | ("const", bool)


def _mk_and(children):
    out = []
    for c in children:
        if c[0] == "const":
            if not c[1]:
                return ("const", False)
            continue
        if c[0] == "and":
            out.extend(c[1])
        else:
            out.append(c)
    if not out:
        return ("const", True)
    return out[0] if len(out) == 1 else ("and", tuple(out))


def _mk_or(children):
    out = []
    for c in children:
        if c[0] == "const":
            if c[1]:
                return ("const", True)
            continue
        if c[0] == "or":
            out.extend(c[1])
        else:
            out.append(c)
    if not out:
        return ("const", False)
    return out[0] if len(out) == 1 else ("or", tuple(out))


def _mk_iff(a, b):
    if a[0] == "const":
        return b if a[1] else _neg(b)
    if b[0] == "const":
        return a if b[1] else _neg(a)
    return ("iff", a, b)


def _neg(c):
    kind = c[0]
    if kind == "lit":
        return ("lit", c[1].negate())
    if kind == "const":
        return ("const", not c[1])
    if kind == "and":
        return _mk_or([_neg(x) for x in c[1]])
    if kind == "or":
        return _mk_and([_neg(x) for x in c[1]])
    return _mk_iff(_neg(c[1]), c[2])


class _Clausifier:
    def __init__(self, bool_index, int_index, reduce):
        self.bool_index = bool_index
        self.int_index = int_index
        self.reduce = reduce
        self.aux_names: list[str] = []
        self.aux_memo: dict = {}
        self.clauses: list[Clause] = []
        self.trivially_false = False

    def circuit(self, node, positive=True):
        if isinstance(node, BoolConst):
            return ("const", node.value == positive)
        if isinstance(node, Var):
            return ("lit", Literal.boolean(self.bool_index[node.name], positive))
        if isinstance(node, Not):
            return self.circuit(node.arg, not positive)
        if isinstance(node, And):
            parts = [self.circuit(a, positive) for a in node.args]
            return _mk_and(parts) if positive else _mk_or(parts)
        if isinstance(node, Or):
            parts = [self.circuit(a, positive) for a in node.args]
            return _mk_or(parts) if positive else _mk_and(parts)
        if isinstance(node, Implies):
            return self.circuit(Or((Not(node.lhs), node.rhs)), positive)
        if isinstance(node, Iff):
            return _mk_iff(self.circuit(node.lhs, positive), self.circuit(node.rhs))
        if isinstance(node, Distinct):
            pairs = list(combinations(node.args, 2))
            if positive:
                return _mk_and([self.atom("!=", a, b) for a, b in pairs])
            return _mk_or([self.atom("=", a, b) for a, b in pairs])
        if isinstance(node, Cmp):
            return self.atom(node.rel if positive else _COMPLEMENT[node.rel], node.lhs, node.rhs)
        raise TypeError(f"not a Boolean node: {node!r}")

    def atom(self, rel, lhs, rhs):
        return atom_circuit(rel, lhs, rhs, self.int_index, self.reduce)

    def emit(self, lits):
        c = make_clause(lits)
        if c is not None:
            self.clauses.append(c)

    def top(self, c):
        kind = c[0]
        if kind == "and":
            for x in c[1]:
                self.top(x)
        elif kind == "const":
            if not c[1]:
                self.trivially_false = True
        elif kind == "lit":
            self.emit([c[1]])
        elif kind == "or":
            self.emit([self.as_literal(x) for x in c[1]])
        else:
            a, b = self.as_literal(c[1]), self.as_literal(c[2])
            self.emit([a.negate(), b])
            self.emit([a, b.negate()])

    def as_literal(self, c) -> Literal:
        if c[0] == "lit":
            return c[1]
        if c in self.aux_memo:
            return self.aux_memo[c]
        neg = _neg(c)
        if neg in self.aux_memo:
            return self.aux_memo[neg].negate()
        var = len(self.bool_index) + len(self.aux_names)
        self.aux_names.append(f"!aux{len(self.aux_names)}")
        a = Literal.boolean(var)
        self.aux_memo[c] = a
        kind = c[0]
        if kind == "and":
            kids = [self.as_literal(x) for x in c[1]]
            for k in kids:
                self.emit([a.negate(), k])
            self.emit([a] + [k.negate() for k in kids])
        elif kind == "or":
            kids = [self.as_literal(x) for x in c[1]]
            self.emit([a.negate()] + kids)
            for k in kids:
                self.emit([a, k.negate()])
        else:  # iff
            p, q = self.as_literal(c[1]), self.as_literal(c[2])
            self.emit([a.negate(), p.negate(), q])
            self.emit([a.negate(), p, q.negate()])
            self.emit([a, p, q])
            self.emit([a, p.negate(), q.negate()])
        return a


def _collect_vars(node, out: dict):
    if isinstance(node, Var):
        out.setdefault(node.name, node.sort)
    elif isinstance(node, (Not, Neg)):
        _collect_vars(node.arg, out)
    elif isinstance(node, (Implies, Iff, Cmp)):
        _collect_vars(node.lhs, out)
        _collect_vars(node.rhs, out)
    elif isinstance(node, (And, Or, Distinct, Add, Sub, Mul)):
        for a in node.args:
            _collect_vars(a, out)


def to_cnf(ast, declarations: dict[str, str] | None = None, *, gcd_reduce: bool = True) -> Formula:
    """Clausify an assertion tree into a :class:`Formula` (bounds included)."""
    decls = dict(declarations) if declarations else {}
    _collect_vars(ast, decls)
    bool_names = [n for n, s in decls.items() if s == "Bool"]
    int_names = [n for n, s in decls.items() if s == "Int"]
    cl = _Clausifier(
        {n: i for i, n in enumerate(bool_names)},
        {n: i for i, n in enumerate(int_names)},
        gcd_reduce,
    )
    cl.top(cl.circuit(ast))
    formula = Formula(
        clauses=cl.clauses,
        bool_names=bool_names + cl.aux_names,
        int_names=int_names,
        n_declared_bool=len(bool_names),
        original_ast=ast,
        declarations=list(decls.items()),
        trivially_false=cl.trivially_false,
    )
    formula.bounds = detect_bounds(formula)
    return formula


def detect_bounds(formula: Formula) -> dict[int, tuple[int | None, int | None]]:
    """Integer bounds implied by unit clauses ``a*x <= c`` / ``!(a*x <= c)``."""
    lo: dict[int, int] = {}
    hi: dict[int, int] = {}
    for clause in formula.clauses:
        if len(clause.literals) != 1:
            continue
        lit = clause.literals[0]
        atom = lit.atom
        if atom is None or atom.rel != "<=" or len(atom.lhs.terms) != 1:
            continue
        a, m = atom.lhs.terms[0]
        if len(m) != 1 or m[0][1] != 1:
            continue
        x = m[0][0]
        c = atom.rhs
        if lit.positive:  # a*x <= c
            if a > 0:
                ub, lb = c // a, None
            else:
                ub, lb = None, -(-c // a)  # x >= ceil(c / a)
        else:  # a*x >= c + 1
            c1 = c + 1
            if a > 0:
                ub, lb = None, -(-c1 // a)
            else:
                ub, lb = c1 // a, None
        if lb is not None:
            lo[x] = max(lo.get(x, lb), lb)
        if ub is not None:
            hi[x] = min(hi.get(x, ub), ub)
    return {x: (lo.get(x), hi.get(x)) for x in sorted(set(lo) | set(hi))}


def load_formula(text: str, *, gcd_reduce: bool = True) -> Formula:
    script = parse_script(text)
    return to_cnf(script.ast if script.assertions else BoolConst(True), script.declarations, gcd_reduce=gcd_reduce)


def read_formula(path, *, gcd_reduce: bool = True) -> Formula:
    return load_formula(Path(path).read_text(encoding="utf-8"), gcd_reduce=gcd_reduce)


# --------------------------------------------------------------------------
# printing


def format_term(node) -> str:
    if isinstance(node, BoolConst):
        return "true" if node.value else "false"
    if isinstance(node, NumConst):
        v = node.value
        if isinstance(v, Fraction) and v.denominator != 1:
            raise ValueError("rational constants have no Int literal form")
        v = int(v)
        return str(v) if v >= 0 else f"(- {-v})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Not):
        return f"(not {format_term(node.arg)})"
    if isinstance(node, Neg):
        return f"(- {format_term(node.arg)})"
    if isinstance(node, (Implies, Iff)):
        op = "=>" if isinstance(node, Implies) else "="
        return f"({op} {format_term(node.lhs)} {format_term(node.rhs)})"
    if isinstance(node, Cmp):
        return f"({node.rel} {format_term(node.lhs)} {format_term(node.rhs)})"
    ops = {And: "and", Or: "or", Distinct: "distinct", Add: "+", Sub: "-", Mul: "*"}
    for cls, op in ops.items():
        if isinstance(node, cls):
            if not node.args and cls in (And, Or):
                return "true" if cls is And else "false"
            return "(" + " ".join([op] + [format_term(a) for a in node.args]) + ")"
    raise TypeError(f"cannot format {node!r}")


def format_script(declarations: dict[str, str], assertions, logic: str = "QF_NIA") -> str:
    lines = [f"(set-logic {logic})"]
    lines += [f"(declare-fun {n} () {s})" for n, s in declarations.items()]
    lines += [f"(assert {format_term(a)})" for a in assertions]
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
