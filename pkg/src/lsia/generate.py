"""Seeded random instances for differential and soundness testing."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .frontend import Add, Cmp, Distinct, Mul, Not, NumConst, Or, And, Var, to_cnf

RELATIONS = ("<=", "<", ">=", ">", "=", "distinct")


@dataclass
class InstanceShape:
    max_int: int = 4
    max_bool: int = 2
    coeff: int = 5
    const: int = 10
    max_degree: int = 2
    max_clauses: int = 8
    max_lits: int = 3
    max_terms: int = 3
    p_nonlinear: float = 0.5


def random_term(rng: random.Random, ints, shape: InstanceShape, nonlinear: bool):
    terms = []
    for _ in range(rng.randint(1, shape.max_terms)):
        c = 0
        while c == 0:
            c = rng.randint(-shape.coeff, shape.coeff)
        deg = rng.randint(1, shape.max_degree) if nonlinear else 1
        factors = [Var(rng.choice(ints), "Int") for _ in range(deg)]
        terms.append(Mul((NumConst(c), *factors)))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def random_atom(rng, ints, shape, nonlinear):
    lhs = random_term(rng, ints, shape, nonlinear)
    rhs = NumConst(rng.randint(-shape.const, shape.const))
    rel = rng.choice(RELATIONS)
    node = Distinct((lhs, rhs)) if rel == "distinct" else Cmp(rel, lhs, rhs)
    return Not(node) if rng.random() < 0.2 else node


def random_instance(seed: int, shape: InstanceShape | None = None):
    """Return ``(ast, declarations)`` for a clausal random instance."""
    shape = shape or InstanceShape()
    rng = random.Random(seed)
    n_int = rng.randint(1, shape.max_int)
    n_bool = rng.randint(0, shape.max_bool)
    ints = [f"x{i}" for i in range(n_int)]
    bools = [f"p{i}" for i in range(n_bool)]
    decls = {b: "Bool" for b in bools}
    decls.update({x: "Int" for x in ints})
    nonlinear = shape.max_degree > 1 and rng.random() < shape.p_nonlinear
    clauses = []
    for _ in range(rng.randint(1, shape.max_clauses)):
        lits = []
        for _ in range(rng.randint(1, shape.max_lits)):
            if bools and rng.random() < 0.25:
                v = Var(rng.choice(bools), "Bool")
                lits.append(v if rng.random() < 0.5 else Not(v))
            else:
                lits.append(random_atom(rng, ints, shape, nonlinear))
        clauses.append(lits[0] if len(lits) == 1 else Or(tuple(lits)))
    ast = clauses[0] if len(clauses) == 1 else And(tuple(clauses))
    return ast, decls


def random_formula(seed: int, shape: InstanceShape | None = None, **kw):
    ast, decls = random_instance(seed, shape)
    return to_cnf(ast, decls, **kw)
