"""Acceptance suite: one group of tests per criterion.

A summary with one PASS/FAIL line per criterion is printed at the end of the run
(see ``pytest_terminal_summary`` in conftest).
"""
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from lsia.formula import EQ, LE, NIA
from lsia.frontend import load_formula, read_formula, to_cnf
from lsia.generate import random_formula, random_instance
from lsia.operators import analyze_roots, build_pools, cm_lia, cm_nia, flip_op, move, substitute
from lsia.oracle import Box, brute_force, eval_ast
from lsia.search import Engine, SearchParams, solve
from lsia.state import SearchState, dscore, score, update_weights_paws

from conftest import audit_tabu, lit, smt

SMOKE = Path(__file__).resolve().parent.parent / "benchmarks" / "smoke"
A, B, C, D = range(4)
DIFF = "(declare-fun a () Int)(declare-fun b () Int)(assert (>= (- b a) 3))(assert (<= (- b a) 5))"


def report(n, ok, detail=""):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    return ok


def cms(fn, l, x, vals):
    return sorted(op.value for op in fn(l, x, vals))


# --------------------------------------------------------------------------
# 1. worked examples

@pytest.mark.criterion(1)
def test_c1_linear_critical_moves():
    l1 = lit([(2, B), (-1, A)], LE, -3)
    l2 = lit([(5, C), (-1, D), (3, A)], EQ, 5)
    z = [0, 0, 0, 0]
    got = [cms(cm_lia, l1, A, z), cms(cm_lia, l1, B, z), cms(cm_lia, l2, C, z), cms(cm_lia, l2, D, z), cms(cm_lia, l2, A, z)]
    assert report(1, got == [[3], [-2], [1], [-5], []], f"linear cm {got}")


@pytest.mark.criterion(1)
def test_c1_polynomial_critical_moves():
    l1 = lit([(-2, B, C, C), (3, A, B), (1, C)], LE, -3)
    l2 = lit([(5, A), (-1, D, D)], EQ, 5)
    ones = [1, 1, 1, 1]
    got = [cms(cm_nia, l1, C, ones), cms(cm_nia, l1, A, ones), cms(cm_nia, l1, B, ones), cms(cm_nia, l2, D, ones), cms(cm_nia, l2, A, ones)]
    prof = analyze_roots(substitute(l1, C, ones))
    roots = [r.value for r in prof.roots]
    ok = got == [[-2, 2], [-1], [-4], [0], []] and roots == [Fraction(-3, 2), 2] and prof.signs == (-1, 1, -1)
    assert report(1, ok, f"polynomial cm {got} roots {roots} signs {prof.signs}")


@pytest.mark.criterion(1)
def test_c1_two_level_pools():
    f = smt(
        "(assert (or (<= (- a b) 0) (<= (- b e) (- 2)) (<= (- (* b d) a) (- 3))))"
        "(assert (<= (- b d) (- 1)))",
        ints="abde",
    )
    s = SearchState(f, assignment=([], [1, 1, 1, 1]))
    pools = build_pools(s, NIA, random.Random(0))
    op1, op2, op3 = move(1, -1, 1), move(1, 0, 1), move(1, -2, 1)
    ok = op2 in pools.S and op1 in pools.rest and op3 in pools.rest and op3.value == -2
    assert report(1, ok, "pool classification")


@pytest.mark.criterion(1)
def test_c1_scores():
    f = smt(
        "(assert (<= (- a b) (- 1)))(assert (or (<= (- a c) (- 5)) (<= (- a d) (- 10))))"
        "(assert (or (<= (- b c) (- 5)) (<= (- b d) (- 10))))",
        ints="abcd", logic="QF_LIA",
    )
    s = SearchState(f, assignment=([], [0, 0, 0, 0]))
    s.set_weights([1, 2, 3])
    op1, op2 = move(A, -1, 0), move(B, 1, 0)
    got = (score(s, op1), score(s, op2), dscore(s, op1), dscore(s, op2))
    assert report(1, got == (1, 1, 3, -2), f"score/dscore {got}")


def _from_zero(variant, steps):
    f = load_formula(DIFF)
    e = Engine(f, SearchParams(variant=variant, max_steps=steps, seed=0))
    e.state.reset([], [0, 0])
    return e.run()


@pytest.mark.criterion(1)
def test_c1_fixed_increment_example():
    t0 = time.perf_counter()
    r5 = _from_zero("fix_5", 10**5)
    r1 = _from_zero("fix_1", 10**5)
    rd = _from_zero("default", 10**5)
    ok = not r5.sat and r1.sat and rd.sat
    detail = f"fix_5={r5.status} {r5.model} fix_1={r1.status} default={rd.status} ({time.perf_counter() - t0:.2f}s)"
    assert report(1, ok, detail)


# --------------------------------------------------------------------------
# 2 and 3. random instances against the evaluator and the brute-force oracle

N_RANDOM = 500


@pytest.fixture(scope="module")
def instances():
    return [random_instance(seed) for seed in range(N_RANDOM)]


@pytest.mark.criterion(2)
def test_c2_soundness(instances):
    t0 = time.perf_counter()
    sat = bad = 0
    for seed, (ast, decls) in enumerate(instances):
        r = solve(to_cnf(ast, decls), SearchParams(seed=seed, max_steps=1000))
        if r.sat:
            sat += 1
            bad += not eval_ast(ast, r.model)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 120
    assert report(2, ok, f"{sat} sat, {bad} invalid, {elapsed:.1f}s")


@pytest.mark.criterion(3)
def test_c3_differential_completeness(instances):
    in_box = solved = 0
    missed = []
    for seed, (ast, decls) in enumerate(instances):
        if not brute_force(ast, Box(20), declarations=decls, cap=2 * 10**7).sat:
            continue
        in_box += 1
        r = solve(to_cnf(ast, decls), SearchParams(seed=0, time_limit=10))
        assert not r.sat or eval_ast(ast, r.model)
        if r.sat:
            solved += 1
        else:
            missed.append(seed)
    rate = solved / in_box
    assert report(3, rate >= 0.95, f"{solved}/{in_box} = {rate:.3f}, missed {missed}")


# --------------------------------------------------------------------------
# 4. incrementality

def _random_op(state, rng):
    f = state.formula
    if f.n_bool and (not f.n_int or rng.random() < 0.3):
        return flip_op(rng.randrange(f.n_bool))
    x = rng.randrange(f.n_int)
    cur = state.int_vals[x]
    v = cur
    while v == cur:
        v = cur + rng.choice([-1, 1]) * rng.randint(1, 9)
    return move(x, v, cur)


@pytest.mark.criterion(4)
def test_c4_incrementality():
    steps = 0
    for inst in range(20):
        rng = random.Random(inst)
        f = random_formula(100 + inst)
        s = SearchState(f, rng)
        for _ in range(10**4):
            op = _random_op(s, rng)
            predicted = score(s, op)
            before = s.cost
            s.apply(op)
            assert before - s.cost == predicted
            s.check()
            if rng.random() < 0.05:
                update_weights_paws(s, 0.3, rng)
                s.check()
            steps += 1
        fresh = SearchState(f, assignment=(s.bool_vals, s.int_vals))
        fresh.set_weights(s.weights)
        assert fresh.snapshot() == s.snapshot()
    assert report(4, True, f"{steps} operations checked")


# --------------------------------------------------------------------------
# 5. critical move postcondition

def _random_literal(rng, nonlinear):
    terms = []
    for _ in range(rng.randint(1, 3)):
        deg = rng.randint(1, 2) if nonlinear else 1
        terms.append((rng.choice([c for c in range(-6, 7) if c]), *[rng.randrange(4) for _ in range(deg)]))
    return lit(terms, rng.choice([LE, EQ]), rng.randint(-20, 20), rng.random() < 0.5)


@pytest.mark.criterion(5)
@pytest.mark.parametrize("theory", ["LIA", "NIA"])
def test_c5_postcondition(theory):
    rng = random.Random(1 if theory == "LIA" else 2)
    fn = cm_lia if theory == "LIA" else cm_nia
    pairs = ops = broken = 0
    while pairs < 10**5:
        l = _random_literal(rng, theory == "NIA")
        vals = [rng.randint(-15, 15) for _ in range(4)]
        if not l.atom.lhs or l.holds([], vals):
            continue
        pairs += 1
        for x in l.atom.lhs.variables():
            for op in fn(l, x, vals):
                ops += 1
                after = list(vals)
                after[x] = op.value
                broken += not l.holds([], after)
    assert report(5, broken == 0, f"{theory}: {pairs} pairs, {ops} moves, {broken} broken")


# --------------------------------------------------------------------------
# 6. tabu and determinism

@pytest.mark.criterion(6)
def test_c6_tabu_audit():
    ops = violations = 0
    seed = 0
    while ops < 10**5:
        ast, decls = random_instance(seed)
        f = to_cnf(ast, decls)
        v, n = audit_tabu(f, SearchParams(seed=seed, max_steps=5000))
        violations += v
        ops += n
        seed += 1
    assert report(6, violations == 0, f"{ops} moves audited, {violations} violations")


@pytest.mark.criterion(6)
def test_c6_determinism():
    same = True
    for inst in (11, 22, 31):
        ast, decls = random_instance(inst)
        f = to_cnf(ast, decls)

        def run(seed):
            t = []
            r = solve(f, SearchParams(seed=seed, max_steps=3000), trace=lambda *rec: t.append(rec))
            return t, r.status, r.model

        same &= run(7) == run(7)
    assert report(6, same, "equal seeds give equal traces")


# --------------------------------------------------------------------------
# 7. PAWS

@pytest.mark.criterion(7)
def test_c7_paws_frequency():
    f = smt("(assert (<= x 0))(assert (<= y 0))", ints=["x", "y"])
    s = SearchState(f, assignment=([], [1, 0]))
    rng = random.Random(2024)
    n = 10**5
    hits = sum(update_weights_paws(s, 0.0003, rng) for _ in range(n))
    freq = hits / n
    assert report(7, 0.996 <= freq <= 1.0, f"increment frequency {freq:.5f}")


# --------------------------------------------------------------------------
# 8. smoke benchmark

@pytest.mark.criterion(8)
def test_c8_smoke_benchmark():
    files = sorted(SMOKE.glob("*.smt2"))
    assert len(files) >= 20
    solved, missed = 0, []
    for path in files:
        f = read_formula(path)
        r = solve(f, SearchParams(seed=0, time_limit=10))
        if r.sat:
            solved += 1
        else:
            missed.append(path.stem)
    rate = solved / len(files)
    assert report(8, rate >= 0.9, f"{solved}/{len(files)} = {rate:.3f}, unsolved {missed}")
