import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lsia.formula import EQ, LE
from lsia.generate import random_formula
from lsia.operators import flip_op, move
from lsia.state import (
    SearchState, compute_dtt, compute_dts, dscore, init_assignment, score, update_weights_paws,
)

from conftest import lit, smt

# clauses: (a-b<=-1), (a-c<=-5 | a-d<=-10), (b-c<=-5 | b-d<=-10)
WEIGHTED = (
    "(assert (<= (- a b) (- 1)))"
    "(assert (or (<= (- a c) (- 5)) (<= (- a d) (- 10))))"
    "(assert (or (<= (- b c) (- 5)) (<= (- b d) (- 10))))"
)


@pytest.fixture
def weighted():
    f = smt(WEIGHTED, ints="abcd", logic="QF_LIA")
    s = SearchState(f, assignment=([], [0, 0, 0, 0]))
    s.set_weights([1, 2, 3])
    return s


def test_init_assignment():
    f = smt("(assert (<= x 7))(assert (>= x 2))(assert (or p (<= (+ x y) 3)))", ints=["x", "y"], bools=["p"])
    rng = random.Random(0)
    seen = set()
    for _ in range(200):
        b, i = init_assignment(f, rng)
        assert b == [True] and i[1] == 0 and 2 <= i[0] <= 7
        seen.add(i[0])
    assert seen == set(range(2, 8))


def test_init_one_sided_bounds():
    f = smt("(assert (<= x 7))(assert (>= y (- 3)))", ints=["x", "y"])
    assert init_assignment(f, random.Random(0))[1] == [7, -3]


def test_dtt_examples():
    a_b = lit([(1, 0), (-1, 1)], LE, -1)
    a_c = lit([(1, 0), (-1, 2)], LE, -5)
    assert compute_dtt(a_b, [], [0, 0, 0, 0]) == 1
    assert compute_dtt(a_c, [], [0, 0, 0, 0]) == 5
    assert compute_dtt(a_c, [], [-5, 0, 0, 0]) == 0


def test_dtt_negated_and_equalities():
    le = lit([(1, 0)], LE, 3, positive=False)  # x > 3
    assert compute_dtt(le, [], [0]) == 4 and compute_dtt(le, [], [4]) == 0
    eq = lit([(1, 0)], EQ, 3)
    assert compute_dtt(eq, [], [0]) == 1 and compute_dtt(eq, [], [3]) == 0
    assert compute_dtt(eq.negate(), [], [3]) == 1 and compute_dtt(eq.negate(), [], [0]) == 0


def test_dts_examples(weighted):
    c1, c2, c3 = weighted.formula.clauses
    z = [0, 0, 0, 0]
    assert compute_dts(c2, [], z) == 5 and compute_dts(c3, [], z) == 5
    assert compute_dts(c1, [], [-1, 0, 0, 0]) == 0
    assert weighted.dts == [1, 5, 5]


def test_scores(weighted):
    op1, op2 = move(0, -1, 0), move(1, 1, 0)
    assert score(weighted, op1) == 1 and score(weighted, op2) == 1
    assert dscore(weighted, op1) == 3 and dscore(weighted, op2) == -2


def test_apply_updates_cost_and_dts(weighted):
    cost = weighted.cost
    assert cost == 6
    weighted.apply(move(0, -1, 0))
    assert weighted.cost == cost - 1 and weighted.dts[1] == 4
    weighted.check()


def test_score_equals_cost_change(weighted):
    for op in [move(0, -1, 0), move(1, 1, 0), move(2, 9, 0), move(3, -4, 0)]:
        before = weighted.cost
        predicted = score(weighted, op)
        undo = weighted.apply(op)
        assert before - weighted.cost == predicted
        weighted.apply(undo)


def test_score_zero_when_nothing_changes():
    f = smt("(assert (or (<= x 0) (<= y 0)))(assert (<= z 5))", ints=["x", "y", "z"])
    s = SearchState(f, assignment=([], [0, 0, 0]))
    assert score(s, move(0, 1, 0)) == 0 and dscore(s, move(0, 1, 0)) == 0


def test_flip_involution():
    f = smt("(assert (or p (<= x 0)))(assert (or (not p) q))", ints=["x"], bools=["p", "q"])
    s = SearchState(f, assignment=([True, False], [3]))
    before = s.snapshot()
    s.apply(flip_op(0))
    assert s.bool_vals[0] is False
    s.apply(flip_op(0))
    assert s.snapshot() == before


def test_flip_score_matches_clause_delta():
    f = smt("(assert (or p (<= x 0)))(assert (or (not p) q))(assert (or (not p) (not q)))", ints=["x"], bools=["p", "q"])
    s = SearchState(f, assignment=([True, True], [3]))
    s.set_weights([2, 3, 5])
    for v in range(2):
        before = s.cost
        sc = score(s, flip_op(v))
        undo = s.apply(flip_op(v))
        assert before - s.cost == sc
        s.apply(undo)


def test_noop_move_rejected(weighted):
    with pytest.raises(ValueError):
        weighted.apply(move(0, 0, 0))


def test_paws_sp_zero(weighted):
    w = list(weighted.weights)
    assert update_weights_paws(weighted, 0.0, random.Random(1))
    assert weighted.weights == [x + 1 for x in w]
    weighted.check()


def test_paws_sp_one():
    f = smt("(assert (<= x 0))(assert (<= y 0))(assert (<= z 0))", ints=["x", "y", "z"])
    s = SearchState(f, assignment=([], [0, 0, 5]))
    s.set_weights([3, 1, 4])
    assert not update_weights_paws(s, 1.0, random.Random(1))
    assert s.weights == [2, 1, 4]
    for _ in range(5):
        update_weights_paws(s, 1.0)
    assert s.weights == [1, 1, 4]
    s.check()


def test_paws_frequency():
    f = smt("(assert (<= x 0))", ints=["x"])
    s = SearchState(f, assignment=([], [1]))
    rng = random.Random(12)
    n = 20000
    hits = sum(update_weights_paws(s, 0.0003, rng) for _ in range(n))
    assert 0.996 <= hits / n <= 1.0


def test_literal_proportions():
    f = smt("(assert (or p q (<= x 0)))(assert (or (not p) (<= y 0)))", ints=["x", "y"], bools=["p", "q"])
    s = SearchState(f, assignment=([False, False], [1, 1]))
    assert s.literal_proportions() == (2 / 3, 1 / 3)
    s.apply(move(0, 0, 1))
    assert s.literal_proportions() == (0.0, 0.0)


def _random_op(state, rng):
    f = state.formula
    if f.n_bool and (not f.n_int or rng.random() < 0.3):
        return flip_op(rng.randrange(f.n_bool))
    x = rng.randrange(f.n_int)
    cur = state.int_vals[x]
    v = cur
    while v == cur:
        v = cur + rng.choice([-1, 1]) * rng.randint(1, 7)
    return move(x, v, cur)


@pytest.mark.parametrize("seed", range(10))
def test_incremental_matches_recomputation(seed):
    rng = random.Random(seed)
    f = random_formula(seed)
    s = SearchState(f, rng)
    s.set_weights([rng.randint(1, 4) for _ in f.clauses])
    for _ in range(300):
        op = _random_op(s, rng)
        predicted = score(s, op)
        before = s.cost
        s.apply(op)
        assert before - s.cost == predicted
        s.check()
        fresh = SearchState(f, assignment=(s.bool_vals, s.int_vals))
        fresh.set_weights(s.weights)
        assert fresh.snapshot() == s.snapshot()
        if rng.random() < 0.1:
            update_weights_paws(s, 0.3, rng)
            s.check()


@given(st.integers(0, 10**6), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_undo_restores_state(seed, vals):
    f = random_formula(seed % 500)
    rng = random.Random(seed)
    s = SearchState(f, assignment=([False] * f.n_bool, vals[: f.n_int]))
    before = s.snapshot()
    op = _random_op(s, rng)
    s.apply(s.apply(op))
    assert s.snapshot() == before


def test_dscore_linear_only_decreases_are_counted(weighted):
    # moving c downward worsens both c2 and c3 distances
    assert dscore(weighted, move(2, -3, 0)) == -(3 * 2 + 3 * 3)
