from __future__ import annotations

import itertools

from hypothesis import given, settings, strategies as st

from conflictlens.sat import CnfFormula, minimize_core, solve

NUM_VARS = 6

literals = st.integers(min_value=1, max_value=NUM_VARS).flatmap(
    lambda v: st.sampled_from([v, -v])
)
clauses = st.lists(literals, min_size=1, max_size=3).map(tuple)
formulas = st.lists(clauses, min_size=0, max_size=14).map(
    lambda cs: CnfFormula.of(cs, num_vars=NUM_VARS)
)
assumption_sets = st.lists(
    st.integers(min_value=1, max_value=NUM_VARS), unique=True, max_size=NUM_VARS
).flatmap(lambda vs: st.tuples(*[st.sampled_from([v, -v]) for v in vs]))


def brute_force(f: CnfFormula, assumptions=()) -> bool:
    for bits in itertools.product((False, True), repeat=f.num_vars):
        valuation = {v + 1: bits[v] for v in range(f.num_vars)}
        if all(valuation[abs(a)] == (a > 0) for a in assumptions) and f.satisfied_by(valuation):
            return True
    return False


@settings(max_examples=500, deadline=None)
@given(f=formulas, seed=st.integers(min_value=0, max_value=3))
def test_solver_agrees_with_truth_tables(f: CnfFormula, seed: int) -> None:
    result = solve(f, seed=seed)
    assert result.satisfiable == brute_force(f)
    if result.satisfiable:
        assert f.satisfied_by({abs(lit): lit > 0 for lit in result.model})


@settings(max_examples=300, deadline=None)
@given(f=formulas, assumptions=assumption_sets)
def test_assumptions_agree_with_truth_tables(f: CnfFormula, assumptions) -> None:
    result = solve(f, list(assumptions))
    assert result.satisfiable == brute_force(f, assumptions)
    if result.satisfiable:
        model = {abs(lit): lit > 0 for lit in result.model}
        assert all(model[abs(a)] == (a > 0) for a in assumptions)
    else:
        assert set(result.core) <= set(assumptions)
        assert not brute_force(f, result.core)


@settings(max_examples=100, deadline=None)
@given(f=formulas, assumptions=assumption_sets)
def test_minimized_cores_are_minimal(f: CnfFormula, assumptions) -> None:
    if brute_force(f, assumptions):
        return
    core = minimize_core(f, list(assumptions))
    assert set(core) <= set(assumptions)
    assert not brute_force(f, core)
    for lit in core:
        assert brute_force(f, [x for x in core if x != lit])


WIDE_VARS = 20

wide_literals = st.integers(min_value=1, max_value=WIDE_VARS).flatmap(
    lambda v: st.sampled_from([v, -v])
)
wide_formulas = st.lists(
    st.lists(wide_literals, min_size=1, max_size=3).map(tuple), min_size=0, max_size=90
).map(lambda cs: CnfFormula.of(cs, num_vars=WIDE_VARS))
wide_assumptions = st.lists(
    st.integers(min_value=1, max_value=WIDE_VARS), unique=True, max_size=8
).flatmap(lambda vs: st.tuples(*[st.sampled_from([v, -v]) for v in vs]))


def _assign(clauses, lit):
    return [c - {-lit} for c in clauses if lit not in c]


def dpll(clauses) -> bool:
    """Plain splitting with unit propagation, sharing nothing with the solver under test."""
    while True:
        if not clauses:
            return True
        if any(not c for c in clauses):
            return False
        unit = next((c for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        clauses = _assign(clauses, next(iter(unit)))
    lit = next(iter(min(clauses, key=len)))
    return dpll(_assign(clauses, lit)) or dpll(_assign(clauses, -lit))


def satisfiable(f: CnfFormula, assumptions=()) -> bool:
    return dpll([frozenset(c) for c in f.clauses] + [frozenset({a}) for a in assumptions])


@settings(max_examples=500, deadline=None)
@given(f=wide_formulas, seed=st.integers(min_value=0, max_value=3))
def test_wide_formulas_agree_with_splitting(f: CnfFormula, seed: int) -> None:
    result = solve(f, seed=seed)
    assert result.satisfiable == satisfiable(f)
    if result.satisfiable:
        assert f.satisfied_by({abs(lit): lit > 0 for lit in result.model})


@settings(max_examples=150, deadline=None)
@given(f=wide_formulas, assumptions=wide_assumptions)
def test_wide_cores_are_unsatisfiable_and_minimal(f: CnfFormula, assumptions) -> None:
    result = solve(f, list(assumptions))
    assert result.satisfiable == satisfiable(f, assumptions)
    if result.satisfiable:
        model = {abs(lit): lit > 0 for lit in result.model}
        assert all(model[abs(a)] == (a > 0) for a in assumptions)
        return
    assert set(result.core) <= set(assumptions)
    assert not satisfiable(f, result.core)
    core = minimize_core(f, list(assumptions))
    assert not satisfiable(f, core)
    for lit in core:
        assert satisfiable(f, [x for x in core if x != lit])
