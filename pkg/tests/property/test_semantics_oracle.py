from __future__ import annotations

import itertools
from functools import lru_cache

from hypothesis import HealthCheck, given, settings, strategies as st

from conflictlens.formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    BoundedFinally,
    BoundedGlobally,
    Finally,
    Formula,
    Globally,
    Historically,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Prev,
    Run,
    Since,
    Until,
    encode,
    evaluate,
    expand,
    is_core,
    temporal_depth,
)
from conflictlens.sat import solve

NAMES = ("p", "q", "r")

leaves = st.sampled_from([Atom("p"), Atom("q"), Atom("r"), TOP, BOTTOM])


def _grow(children):
    unary = st.sampled_from([Not, Next, Prev, Globally, Finally, Historically])
    binary = st.sampled_from([And, Or, Implies, Iff, Until, Since])
    bound = st.integers(min_value=0, max_value=2)
    return st.one_of(
        st.builds(lambda op, f: op(f), unary, children),
        st.builds(lambda op, f, g: op(f, g), binary, children, children),
        st.builds(BoundedGlobally, bound, children),
        st.builds(BoundedFinally, bound, children),
    )


formulas = st.recursive(leaves, _grow, max_leaves=6)
runs = st.lists(
    st.frozensets(st.sampled_from(NAMES)), min_size=1, max_size=4
).map(lambda states: Run(tuple(states)))


def reference(root: Formula, run: Run, t: int) -> bool:
    """Direct recursive reading of the stuttered finite-run semantics."""
    last = run.length + temporal_depth(root) - 1

    def state(i: int):
        return run.states[min(i, run.length - 1)]

    @lru_cache(maxsize=None)
    def holds(f: Formula, i: int) -> bool:
        if f == TOP:
            return True
        if f == BOTTOM:
            return False
        if isinstance(f, Atom):
            return f.name in state(i)
        if isinstance(f, Not):
            return not holds(f.body, i)
        if isinstance(f, And):
            return holds(f.left, i) and holds(f.right, i)
        if isinstance(f, Or):
            return holds(f.left, i) or holds(f.right, i)
        if isinstance(f, Implies):
            return not holds(f.left, i) or holds(f.right, i)
        if isinstance(f, Iff):
            return holds(f.left, i) == holds(f.right, i)
        if isinstance(f, Next):
            return holds(f.body, min(i + 1, last))
        if isinstance(f, Prev):
            return i > 0 and holds(f.body, i - 1)
        if isinstance(f, Until):
            if holds(f.right, i):
                return True
            return i < last and holds(f.left, i) and holds(f, i + 1)
        if isinstance(f, Since):
            if holds(f.right, i):
                return True
            return i > 0 and holds(f.left, i) and holds(f, i - 1)
        if isinstance(f, Globally):
            return holds(f.body, i) and (i == last or holds(f, i + 1))
        if isinstance(f, Finally):
            return holds(f.body, i) or (i < last and holds(f, i + 1))
        if isinstance(f, Historically):
            return holds(f.body, i) and (i == 0 or holds(f, i - 1))
        if isinstance(f, BoundedGlobally):
            return all(holds(f.body, min(j, last)) for j in range(i, i + f.bound + 1))
        if isinstance(f, BoundedFinally):
            return any(holds(f.body, min(j, last)) for j in range(i, i + f.bound + 1))
        raise AssertionError(f"unexpected node {f!r}")

    return holds(root, t)


@settings(max_examples=1000, deadline=None)
@given(f=formulas, run=runs, data=st.data())
def test_evaluate_matches_the_recursive_reading(f: Formula, run: Run, data) -> None:
    t = data.draw(st.integers(min_value=0, max_value=run.length - 1))
    assert evaluate(f, run, t) == reference(f, run, t)


def _grow_future(children):
    unary = st.sampled_from([Not, Next, Globally, Finally])
    binary = st.sampled_from([And, Or, Implies, Iff, Until])
    bound = st.integers(min_value=0, max_value=2)
    return st.one_of(
        st.builds(lambda op, f: op(f), unary, children),
        st.builds(lambda op, f, g: op(f, g), binary, children, children),
        st.builds(BoundedGlobally, bound, children),
        st.builds(BoundedFinally, bound, children),
    )


future_formulas = st.recursive(leaves, _grow_future, max_leaves=6)
shallow_formulas = st.recursive(leaves, _grow, max_leaves=5).filter(lambda f: temporal_depth(f) <= 3)


def _runs_of(horizon: int):
    return st.lists(
        st.frozensets(st.sampled_from(NAMES)), min_size=horizon + 1, max_size=horizon + 1
    ).map(lambda states: Run(tuple(states)))


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(f=shallow_formulas, data=st.data())
def test_encoding_agrees_with_evaluation_on_random_formulas(f: Formula, data) -> None:
    horizon = data.draw(st.integers(min_value=max(1, temporal_depth(f)), max_value=3))
    cnf, atom_map = encode(f, horizon)
    for run in data.draw(st.lists(_runs_of(horizon), min_size=1, max_size=4)):
        assumptions = [
            var if name in run.states[t] else -var for (name, t), var in sorted(atom_map.items())
        ]
        assert solve(cnf, assumptions).satisfiable == evaluate(f, run, 0)
    result = solve(cnf)
    if result.satisfiable:
        truth = {abs(lit): lit > 0 for lit in result.model}
        witness = Run(tuple(
            frozenset(name for (name, t), var in atom_map.items() if t == i and truth[var])
            for i in range(horizon + 1)
        ))
        assert evaluate(f, witness, 0)


@settings(max_examples=500, deadline=None)
@given(f=future_formulas, run=runs, extra=st.integers(min_value=1, max_value=3), data=st.data())
def test_future_formulas_ignore_stuttering(f: Formula, run: Run, extra: int, data) -> None:
    t = data.draw(st.integers(min_value=0, max_value=run.length - 1))
    assert evaluate(f, run.stutter(extra), t) == evaluate(f, run, t)


@settings(max_examples=1000, deadline=None)
@given(f=formulas, run=runs, data=st.data())
def test_expand_preserves_truth(f: Formula, run: Run, data) -> None:
    core = expand(f)
    assert is_core(core)
    assert temporal_depth(core) == temporal_depth(f)
    t = data.draw(st.integers(min_value=0, max_value=run.length - 1))
    assert evaluate(core, run, t) == evaluate(f, run, t)


def test_until_has_as_many_models_as_runs_satisfying_it() -> None:
    f = Until(Atom("p"), Atom("q"))
    horizon = 3
    cnf, atom_map = encode(f, horizon)
    cells = sorted(atom_map)
    count = 0
    for bits in itertools.product((False, True), repeat=len(cells)):
        truth = dict(zip(cells, bits))
        run = Run(tuple(
            frozenset(n for n in ("p", "q") if truth[(n, t)]) for t in range(horizon + 1)
        ))
        satisfied = evaluate(f, run, 0)
        assumptions = [atom_map[c] if truth[c] else -atom_map[c] for c in cells]
        assert solve(cnf, assumptions).satisfiable == satisfied
        count += satisfied
    assert 0 < count < 2 ** len(cells)
