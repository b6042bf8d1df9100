"""Winning checks, goal-set search and unrolling against explicit simulation on random small models."""

from __future__ import annotations

import itertools

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from conflictlens.formula import TOP, And, Atom, BoundedFinally, BoundedGlobally, Implies, Next, Not, Until, evaluate, temporal_depth
from conflictlens.jgraph import EvidenceBase
from conflictlens.sat import count_models, solve
from conflictlens.strategy import (
    GameTree,
    GoalSet,
    Strategy,
    decision_points,
    enumerate_strategies,
    is_winning,
    joint_strategies,
    max_achievable,
)
from conflictlens.world import (
    ActionAlphabet,
    Assignment,
    StateVar,
    TransitionRule,
    WorldModel,
    build_possible_worlds,
    firing_rules,
    runs,
    state_of,
    unroll,
)

X = StateVar.range("x", 0, 2)
Y = StateVar.boolean("y")
ALPHABET = ActionAlphabet(("a0", "a1"), ("b0", "b1"), ("e0", "e1"))

GOALS = (
    Atom("x=0"),
    Atom("a0"),
    BoundedFinally(1, Atom("x=2")),
    BoundedGlobally(1, Atom("y=false")),
    Implies(Atom("b1"), Next(Atom("x=1"))),
    Until(Not(Atom("x=2")), Atom("y=true")),
    BoundedFinally(2, And(Atom("x=1"), Atom("y=true"))),
    Next(Next(Atom("x=0"))),
)

guards = st.sampled_from([TOP, Atom("x=0"), Not(Atom("x=2")), Atom("y=true")])
patterns = st.tuples(
    st.sampled_from([None, "a0", "a1"]),
    st.sampled_from([None, "b0", "b1"]),
    st.sampled_from([None, "e0", "e1"]),
)
x_moves = st.sampled_from([
    Assignment("x", source="x", delta=1),
    Assignment("x", source="x", delta=-1),
    Assignment("x", value="0"),
])
y_moves = st.sampled_from([Assignment("y", value="true"), Assignment("y", value="false")])


def _rule(name: str, moves):
    return st.builds(lambda g, p, a: TransitionRule(name, g, p, (a,)), guards, patterns, moves)


@st.composite
def models(draw):
    rules = [draw(_rule("rx", x_moves))]
    if draw(st.booleans()):
        rules.append(draw(_rule("ry", y_moves)))
    return WorldModel(
        vars=(X, Y),
        actions=ALPHABET,
        rules=tuple(rules),
        init=draw(st.sampled_from([And(Atom("x=0"), Atom("y=false")), Atom("x=0"), TOP])),
        horizon=draw(st.integers(min_value=1, max_value=2)),
        observable=draw(st.sampled_from([(), ("x",), ("y",)])),
    )


@st.composite
def goal_sets(draw, horizon: int):
    pool = [g for g in GOALS if temporal_depth(g) <= horizon]
    chosen = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=3, unique_by=str))
    names = [f"g{i}" for i in range(len(chosen))]
    weights = {
        combo: draw(st.integers(min_value=0, max_value=4))
        for k in range(1, len(names) + 1)
        for combo in itertools.combinations(names, k)
    }
    return GoalSet.of(dict(zip(names, chosen)), weights)


def _subsets(names):
    names = sorted(names)
    return [frozenset(c) for k in range(len(names) + 1) for c in itertools.combinations(names, k)]


def _follows(m: WorldModel, run, table, acts) -> bool:
    for t in m.decision_steps:
        cls = tuple(m.observation(state_of(m, run, i)) for i in range(t + 1))
        (act,) = run.states[t] & frozenset(acts)
        if table[(t, cls)] != act:
            return False
    return True


def _pins(unrolling, m: WorldModel, run, upto: int):
    pins = []
    for t in range(upto + 1):
        for v in m.vars:
            for x in v.domain:
                var = unrolling.value_var(v.name, x, t)
                pins.append(var if v.atom(x) in run.states[t] else -var)
        if t < m.last:
            for a in sorted(m.actions.all):
                var = unrolling.action_var(a, t)
                pins.append(var if a in run.states[t] else -var)
    return pins


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(m=models())
def test_unrolling_has_exactly_the_explicit_runs(m: WorldModel) -> None:
    explicit = runs(m)
    unrolling = unroll(m)
    cnf = unrolling.cnf
    projection = [v for t in range(m.last + 1) for v in unrolling.state_vars(t)]
    projection += [unrolling.action_var(a, t) for t in range(m.last) for a in sorted(m.actions.all)]
    assert count_models(cnf, projection) == len(explicit)
    for run in explicit:
        assert solve(cnf, _pins(unrolling, m, run, m.last)).satisfiable


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(m=models(), data=st.data())
def test_unassigned_variables_keep_their_value(m: WorldModel, data) -> None:
    run = data.draw(st.sampled_from(runs(m)))
    unrolling = unroll(m)
    cnf = unrolling.cnf
    for t in range(m.last):
        state = state_of(m, run, t)
        joint = tuple(next(iter(run.states[t] & frozenset(m.actions.of(agent)))) for agent in ("A", "B", "Env"))
        touched = {asg.var for rule in firing_rules(m, state, joint) for asg in rule.assignments}
        pins = _pins(unrolling, m, run, t)
        for i, v in enumerate(m.vars):
            if v.name in touched:
                continue
            assert state_of(m, run, t + 1)[i] == state[i]
            for other in v.domain:
                if other == state[i]:
                    continue
                moved = pins + [unrolling.value_var(v.name, other, t + 1)]
                assert not solve(cnf, moved).satisfiable


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(m=models(), data=st.data())
def test_winning_check_matches_simulation(m: WorldModel, data) -> None:
    ws = build_possible_worlds(EvidenceBase(), m)
    goal = data.draw(st.sampled_from([g for g in GOALS if temporal_depth(g) <= m.horizon]))
    table = {p: data.draw(st.sampled_from(ALPHABET.a)) for p in decision_points(ws)}
    wins, witness = is_winning(Strategy.from_table("A", table), ws, goal)
    followed = [r for r in runs(m) if _follows(m, r, table, ALPHABET.a)]
    assert followed
    assert wins == all(evaluate(goal, r, m.now) for r in followed)
    if witness is not None:
        assert not evaluate(goal, witness, m.now)
        assert _follows(m, witness, table, ALPHABET.a)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(m=models(), data=st.data())
def test_max_achievable_matches_brute_force(m: WorldModel, data) -> None:
    ws = build_possible_worlds(EvidenceBase(), m)
    assume(len(decision_points(ws)) <= 4)
    gs = data.draw(goal_sets(m.horizon))
    strategies = list(enumerate_strategies("A", ws))
    explicit = runs(m)
    won = {}
    for s in strategies:
        followed = [r for r in explicit if _follows(m, r, s.table, ALPHABET.a)]
        won[s] = frozenset(
            n for n in gs.names if all(evaluate(gs.formula(n), r, m.now) for r in followed)
        )
    best = max(gs.weight(sub) for w in won.values() for sub in _subsets(w))
    if best:
        expected = {sub for w in won.values() for sub in _subsets(w) if gs.weight(sub) == best}
    else:
        expected = {frozenset()}

    result = max_achievable(ws, gs, strategies)
    assert {a.goals for a in result} == expected
    for a in result:
        assert a.weight == best
        assert set(a.strategies) == {s for s, w in won.items() if a.goals <= w}


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(m=models(), data=st.data())
def test_cooperative_search_matches_joint_enumeration(m: WorldModel, data) -> None:
    ws = build_possible_worlds(EvidenceBase(), m)
    assume(len(decision_points(ws)) <= 3)
    gs = data.draw(goal_sets(m.horizon))
    joint = joint_strategies(list(enumerate_strategies("A", ws)), list(enumerate_strategies("B", ws)))
    expected = max_achievable(ws, gs, joint)
    got = GameTree(ws).achievements(gs)
    assert [(a.goals, a.weight) for a in got] == [(a.goals, a.weight) for a in expected]
    for a in got:
        (witness,) = a.strategies
        assert is_winning(witness, ws, gs.conjunction(a.goals))[0]
