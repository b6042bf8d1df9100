from __future__ import annotations

import pytest

from conflictlens.errors import CapacityError, HorizonOverflowError, InputError, TotalityError
from conflictlens.formula import TOP, And, Atom, BoundedFinally, BoundedGlobally, evaluate
from conflictlens.jgraph import EvidenceBase
from conflictlens.sat import count_models
from conflictlens.strategy import (
    GoalSet,
    JointStrategy,
    Strategy,
    build_oracles,
    decision_points,
    encode_strategy,
    enumerate_strategies,
    is_winning,
    max_achievable,
    strategy_count,
)
from conflictlens.world import ActionAlphabet, Assignment, StateVar, TransitionRule, WorldModel, build_possible_worlds

REACH = BoundedFinally(2, Atom("x=2"))
STILL = BoundedGlobally(2, Atom("x=0"))


@pytest.fixture
def worlds():
    m = WorldModel(
        vars=(StateVar.range("x", 0, 2),),
        actions=ActionAlphabet(("inc", "stay"), ("b_idle",), ("idle",)),
        rules=(TransitionRule("inc", TOP, ("inc", None, None), (Assignment("x", source="x", delta=1),)),),
        init=Atom("x=0"),
        horizon=2,
        observable=("x",),
    )
    return build_possible_worlds(EvidenceBase(), m)


def test_decision_points_cover_reachable_observation_classes(worlds) -> None:
    points = decision_points(worlds)
    assert points == (
        (0, (("0",),)),
        (1, (("0",), ("0",))),
        (1, (("0",), ("1",))),
    )


def test_enumeration_is_bounded(worlds) -> None:
    assert len(list(enumerate_strategies("A", worlds))) == strategy_count(2, 3) == 8
    assert len(list(enumerate_strategies("B", worlds))) == 1
    with pytest.raises(CapacityError):
        enumerate_strategies("A", worlds, bound=4)


def test_open_loop_strategy_wins_the_reach_goal(worlds) -> None:
    points = decision_points(worlds)
    always = Strategy.by_step("A", {0: "inc", 1: "inc"}, points, id="always")
    never = Strategy.by_step("A", {0: "stay", 1: "stay"}, points, id="never")
    assert is_winning(always, worlds, REACH) == (True, None)
    wins, witness = is_winning(never, worlds, REACH)
    assert not wins
    assert witness is not None
    assert not evaluate(REACH, witness, 0)


def test_winning_check_respects_the_horizon(worlds) -> None:
    points = decision_points(worlds)
    always = Strategy.by_step("A", {0: "inc", 1: "inc"}, points)
    with pytest.raises(HorizonOverflowError):
        is_winning(always, worlds, BoundedFinally(3, Atom("x=2")))


def test_max_achievable_prefers_the_heavier_goal(worlds) -> None:
    gs = GoalSet.of({"reach": REACH, "still": STILL}, {("reach",): 3, ("still",): 1, ("reach", "still"): 5})
    strategies = list(enumerate_strategies("A", worlds))
    best = max_achievable(worlds, gs, strategies, build_oracles(worlds))
    assert [a.names for a in best] == [["reach"]]
    assert best[0].weight == 3
    assert len(best[0].strategies) == 2
    for s in best[0].strategies:
        assert s.action(0, (("0",),)) == "inc"
        assert s.action(1, (("0",), ("1",))) == "inc"


def test_strategy_tables() -> None:
    point = (0, (("0",),))
    s = Strategy.from_table("A", {point: "inc"}, id="s")
    assert s.action(*point) == "inc"
    assert s.covers([point]) is None
    assert s.covers([point, (1, ())]) == (1, ())
    assert s.describe(("x",)) == ["t0 [x=0]: inc"]
    with pytest.raises(TotalityError):
        s.action(1, ())
    with pytest.raises(TotalityError):
        Strategy.by_step("A", {0: "inc"}, [point, (1, ())])
    with pytest.raises(ValueError):
        Strategy("Env", ())
    with pytest.raises(ValueError):
        JointStrategy(s, s)


def test_goal_set_weights() -> None:
    gs = GoalSet.of({"a": Atom("p"), "b": Atom("q")}, {("a",): 2, ("a", "b"): 5})
    assert gs.weight(["b"]) == 0
    assert gs.weight(["b", "a"]) == 5
    assert gs.best_subsets(frozenset({"a"})) == (2, [frozenset({"a"})])
    assert gs.best_subsets(frozenset({"b"})) == (0, [frozenset()])
    assert gs.conjunction(["b", "a"]) == And(Atom("p"), Atom("q"))
    assert gs.conjunction([]) == TOP


def test_adopted_goals_outweigh_every_listed_subset() -> None:
    gs = GoalSet.of({"a": Atom("p")}, {("a",): 4}).adopt([("keep", Atom("k"))])
    assert gs.adopted == frozenset({"keep"})
    assert gs.weight(["keep"]) == 5
    assert gs.weight(["keep", "a"]) == 9
    assert gs.best_subsets(frozenset({"a", "keep"}))[1] == [frozenset({"a", "keep"})]


def test_negotiated_goal_sets_keep_only_their_own_goals() -> None:
    gs = GoalSet.of({"a": Atom("p"), "b": Atom("q")})
    joint = gs.negotiated(["a", "other"], 7)
    assert joint.names == ("a",)
    assert joint.weights == ((frozenset({"a"}), 7),)
    assert gs.negotiated(["other"], 7).weights == ()


def test_goal_set_validation() -> None:
    with pytest.raises(ValueError):
        GoalSet((("a", TOP), ("a", TOP)))
    with pytest.raises(InputError):
        GoalSet.of({"a": TOP}, {("z",): 1})
    with pytest.raises(ValueError):
        GoalSet.of({"a": TOP}, {("a",): -1})
    with pytest.raises(InputError):
        GoalSet.of({"a": Atom("p")}).union(GoalSet.of({"a": Atom("q")}))
    assert GoalSet.of({"a": TOP}).union(GoalSet.of({"a": TOP, "b": TOP})) == (("a", TOP), ("b", TOP))


def test_encoded_strategy_leaves_one_run_in_a_deterministic_world(worlds) -> None:
    points = decision_points(worlds)
    always = Strategy.by_step("A", {0: "inc", 1: "inc"}, points)
    group = worlds.groups[0]
    m = worlds.model
    unrolling = worlds.unrolling(group)
    projection = [v for t in range(m.last + 1) for v in unrolling.state_vars(t)]
    projection += [unrolling.action_var(a, t) for t in range(m.last) for a in sorted(m.actions.all)]
    assert count_models(unrolling.cnf, projection) == 4
    assert count_models(encode_strategy(always, worlds, group), projection) == 1
    with pytest.raises(TotalityError):
        encode_strategy(Strategy.from_table("A", {points[0]: "inc"}), worlds, group)
