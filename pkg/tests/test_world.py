from __future__ import annotations

import pytest

from conflictlens.errors import EvidenceIncompatibleError, InputError, ModelIntegrityError
from conflictlens.formula import TOP, And, Atom, Not
from conflictlens.jgraph import BeliefAtom, EvidenceBase, EvidenceItem
from conflictlens.sat import count_models
from conflictlens.world import (
    MODEL_ATOM,
    ActionAlphabet,
    Assignment,
    StateVar,
    TransitionRule,
    WorldModel,
    build_possible_worlds,
    check_integrity,
    histories,
    initial_states,
    runs,
    state_of,
    successor,
    unroll,
)

X = StateVar.range("x", 0, 2)
LIGHT = StateVar("light", ("red", "green"))
ALPHABET = ActionAlphabet(("inc", "stay"), ("b_idle",), ("idle",))
INC = TransitionRule(
    "inc", TOP, ("inc", None, None), (Assignment("x", source="x", delta=1),)
)


def counter(horizon: int = 2, **kwargs) -> WorldModel:
    return WorldModel(
        vars=(X, LIGHT),
        actions=ALPHABET,
        rules=(INC,),
        init=And(Atom("x=0"), Atom("light=red")),
        horizon=horizon,
        observable=("x",),
        **kwargs,
    )


def test_state_variable_domains() -> None:
    assert X.domain == ("0", "1", "2")
    assert X.atoms() == ("x=0", "x=1", "x=2")
    assert X.numeric and not LIGHT.numeric
    assert StateVar.boolean("b").domain == ("false", "true")
    assert LIGHT.rank("green") == 1
    with pytest.raises(ValueError):
        StateVar.range("y", 3, 1)
    with pytest.raises(ValueError):
        StateVar("y", ("a", "a"))
    with pytest.raises(InputError):
        X.index("7")


def test_action_alphabets_are_disjoint_and_nonempty() -> None:
    with pytest.raises(ValueError):
        ActionAlphabet(("go",), ("go",), ("idle",))
    with pytest.raises(ValueError):
        ActionAlphabet(("go",), (), ("idle",))
    assert ALPHABET.owner("b_idle") == "B"
    assert len(ALPHABET.joint_actions()) == 2
    with pytest.raises(InputError):
        ALPHABET.owner("fly")


def test_assignments_saturate_at_the_domain_ends() -> None:
    up = Assignment("x", source="x", delta=1)
    assert up.result(X, X, "1") == "2"
    assert up.result(X, X, "2") == "2"
    down = Assignment("light", source="light", delta=-1)
    assert down.result(LIGHT, LIGHT, "red") == "red"
    assert up.describe() == "x := x + 1"
    with pytest.raises(ValueError):
        Assignment("x")
    with pytest.raises(ValueError):
        Assignment("x", value="1", delta=1)


def test_successor_applies_firing_rules_only() -> None:
    m = counter()
    assert successor(m, ("0", "red"), ("inc", "b_idle", "idle")) == ("1", "red")
    assert successor(m, ("0", "red"), ("stay", "b_idle", "idle")) == ("0", "red")


def test_clashing_rules_are_a_model_error() -> None:
    reset = TransitionRule("reset", TOP, (None, "b_idle", None), (Assignment("x", value="0"),))
    m = WorldModel(vars=(X,), actions=ALPHABET, rules=(INC, reset), init=Atom("x=0"))
    with pytest.raises(ModelIntegrityError):
        successor(m, ("0",), ("inc", "b_idle", "idle"))
    with pytest.raises(ModelIntegrityError):
        check_integrity(m)


def test_world_model_validates_references() -> None:
    with pytest.raises(InputError):
        WorldModel(vars=(X,), actions=ALPHABET, init=Atom("y=1"))
    with pytest.raises(InputError):
        WorldModel(vars=(X,), actions=ALPHABET, observable=("y",))
    with pytest.raises(ValueError):
        WorldModel(vars=(X,), actions=ALPHABET, horizon=0)
    with pytest.raises(InputError):
        WorldModel(vars=(X,), actions=ALPHABET, init=Atom("inc"))


def test_timeline_positions() -> None:
    m = counter(horizon=2, history=((1, Atom("x=1")),))
    assert m.now == 1
    assert m.last == 3
    assert m.decision_steps == (1, 2)
    assert counter().now == 0


def test_initial_states_follow_init() -> None:
    assert initial_states(counter()) == [("0", "red")]
    free = WorldModel(vars=(X,), actions=ALPHABET)
    assert initial_states(free) == [("0",), ("1",), ("2",)]


def test_unrolling_has_one_model_per_explicit_run() -> None:
    m = counter()
    explicit = runs(m)
    assert len(explicit) == 4
    unrolling = unroll(m)
    projection = [v for t in range(m.last + 1) for v in unrolling.state_vars(t)]
    projection += [unrolling.action_var(a, t) for t in range(m.last) for a in sorted(ALPHABET.all)]
    assert count_models(unrolling.cnf, projection) == len(explicit)


def test_state_of_reads_back_a_run() -> None:
    m = counter()
    run = runs(m)[0]
    assert state_of(m, run, 0) == ("0", "red")
    assert state_of(m, run, 99) is not None


def test_possible_worlds_keep_one_group_per_consistent_reading() -> None:
    m = WorldModel(vars=(X, LIGHT), actions=ALPHABET, rules=(INC,), init=Atom("x=0"))
    base = EvidenceBase((
        EvidenceItem(BeliefAtom("cam"), Atom("light=red")),
        EvidenceItem(BeliefAtom("radar"), Atom("light=green")),
    ))
    ws = build_possible_worlds(base, m)
    assert [g.label for g in ws] == ["{cam}", "{radar}"]
    assert len(ws) == 2


def test_evidence_against_the_dynamics_is_rejected() -> None:
    m = counter()
    base = EvidenceBase((EvidenceItem(BeliefAtom("gps"), Atom("x=2")),))
    with pytest.raises(EvidenceIncompatibleError) as info:
        build_possible_worlds(base, m)
    assert info.value.core == ("gps", MODEL_ATOM)


def test_histories_enumerate_the_past_of_every_group() -> None:
    m = counter(history=((1, Not(Atom("x=0"))),))
    ws = build_possible_worlds(EvidenceBase(), m)
    assert histories(ws) == {
        (frozenset({"x=0", "light=red"}), frozenset({"x=1", "light=red"})),
    }
