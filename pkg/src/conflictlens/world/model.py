"""
Finite world models.

State variables range over finite ordered value lists. A state is a tuple
of values in declaration order. Propositions are "var=value" atoms and
action atoms named after the action; an action atom holds at position t
iff its owner performs it in the step t -> t+1.

Transition rules are guarded simultaneous assignments. A rule fires when
its guard holds and the joint action matches its pattern (None = any). A
variable no firing rule assigns keeps its value.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from ..errors import InputError, ModelIntegrityError
from ..formula import (
    TOP,
    Atom,
    Formula,
    Implies,
    Next,
    Run,
    atoms,
    conj,
    evaluate,
    is_state_formula,
)

AGENTS = ("A", "B", "Env")

State = Tuple[str, ...]
JointAction = Tuple[str, str, str]


def value_atom(var: str, value: str) -> str:
    return f"{var}={value}"


@dataclass(frozen=True)
class StateVar:
    name: str
    domain: Tuple[str, ...]
    kind: str = "enum"

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(str(v) for v in self.domain))
        if not self.name:
            raise ValueError("state variable name must be nonempty")
        if not self.domain:
            raise ValueError(f"{self.name}: domain must be nonempty")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"{self.name}: domain values must be unique")
        if self.kind not in ("range", "enum", "bool"):
            raise ValueError(f"{self.name}: unknown kind {self.kind}")

    @classmethod
    def range(cls, name: str, low: int, high: int) -> "StateVar":
        if high < low:
            raise ValueError(f"{name}: empty range {low}..{high}")
        return cls(name, tuple(str(v) for v in range(low, high + 1)), "range")

    @classmethod
    def boolean(cls, name: str) -> "StateVar":
        return cls(name, ("false", "true"), "bool")

    @property
    def numeric(self) -> bool:
        return all(_is_int(v) for v in self.domain)

    def index(self, value: str) -> int:
        try:
            return self.domain.index(str(value))
        except ValueError:
            raise InputError(f"{value!r} is not a value of {self.name}") from None

    def atom(self, value: str) -> str:
        return value_atom(self.name, value)

    def atoms(self) -> Tuple[str, ...]:
        return tuple(self.atom(v) for v in self.domain)

    def rank(self, value: str) -> int:
        """Ordering key: the integer itself for numeric domains, else the position."""
        return int(value) if self.numeric else self.index(value)


def _is_int(text: str) -> bool:
    return text.lstrip("-").isdigit()


@dataclass(frozen=True)
class ActionAlphabet:
    a: Tuple[str, ...]
    b: Tuple[str, ...]
    env: Tuple[str, ...]

    def __post_init__(self):
        for agent, acts in zip(AGENTS, (self.a, self.b, self.env)):
            if not acts:
                raise ValueError(f"agent {agent} has no actions")
            if len(set(acts)) != len(acts):
                raise ValueError(f"agent {agent} declares an action twice")
        names = list(self.a) + list(self.b) + list(self.env)
        if len(set(names)) != len(names):
            raise ValueError("action alphabets of A, B and Env must be disjoint")

    def of(self, agent: str) -> Tuple[str, ...]:
        return {"A": self.a, "B": self.b, "Env": self.env}[agent]

    def owner(self, action: str) -> str:
        for agent in AGENTS:
            if action in self.of(agent):
                return agent
        raise InputError(f"unknown action {action!r}")

    @property
    def all(self) -> FrozenSet[str]:
        return frozenset(self.a) | frozenset(self.b) | frozenset(self.env)

    def joint_actions(self) -> List[JointAction]:
        return [(a, b, e) for a in self.a for b in self.b for e in self.env]


@dataclass(frozen=True)
class Assignment:
    """``var := value`` or ``var := source + delta`` (saturating)."""

    var: str
    value: Optional[str] = None
    source: Optional[str] = None
    delta: int = 0

    def __post_init__(self):
        if (self.value is None) == (self.source is None):
            raise ValueError(f"{self.var}: assign either a value or a source variable")
        if self.value is not None and self.delta:
            raise ValueError(f"{self.var}: offsets apply to variables only")

    def result(self, target: StateVar, source: Optional[StateVar], source_value: Optional[str]) -> str:
        if self.value is not None:
            return self.value
        if source.numeric and target.numeric:
            low = min(int(v) for v in target.domain)
            high = max(int(v) for v in target.domain)
            raw = str(max(low, min(high, int(source_value) + self.delta)))
            if raw not in target.domain:
                raise ModelIntegrityError(f"{self.var}: {raw} is not in its domain")
            return raw
        i = max(0, min(len(source.domain) - 1, source.index(source_value) + self.delta))
        moved = source.domain[i]
        if moved not in target.domain:
            raise ModelIntegrityError(f"{self.var}: {moved} is not in its domain")
        return moved

    def describe(self) -> str:
        if self.value is not None:
            return f"{self.var} := {self.value}"
        if self.delta:
            sign = "+" if self.delta > 0 else "-"
            return f"{self.var} := {self.source} {sign} {abs(self.delta)}"
        return f"{self.var} := {self.source}"


@dataclass(frozen=True)
class TransitionRule:
    name: str
    guard: Formula
    pattern: Tuple[Optional[str], Optional[str], Optional[str]]
    assignments: Tuple[Assignment, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignments", tuple(self.assignments))
        if not is_state_formula(self.guard):
            raise ValueError(f"rule {self.name}: guard must be a state formula")
        targets = [a.var for a in self.assignments]
        if len(set(targets)) != len(targets):
            raise ValueError(f"rule {self.name}: a variable is assigned twice")

    @property
    def mentions(self) -> FrozenSet[str]:
        return frozenset(a.var for a in self.assignments)

    def matches(self, joint: JointAction) -> bool:
        return all(p is None or p == act for p, act in zip(self.pattern, joint))

    def effect(self, variables: Dict[str, StateVar]) -> Formula:
        """The rule's effect as a formula over next-step atoms."""
        parts: List[Formula] = []
        for asg in self.assignments:
            target = variables[asg.var]
            if asg.value is not None:
                parts.append(Next(Atom(target.atom(asg.value))))
                continue
            source = variables[asg.source]
            for u in source.domain:
                moved = asg.result(target, source, u)
                parts.append(Implies(Atom(source.atom(u)), Next(Atom(target.atom(moved)))))
        return conj(parts)


@dataclass(frozen=True)
class WorldModel:
    vars: Tuple[StateVar, ...]
    actions: ActionAlphabet
    rules: Tuple[TransitionRule, ...] = ()
    init: Formula = TOP
    history: Tuple[Tuple[int, Formula], ...] = ()
    horizon: int = 1
    observable: Tuple[str, ...] = ()
    _index: Dict[str, StateVar] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "history", tuple(self.history))
        object.__setattr__(self, "observable", tuple(self.observable))
        names = [v.name for v in self.vars]
        if not names:
            raise ValueError("a world model needs at least one state variable")
        if len(set(names)) != len(names):
            raise ValueError("state variable names must be unique")
        object.__setattr__(self, "_index", {v.name: v for v in self.vars})
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        for name in self.observable:
            self.var(name)
        for pos, _ in self.history:
            if pos < 0:
                raise ValueError("history positions start at 0")
        for rule in self.rules:
            for asg in rule.assignments:
                self.var(asg.var)
                if asg.source is not None:
                    self.var(asg.source)
            for slot, act in zip(AGENTS, rule.pattern):
                if act is not None and act not in self.actions.of(slot):
                    raise InputError(f"rule {rule.name}: {act!r} is not an action of {slot}")
            self.check_atoms(rule.guard, allow_actions=False, where=f"rule {rule.name}")
        self.check_atoms(self.init, allow_actions=False, where="INIT")
        for pos, f in self.history:
            self.check_atoms(f, allow_actions=True, where=f"HISTORY {pos}")

    # =========================================================================
    # Lookup
    # =========================================================================

    def var(self, name: str) -> StateVar:
        found = self._index.get(name)
        if found is None:
            raise InputError(f"undeclared state variable {name!r}")
        return found

    @property
    def var_index(self) -> Dict[str, StateVar]:
        return dict(self._index)

    @property
    def now(self) -> int:
        """Position of the current state; positions 0..now are history."""
        return max((pos for pos, _ in self.history), default=0)

    @property
    def last(self) -> int:
        return self.now + self.horizon

    @property
    def decision_steps(self) -> Tuple[int, ...]:
        return tuple(range(self.now, self.last))

    def value_atoms(self) -> FrozenSet[str]:
        return frozenset(a for v in self.vars for a in v.atoms())

    def check_atoms(self, f: Formula, allow_actions: bool = True, where: str = "formula") -> None:
        known = self.value_atoms()
        acts = self.actions.all if allow_actions else frozenset()
        for name in sorted(atoms(f)):
            if name not in known and name not in acts:
                raise InputError(f"{where}: unknown proposition {name!r}")

    def with_horizon(self, horizon: int) -> "WorldModel":
        return replace(self, horizon=horizon)

    def state_atoms(self, state: State) -> FrozenSet[str]:
        return frozenset(v.atom(x) for v, x in zip(self.vars, state))

    def describe_state(self, state: State) -> str:
        return ", ".join(f"{v.name}={x}" for v, x in zip(self.vars, state))

    def observation(self, state: State) -> Tuple[str, ...]:
        return tuple(state[self.position_of(name)] for name in self.observable)

    def position_of(self, name: str) -> int:
        for i, v in enumerate(self.vars):
            if v.name == name:
                return i
        raise InputError(f"undeclared state variable {name!r}")


def firing_rules(m: WorldModel, state: State, joint: JointAction) -> List[TransitionRule]:
    valuation = Run.of(m.state_atoms(state))
    return [r for r in m.rules if r.matches(joint) and evaluate(r.guard, valuation, 0)]


def successor(m: WorldModel, state: State, joint: JointAction) -> State:
    """Explicit successor; raises ModelIntegrityError on clashing assignments."""
    return apply_rules(m, state, joint, firing_rules(m, state, joint))


def apply_rules(
    m: WorldModel,
    state: State,
    joint: JointAction,
    fired: Sequence[TransitionRule],
) -> State:
    index = m.var_index
    values = dict(zip((v.name for v in m.vars), state))
    updates: Dict[str, Tuple[str, str]] = {}
    for rule in fired:
        for asg in rule.assignments:
            source = index[asg.source] if asg.source is not None else None
            new = asg.result(index[asg.var], source, values.get(asg.source))
            previous = updates.get(asg.var)
            if previous is not None and previous[1] != new:
                raise ModelIntegrityError(
                    f"rules {previous[0]} and {rule.name} disagree on {asg.var} "
                    f"in state [{m.describe_state(state)}] under {'/'.join(joint)}",
                    state=tuple(zip(values, state)),
                )
            updates[asg.var] = (rule.name, new)
    return tuple(updates[v.name][1] if v.name in updates else x for v, x in zip(m.vars, state))


