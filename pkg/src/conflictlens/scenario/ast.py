"""
Scenario syntax tree.

Declarations carry their source location; locations never take part in
equality, so a printed and reparsed scenario compares equal to the original.
Formulas are kept in surface form (``Compare`` nodes, bare boolean
variables); ``build`` lowers them against the declared domains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..formula import Formula

AGENT_NAMES = ("A", "B", "Env")
VAR_KINDS = ("range", "enum", "bool")


@dataclass(frozen=True)
class SourceLocation:
    line: int = 0
    column: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


NOWHERE = SourceLocation()


def _loc() -> SourceLocation:
    return field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str
    values: Tuple[str, ...]
    loc: SourceLocation = _loc()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.kind not in VAR_KINDS:
            raise ValueError(f"{self.name}: unknown variable kind {self.kind}")


@dataclass(frozen=True)
class ActionDecl:
    agent: str
    actions: Tuple[str, ...]
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class AssignDecl:
    """``var := rhs [+|- delta]``; ``rhs`` is a variable or a literal value."""

    var: str
    rhs: str
    delta: int = 0
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class RuleDecl:
    name: str
    guard: Optional[Formula]
    pattern: Optional[Tuple[Optional[str], Optional[str], Optional[str]]]
    assignments: Tuple[AssignDecl, ...]
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class InitDecl:
    formula: Formula
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class HistoryDecl:
    position: int
    formula: Formula
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class EvidenceDecl:
    id: str
    tag: str
    formula: Formula
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class GoalDecl:
    name: str
    formula: Formula
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class WeightDecl:
    goals: Tuple[str, ...]
    weight: int
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class AdoptDecl:
    """A goal B takes over; without a formula it names one of A's goals."""

    name: str
    formula: Optional[Formula] = None
    loc: SourceLocation = _loc()


@dataclass(frozen=True)
class Scenario:
    vars: Tuple[VarDecl, ...]
    actions: Tuple[ActionDecl, ...] = ()
    horizon: Optional[int] = None
    observable: Tuple[str, ...] = ()
    rules: Tuple[RuleDecl, ...] = ()
    init: Tuple[InitDecl, ...] = ()
    history: Tuple[HistoryDecl, ...] = ()
    evidence: Tuple[EvidenceDecl, ...] = ()
    goals_a: Tuple[GoalDecl, ...] = ()
    weights_a: Tuple[WeightDecl, ...] = ()
    goals_b: Tuple[GoalDecl, ...] = ()
    weights_b: Tuple[WeightDecl, ...] = ()
    knows: Tuple[EvidenceDecl, ...] = ()
    commits: Tuple[GoalDecl, ...] = ()
    adopts: Tuple[AdoptDecl, ...] = ()
    joint_weights: Optional[Tuple[WeightDecl, ...]] = None
    horizon_loc: SourceLocation = _loc()

    def var_index(self) -> Dict[str, VarDecl]:
        return {v.name: v for v in self.vars}

    def alphabet(self, agent: str) -> Tuple[str, ...]:
        out: Tuple[str, ...] = ()
        for decl in self.actions:
            if decl.agent == agent:
                out += decl.actions
        return out

    @property
    def action_names(self) -> Tuple[str, ...]:
        return tuple(a for decl in self.actions for a in decl.actions)

    def goal_a(self, name: str) -> Optional[GoalDecl]:
        return next((g for g in self.goals_a if g.name == name), None)
