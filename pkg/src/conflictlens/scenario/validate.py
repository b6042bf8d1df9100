"""
Static checks on a parsed scenario.

Parsing already guarantees that every identifier is declared; this pass
checks what only makes sense on the whole file (alphabet disjointness,
goal depths against the horizon, fragment restrictions) and reports
everything it finds instead of stopping at the first problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Set

from ..formula import (
    Atom,
    Believes,
    BoundedFinally,
    BoundedGlobally,
    Compare,
    Formula,
    contains_belief,
    is_state_formula,
    temporal_depth,
    walk,
)
from .ast import AGENT_NAMES, Scenario, SourceLocation, VarDecl

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int = 0
    column: int = 0

    @classmethod
    def at(cls, severity: str, message: str, loc: SourceLocation) -> "Diagnostic":
        return cls(severity, message, loc.line, loc.column)

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def __str__(self) -> str:
        where = f"{self.line}:{self.column}: " if self.line else ""
        return f"{where}{self.severity}: {self.message}"


def errors(diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    return [d for d in diagnostics if d.is_error]


def _numeric(v: VarDecl) -> bool:
    return all(x.lstrip("-").isdigit() for x in v.values)


def _bound_of(f: Formula) -> Optional[str]:
    """Widest bounded operator in ``f``, as written."""
    widest = None
    for node in walk(f):
        if isinstance(node, (BoundedGlobally, BoundedFinally)):
            if widest is None or node.bound > widest.bound:
                widest = node
    if widest is None:
        return None
    op = "G" if isinstance(widest, BoundedGlobally) else "F"
    return f"{op}<={widest.bound}"


def _mentioned_vars(f: Formula, variables: Set[str]) -> Set[str]:
    found: Set[str] = set()
    for node in walk(f):
        if isinstance(node, Atom) and node.name in variables:
            found.add(node.name)
        elif isinstance(node, Compare):
            found.update(x for x in (node.left, node.right) if x in variables)
    return found


class _Checker:
    def __init__(self, s: Scenario, horizon: Optional[int]):
        self.s = s
        self.horizon = horizon if horizon is not None else s.horizon
        self.vars = s.var_index()
        self.actions = set(s.action_names)
        self.out: List[Diagnostic] = []

    def error(self, message: str, loc: SourceLocation) -> None:
        self.out.append(Diagnostic.at(ERROR, message, loc))

    def warning(self, message: str, loc: SourceLocation) -> None:
        self.out.append(Diagnostic.at(WARNING, message, loc))

    def run(self) -> List[Diagnostic]:
        self.horizon_and_alphabets()
        self.rules()
        self.formulas()
        self.goals()
        self.hints()
        return self.out

    def horizon_and_alphabets(self) -> None:
        s = self.s
        if self.horizon is None:
            self.error("HORIZON is missing", s.horizon_loc)
        elif self.horizon < 1:
            self.error(f"horizon must be >= 1, got {self.horizon}", s.horizon_loc)
        for agent in AGENT_NAMES:
            if not s.alphabet(agent):
                self.error(f"agent {agent} has no actions", SourceLocation())
        owners = {}
        for decl in s.actions:
            for act in decl.actions:
                if act in owners and owners[act] != decl.agent:
                    self.error(f"action {act!r} is declared for both {owners[act]} and {decl.agent}", decl.loc)
                owners.setdefault(act, decl.agent)
                if act in self.vars:
                    self.error(f"action {act!r} shadows a state variable", decl.loc)

    def rules(self) -> None:
        for rule in self.s.rules:
            where = f"rule {rule.name}"
            if rule.guard is not None:
                if not is_state_formula(rule.guard):
                    self.error(f"{where}: guard must not use temporal or belief operators", rule.loc)
                for node in walk(rule.guard):
                    if isinstance(node, Atom) and (node.name in self.actions or node.time_index is not None):
                        self.error(f"{where}: guard may only mention state variables", rule.loc)
                        break
                self.compares(rule.guard, rule.loc, where)
            for slot, agent in zip(rule.pattern or (), AGENT_NAMES):
                if slot is not None and slot not in self.s.alphabet(agent):
                    self.error(f"{where}: {slot!r} is not an action of {agent}", rule.loc)
            for asg in rule.assignments:
                source = self.vars.get(asg.rhs)
                target = self.vars[asg.var]
                if source is not None and source.values != target.values and not (
                    _numeric(source) and _numeric(target)
                ):
                    self.error(f"{where}: {asg.var} := {asg.rhs} mixes unrelated domains", asg.loc)

    def compares(self, f: Formula, loc: SourceLocation, where: str) -> None:
        for node in walk(f):
            if not isinstance(node, Compare):
                continue
            left, right = self.vars.get(node.left), self.vars.get(node.right)
            if left is None or right is None:
                continue
            if left.values != right.values and not (_numeric(left) and _numeric(right)):
                self.error(f"{where}: cannot compare {left.name} with {right.name}", loc)

    def formulas(self) -> None:
        s = self.s
        for decl in s.init:
            self.plain(decl.formula, decl.loc, "INIT")
            if any(isinstance(n, Atom) and n.name in self.actions for n in walk(decl.formula)):
                self.error("INIT may not mention actions", decl.loc)
        for decl in s.history:
            self.plain(decl.formula, decl.loc, f"HISTORY {decl.position}")
        for decl in s.evidence + s.knows:
            self.plain(decl.formula, decl.loc, f"evidence {decl.id}")

    def plain(self, f: Formula, loc: SourceLocation, where: str) -> None:
        if contains_belief(f):
            self.error(f"{where}: belief operators are not allowed here", loc)
        self.compares(f, loc, where)

    def goals(self) -> None:
        s = self.s
        labelled = [(g, "goal") for g in s.goals_a + s.goals_b] + [(c, "commitment") for c in s.commits]
        labelled += [(a, "goal") for a in s.adopts if a.formula is not None]
        for decl, kind in labelled:
            where = f"{kind} {decl.name}"
            self.plain(decl.formula, decl.loc, where)
            depth = temporal_depth(decl.formula)
            if self.horizon is not None and self.horizon >= 1 and depth > self.horizon:
                bound = _bound_of(decl.formula)
                detail = f" (bound {bound})" if bound else ""
                self.error(f"{where}: temporal depth {depth} exceeds horizon {self.horizon}{detail}", decl.loc)
        by_name = {}
        for decl in s.goals_a + s.goals_b:
            other = by_name.setdefault(decl.name, decl)
            if other is not decl and other.formula != decl.formula:
                self.error(f"goal {decl.name!r} is declared by A and B with different formulas", decl.loc)
        for decl in s.adopts:
            clash = by_name.get(decl.name)
            if decl.formula is not None and clash is not None and clash.formula != decl.formula:
                self.error(f"adopted goal {decl.name!r} clashes with a declared goal", decl.loc)

    def hints(self) -> None:
        s = self.s
        if not s.observable:
            self.warning("OBSERVABLE is empty: strategies cannot react to anything", SourceLocation())
        if not s.init:
            self.warning("INIT is empty: every state is initial", SourceLocation())
        names = set(self.vars)
        used: Set[str] = set()
        for decl in s.goals_a + s.goals_b + s.commits:
            used |= _mentioned_vars(decl.formula, names)
        for rule in s.rules:
            if rule.guard is not None:
                used |= _mentioned_vars(rule.guard, names)
            for asg in rule.assignments:
                used.add(asg.var)
                if asg.rhs in names:
                    used.add(asg.rhs)
        for decl in s.evidence:
            mentioned = _mentioned_vars(decl.formula, names)
            if mentioned and not mentioned & used:
                self.warning(
                    f"evidence {decl.id} is unreferenced: no goal or rule depends on "
                    f"{', '.join(sorted(mentioned))}",
                    decl.loc,
                )


def validate(s: Scenario, horizon: Optional[int] = None) -> List[Diagnostic]:
    """All diagnostics for ``s``; ``horizon`` overrides the declared one."""
    return _Checker(s, horizon).run()
