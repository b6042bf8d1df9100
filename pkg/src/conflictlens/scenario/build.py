"""
Lower a parsed scenario into engine objects.

Comparisons become one-hot disjunctions over value atoms: ``var op value``
keeps the values whose rank satisfies ``op``; ``var = var`` and ``var != var``
pair equal ranks, other ``var op var`` are factorized per left value. Numeric
domains rank by integer value, others by position.
A bare boolean variable ``x`` stands for ``x=true``.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, fields, replace
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..conflict import Problem, ResolutionOffers
from ..errors import InputError
from ..formula import TOP, And, Atom, Compare, Formula, Not, conj, disj
from ..jgraph import BeliefAtom, EvidenceBase, EvidenceItem
from ..strategy import GoalSet
from ..world import ActionAlphabet, Assignment, StateVar, TransitionRule, WorldModel
from .ast import EvidenceDecl, GoalDecl, RuleDecl, Scenario, VarDecl, WeightDecl
from .validate import errors, validate

_OPS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}
_FLIPPED = {"=": "=", "!=": "!=", "<": ">", "<=": ">=", ">": "<", ">=": "<="}


@dataclass(frozen=True)
class BuiltScenario:
    model: WorldModel
    evidence: EvidenceBase
    goals_a: GoalSet
    goals_b: GoalSet
    offers: ResolutionOffers

    @property
    def problem(self) -> Problem:
        return Problem(self.model, self.goals_a, self.goals_b, self.offers)


def state_var(decl: VarDecl) -> StateVar:
    if decl.kind == "bool":
        return StateVar.boolean(decl.name)
    return StateVar(decl.name, decl.values, decl.kind)


class Lowering:
    """Rewrites surface formulas into atoms over ``var=value`` propositions."""

    def __init__(self, variables: Dict[str, StateVar]):
        self.vars = variables

    def __call__(self, f: Formula) -> Formula:
        if isinstance(f, Compare):
            return self.compare(f)
        if isinstance(f, Atom):
            var = self.vars.get(f.name)
            if var is not None:
                return Atom(var.atom("true"), f.time_index)
            return f
        changes = {
            fd.name: self(getattr(f, fd.name))
            for fd in fields(f)
            if isinstance(getattr(f, fd.name), Formula)
        }
        return replace(f, **changes) if changes else f

    def compare(self, f: Compare) -> Formula:
        left, right = self.vars.get(f.left), self.vars.get(f.right)
        if left is None and right is None:
            raise InputError(f"{f} compares no variable")
        if left is None:
            return self._against_value(right, _FLIPPED[f.op], f.left)
        if right is None:
            return self._against_value(left, f.op, f.right)
        if f.op in ("=", "!="):
            same = disj(
                And(Atom(left.atom(x)), Atom(right.atom(y)))
                for x in left.domain
                for y in right.domain
                if left.rank(x) == right.rank(y)
            )
            return same if f.op == "=" else Not(same)
        test = _OPS[f.op]
        return disj(
            And(Atom(left.atom(x)), disj(Atom(right.atom(y)) for y in right.domain
                                         if test(left.rank(x), right.rank(y))))
            for x in left.domain
            if any(test(left.rank(x), right.rank(y)) for y in right.domain)
        )

    def _against_value(self, var: StateVar, op: str, value: str) -> Formula:
        if op == "=":
            return Atom(var.atom(var.domain[var.index(value)]))
        if op == "!=":
            return Not(Atom(var.atom(value)))
        test = _OPS[op]
        pivot = var.rank(value)
        return disj(Atom(var.atom(x)) for x in var.domain if test(var.rank(x), pivot))


def _rule(decl: RuleDecl, lower: Lowering, variables: Dict[str, StateVar]) -> TransitionRule:
    assignments = []
    for asg in decl.assignments:
        if asg.rhs in variables:
            assignments.append(Assignment(asg.var, source=asg.rhs, delta=asg.delta))
        else:
            assignments.append(Assignment(asg.var, value=asg.rhs))
    return TransitionRule(
        name=decl.name,
        guard=lower(decl.guard) if decl.guard is not None else TOP,
        pattern=decl.pattern or (None, None, None),
        assignments=tuple(assignments),
    )


def _evidence(decls: Tuple[EvidenceDecl, ...], lower: Lowering) -> Tuple[EvidenceItem, ...]:
    return tuple(EvidenceItem(BeliefAtom(d.id), lower(d.formula), d.tag) for d in decls)


def _weights(decls: Tuple[WeightDecl, ...]) -> Tuple[Tuple[frozenset, int], ...]:
    return tuple((frozenset(w.goals), w.weight) for w in decls)


def _goals(decls: Tuple[GoalDecl, ...], lower: Lowering) -> Tuple[Tuple[str, Formula], ...]:
    return tuple((g.name, lower(g.formula)) for g in decls)


def build(s: Scenario, horizon: Optional[int] = None) -> BuiltScenario:
    """World model, evidence, goal sets and offers for ``s``.

    Raises InputError listing every error diagnostic when ``s`` does not validate.
    """
    problems = errors(validate(s, horizon))
    if problems:
        raise InputError("scenario does not validate:\n" + "\n".join(f"  {d}" for d in problems))
    variables = {d.name: state_var(d) for d in s.vars}
    lower = Lowering(variables)
    model = WorldModel(
        vars=tuple(variables.values()),
        actions=ActionAlphabet(s.alphabet("A"), s.alphabet("B"), s.alphabet("Env")),
        rules=tuple(_rule(r, lower, variables) for r in s.rules),
        init=conj(lower(d.formula) for d in s.init),
        history=tuple((d.position, lower(d.formula)) for d in s.history),
        horizon=horizon if horizon is not None else s.horizon,
        observable=s.observable,
    )
    goals_a = _goals(s.goals_a, lower)
    adopts: List[Tuple[str, Formula]] = []
    for decl in s.adopts:
        if decl.formula is not None:
            adopts.append((decl.name, lower(decl.formula)))
        else:
            adopts.append((decl.name, dict(goals_a)[decl.name]))
    offers = ResolutionOffers(
        knows=_evidence(s.knows, lower),
        commits=_goals(s.commits, lower),
        adopts=tuple(adopts),
        joint_weights=_weights(s.joint_weights) if s.joint_weights is not None else None,
    )
    built = BuiltScenario(
        model=model,
        evidence=EvidenceBase(_evidence(s.evidence, lower)),
        goals_a=GoalSet(goals_a, _weights(s.weights_a)),
        goals_b=GoalSet(_goals(s.goals_b, lower), _weights(s.weights_b)),
        offers=offers,
    )
    logger.debug(
        f"SCENARIO_BUILT | vars={len(model.vars)} | rules={len(model.rules)} | now={model.now} "
        f"| horizon={model.horizon} | evidence={len(built.evidence)} "
        f"| goals_a={len(built.goals_a.names)} | goals_b={len(built.goals_b.names)}"
    )
    return built
