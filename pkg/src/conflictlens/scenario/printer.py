"""Scenario printer; ``parse(to_text(s))`` equals ``s``."""

from __future__ import annotations

from typing import List

from ..formula import to_text as formula_text
from .ast import AssignDecl, RuleDecl, Scenario, VarDecl, WeightDecl


def _var(v: VarDecl) -> str:
    if v.kind == "bool":
        return f"{v.name} : bool"
    if v.kind == "range":
        return f"{v.name} : {v.values[0]}..{v.values[-1]}"
    return f"{v.name} : {{{', '.join(v.values)}}}"


def _assignment(a: AssignDecl) -> str:
    if not a.delta:
        return f"{a.var} := {a.rhs}"
    sign = "+" if a.delta > 0 else "-"
    return f"{a.var} := {a.rhs} {sign} {abs(a.delta)}"


def _rule(r: RuleDecl) -> str:
    parts = [f"{r.name} :"]
    if r.guard is not None:
        parts.append(f"when {formula_text(r.guard)}")
    if r.pattern is not None:
        parts.append("on " + ", ".join(p if p is not None else "*" for p in r.pattern))
    parts.append("do " + ", ".join(_assignment(a) for a in r.assignments))
    return " ".join(parts)


def _weight(w: WeightDecl) -> str:
    return f"{{{', '.join(w.goals)}}} = {w.weight}"


def to_text(s: Scenario) -> str:
    out: List[str] = []

    def section(header: str, lines: List[str], always: bool = False) -> None:
        if lines or always:
            out.append(header)
            out.extend(f"  {line}" for line in lines)
            out.append("")

    if s.horizon is not None:
        out.extend([f"HORIZON {s.horizon}", ""])
    section("VARS", [_var(v) for v in s.vars])
    if s.observable:
        section("OBSERVABLE", [", ".join(s.observable)])
    section("ACTIONS", [f"{a.agent} : {', '.join(a.actions)}" for a in s.actions])
    section("TRANS", [_rule(r) for r in s.rules])
    section("INIT", [formula_text(d.formula) for d in s.init])
    section("HISTORY", [f"{d.position} : {formula_text(d.formula)}" for d in s.history])
    section("EVIDENCE", [f"{e.id} [{e.tag}] : {formula_text(e.formula)}" for e in s.evidence])
    section("GOALS_A", [f"{g.name} : {formula_text(g.formula)}" for g in s.goals_a])
    section("WEIGHTS_A", [_weight(w) for w in s.weights_a])
    section("GOALS_B", [f"{g.name} : {formula_text(g.formula)}" for g in s.goals_b])
    section("WEIGHTS_B", [_weight(w) for w in s.weights_b])
    section("B_KNOWS", [f"{e.id} [{e.tag}] : {formula_text(e.formula)}" for e in s.knows])
    section("B_COMMITS", [f"{c.name} : {formula_text(c.formula)}" for c in s.commits])
    section("B_ADOPTS", [
        a.name if a.formula is None else f"{a.name} : {formula_text(a.formula)}" for a in s.adopts
    ])
    if s.joint_weights is not None:
        section("JOINT_WEIGHTS", [_weight(w) for w in s.joint_weights], always=True)
    return "\n".join(out)
