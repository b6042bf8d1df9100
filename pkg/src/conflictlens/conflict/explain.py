"""
Explanation documents for conflict reports.

The JSON form is a frozen pydantic model, so field order and output are
stable; the text form is a rich tree for the justification chain plus a
table for the resolution trace.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field
from rich.console import Console
from rich.markup import escape
from rich.table import Table
from rich.tree import Tree

from .model import RESOLVED, ConflictReport

UNDISCHARGED = "undischarged"


class StrategyModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    owner: str
    decisions: List[str]


class CauseModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    justification: List[str]
    goals_A: List[str]
    goals_B: List[str]
    group: str
    group_atoms: List[str] = Field(default_factory=list)
    reason: str
    failed_goals: List[str] = Field(default_factory=list)
    blocking: List[str]
    a_decisions: List[str] = Field(default_factory=list)
    b_decisions: List[str] = Field(default_factory=list)
    round: int
    discharged_at: str
    contradicts: List[str] = Field(default_factory=list)


class TraceModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    round: int
    level: str
    delta: List[str]
    info_size: int
    groups: int
    survivors: int


class ReportModel(BaseModel):
    """Published shape of a conflict report."""

    model_config = ConfigDict(frozen=True)

    verdict: Literal["no-conflict", "resolved", "unresolved"]
    level: Optional[str] = None
    strategies: List[StrategyModel] = Field(default_factory=list)
    causes: List[CauseModel] = Field(default_factory=list)
    trace: List[TraceModel] = Field(default_factory=list)
    negotiated_goals: Optional[List[str]] = None
    groups: List[str] = Field(default_factory=list)
    group_graph: List[Tuple[str, str]] = Field(default_factory=list)


def explain(report: ConflictReport) -> ReportModel:
    causes = []
    for cause in report.causes:
        level = report.discharge_level(cause)
        causes.append(CauseModel(
            justification=list(cause.justification),
            goals_A=list(cause.goals_a),
            goals_B=list(cause.goals_b),
            group=cause.group,
            group_atoms=list(cause.group_atoms),
            reason=cause.reason,
            failed_goals=list(cause.failed_goals),
            blocking=[cause.a_strategy, cause.b_strategy],
            a_decisions=list(cause.a_decisions),
            b_decisions=list(cause.b_decisions),
            round=cause.round,
            discharged_at=level.value if level is not None else UNDISCHARGED,
            contradicts=list(cause.contradicts),
        ))
    return ReportModel(
        verdict=report.verdict,
        level=report.level.value if report.level is not None else None,
        strategies=[
            StrategyModel(id=s.label, owner=s.owner, decisions=s.describe(report.observable))
            for s in report.strategies
        ],
        causes=causes,
        trace=[
            TraceModel(
                round=e.round,
                level=e.level.value,
                delta=list(e.delta),
                info_size=e.info_size,
                groups=e.groups,
                survivors=e.survivors,
            )
            for e in report.trace
        ],
        negotiated_goals=list(report.negotiated_goals) if report.negotiated_goals is not None else None,
        groups=list(report.groups),
        group_graph=list(report.graph),
    )


def to_json(report: ConflictReport) -> str:
    return explain(report).model_dump_json(indent=2)


def report_schema() -> dict:
    return ReportModel.model_json_schema()


def _headline(doc: ReportModel) -> str:
    if doc.verdict == RESOLVED:
        return f"[bold]verdict[/bold]: resolved at {doc.level}"
    return f"[bold]verdict[/bold]: {doc.verdict}"


def _add(node: Tree, text: str) -> Tree:
    return node.add(escape(text))


def summary_tree(doc: ReportModel) -> Tree:
    """Verdict, negotiated goals and surviving strategies."""
    tree = Tree(_headline(doc))
    if doc.negotiated_goals is not None:
        _add(tree, f"negotiated goals: {', '.join(doc.negotiated_goals) or '-'}")
    survivors = _add(tree, f"strategies ({len(doc.strategies)})")
    for s in doc.strategies:
        node = _add(survivors, s.id)
        for line in s.decisions:
            _add(node, line)
    return tree


def _graph(tree: Tree, edges: List[Tuple[str, str]]) -> None:
    nodes: Dict[str, Tree] = {}
    root = _add(tree, "evidence groups")
    for parent, child in edges:
        if parent not in nodes:
            nodes[parent] = _add(root, parent)
        nodes[child] = _add(nodes[parent], child)


def justification_tree(doc: ReportModel) -> Tree:
    """The summary, the evidence groups, and every cause with its justification and blocking pair."""
    tree = summary_tree(doc)
    if doc.group_graph:
        _graph(tree, doc.group_graph)
    chain = _add(tree, f"causes ({len(doc.causes)})")
    for c in doc.causes:
        node = _add(
            chain,
            f"round {c.round} | group {c.group} {{{','.join(c.group_atoms)}}} | {c.discharged_at}",
        )
        _add(node, f"justification: {', '.join(c.justification)}")
        if c.contradicts:
            _add(node, f"contradicted by: {', '.join(c.contradicts)}")
        _add(node, f"reason: {c.reason}")
        if c.failed_goals:
            _add(node, f"failed: {', '.join(c.failed_goals)}")
        _add(node, f"goals A: {', '.join(c.goals_A) or '-'} | goals B: {', '.join(c.goals_B) or '-'}")
        pair = _add(node, f"blocking: {' vs '.join(c.blocking)}")
        for line in c.a_decisions:
            _add(pair, f"A {line}")
        for line in c.b_decisions:
            _add(pair, f"B {line}")
    return tree


def trace_table(doc: ReportModel) -> Table:
    table = Table(title="resolution trace")
    for col in ("round", "level", "delta", "info", "groups", "survivors"):
        table.add_column(col)
    for e in doc.trace:
        table.add_row(
            str(e.round), e.level, escape("; ".join(e.delta)), str(e.info_size), str(e.groups), str(e.survivors)
        )
    return table


def render(report: ConflictReport, console: Optional[Console] = None) -> None:
    console = console or Console()
    doc = explain(report)
    console.print(justification_tree(doc))
    if doc.trace:
        console.print(trace_table(doc))
