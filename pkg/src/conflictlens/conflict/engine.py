"""
Resolution loop.

Each round detects conflicts on the current information state. When no A
strategy survives, levels are tried from C1 up to the configured maximum;
the first level that changes something is applied and the round restarts.
Information only grows, and every level has finitely many deltas, so the
loop terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from loguru import logger

from ..config import AnalysisLimits
from ..jgraph import EvidenceBase, graph_edges
from ..strategy import GoalSet
from ..world import WorldModel
from .detect import BelievedGoals, ConflictAnalyzer, Detection
from .model import (
    NO_CONFLICT,
    RESOLVED,
    UNRESOLVED,
    ConflictCause,
    ConflictReport,
    InformationBase,
    ResolutionLevel,
    ResolutionOffers,
    TraceEntry,
)
from .resolve import fix


@dataclass(frozen=True)
class Problem:
    """Everything the loop needs besides the evidence."""

    model: WorldModel
    goals_a: GoalSet
    goals_b: BelievedGoals
    offers: ResolutionOffers = ResolutionOffers()
    acts_a: Optional[Tuple[str, ...]] = None
    acts_b: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class _Pending:
    round: int
    level: ResolutionLevel
    delta: Tuple[str, ...]
    info_size: int


def group_graph(detection: Detection) -> Tuple[Tuple[str, str], ...]:
    return tuple(graph_edges([g.group for g in detection.worlds.groups]))


def _finish(pending: Optional[_Pending], detection: Detection) -> Optional[TraceEntry]:
    if pending is None:
        return None
    entry = TraceEntry(
        round=pending.round,
        level=pending.level,
        delta=pending.delta,
        info_size=pending.info_size,
        groups=len(detection.worlds),
        survivors=len(detection.survivors),
    )
    logger.info(entry.to_log_line())
    return entry


def find_strategy(
    base: EvidenceBase,
    problem: Problem,
    max_level: ResolutionLevel = ResolutionLevel.C4,
    limits: AnalysisLimits = AnalysisLimits(),
) -> ConflictReport:
    """Surviving A strategies after resolving up to ``max_level``, or an unresolved verdict."""
    info = InformationBase(base)
    goals_a, goals_b = problem.goals_a, problem.goals_b
    causes: List[ConflictCause] = []
    trace: List[TraceEntry] = []
    applied: Optional[ResolutionLevel] = None
    negotiated: Optional[Tuple[str, ...]] = None
    pending: Optional[_Pending] = None
    round_no = 0

    while True:
        analyzer = ConflictAnalyzer(
            problem.model, info, goals_a, goals_b,
            problem.acts_a, problem.acts_b, limits, round=round_no,
        )
        detection = analyzer.detect()
        entry = _finish(pending, detection)
        if entry is not None:
            trace.append(entry)
        pending = None

        if detection.survivors:
            verdict = NO_CONFLICT if applied is None else RESOLVED
            break
        causes.extend(detection.causes)

        for level in ResolutionLevel.up_to(max_level):
            result = fix(detection.causes, level, info, goals_a, goals_b, problem.offers, analyzer)
            if result.changed:
                info, goals_a, goals_b = result.info, result.goals_a, result.goals_b
                if result.negotiated is not None:
                    negotiated = tuple(sorted(result.negotiated))
                if applied is None or level.rank > applied.rank:
                    applied = level
                pending = _Pending(round_no, level, result.delta, info.size)
                break
        else:
            verdict = UNRESOLVED
            break
        round_no += 1

    report = ConflictReport(
        verdict=verdict,
        level=applied if verdict == RESOLVED else None,
        strategies=tuple(detection.survivors),
        causes=tuple(causes),
        trace=tuple(trace),
        negotiated_goals=negotiated,
        observable=problem.model.observable,
        groups=tuple(g.label for g in detection.worlds.groups),
        graph=group_graph(detection),
        info=info,
    )
    logger.info(report.to_log_line())
    return report


def analyze(
    base: EvidenceBase,
    problem: Problem,
    limits: AnalysisLimits = AnalysisLimits(),
) -> ConflictReport:
    """Detection only; nothing is shared, so a believed conflict stays unresolved."""
    info = InformationBase(base)
    detection = ConflictAnalyzer(
        problem.model, info, problem.goals_a, problem.goals_b,
        problem.acts_a, problem.acts_b, limits,
    ).detect()
    report = ConflictReport(
        verdict=UNRESOLVED if detection.conflict else NO_CONFLICT,
        level=None,
        strategies=tuple(detection.survivors),
        causes=tuple(detection.causes),
        observable=problem.model.observable,
        groups=tuple(g.label for g in detection.worlds.groups),
        graph=group_graph(detection),
        info=info,
    )
    logger.info(report.to_log_line())
    return report
