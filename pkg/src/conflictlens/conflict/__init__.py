from .detect import BelievedGoals, Candidate, ConflictAnalyzer, Detection, detect_conflict
from .engine import Problem, analyze, find_strategy
from .explain import (
    UNDISCHARGED,
    CauseModel,
    ReportModel,
    StrategyModel,
    TraceModel,
    explain,
    justification_tree,
    render,
    report_schema,
    summary_tree,
    to_json,
    trace_table,
)
from .model import (
    NO_CONFLICT,
    REASON_JOINT_FAILURE,
    REASON_NO_COOPERATIVE,
    RESOLVED,
    UNRESOLVED,
    ConflictCause,
    ConflictReport,
    InformationBase,
    ResolutionLevel,
    ResolutionOffers,
    TraceEntry,
)
from .resolve import FixResult, fix, offers_for

__all__ = [
    "NO_CONFLICT",
    "REASON_JOINT_FAILURE",
    "REASON_NO_COOPERATIVE",
    "RESOLVED",
    "UNDISCHARGED",
    "UNRESOLVED",
    "BelievedGoals",
    "Candidate",
    "CauseModel",
    "ConflictAnalyzer",
    "ConflictCause",
    "ConflictReport",
    "Detection",
    "FixResult",
    "InformationBase",
    "Problem",
    "ReportModel",
    "ResolutionLevel",
    "ResolutionOffers",
    "StrategyModel",
    "TraceEntry",
    "TraceModel",
    "analyze",
    "detect_conflict",
    "explain",
    "find_strategy",
    "fix",
    "justification_tree",
    "summary_tree",
    "offers_for",
    "render",
    "report_schema",
    "to_json",
    "trace_table",
]
