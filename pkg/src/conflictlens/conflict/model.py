"""
Value objects of the conflict analysis: information base, causes, trace, report.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import FrozenSet, Iterable, Optional, Tuple

from ..errors import InputError
from ..formula import Formula, Run, to_text
from ..jgraph import EvidenceBase, EvidenceItem
from ..strategy import Strategy

NO_CONFLICT = "no-conflict"
RESOLVED = "resolved"
UNRESOLVED = "unresolved"

REASON_JOINT_FAILURE = "joint goals fail"
REASON_NO_COOPERATIVE = "no cooperative winning strategy"


class ResolutionLevel(str, Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"

    @classmethod
    def parse(cls, text: str) -> "ResolutionLevel":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise InputError(f"unknown resolution level {text!r} (expected C1..C4)") from None

    @property
    def rank(self) -> int:
        return int(self.value[1])

    @classmethod
    def up_to(cls, level: "ResolutionLevel") -> Tuple["ResolutionLevel", ...]:
        return tuple(lv for lv in cls if lv.rank <= level.rank)

    @property
    def title(self) -> str:
        return {
            "C1": "shared situational awareness",
            "C2": "shared strategies",
            "C3": "shared goals",
            "C4": "negotiated goals",
        }[self.value]


@dataclass(frozen=True)
class ResolutionOffers:
    """What B is prepared to share, level by level."""

    knows: Tuple[EvidenceItem, ...] = ()
    commits: Tuple[Tuple[str, Formula], ...] = ()
    adopts: Tuple[Tuple[str, Formula], ...] = ()
    joint_weights: Optional[Tuple[Tuple[FrozenSet[str], int], ...]] = None


@dataclass(frozen=True)
class InformationBase:
    """Evidence plus everything learned while resolving.

    Dismissed atoms stay recorded, so ``size`` never decreases.
    """

    evidence: EvidenceBase
    dismissed: FrozenSet[str] = frozenset()
    facts: Tuple[Tuple[str, Formula], ...] = ()
    adopted: Tuple[str, ...] = ()
    joint: bool = False

    def active(self) -> EvidenceBase:
        return EvidenceBase(tuple(i for i in self.evidence.items if i.atom.id not in self.dismissed))

    @property
    def fact_formulas(self) -> Tuple[Formula, ...]:
        return tuple(f for _, f in self.facts)

    @property
    def size(self) -> int:
        return (
            len(self.evidence)
            + len(self.dismissed)
            + len(self.facts)
            + len(self.adopted)
            + int(self.joint)
        )

    def dismiss(self, atoms: Iterable[str]) -> "InformationBase":
        return replace(self, dismissed=self.dismissed | frozenset(atoms))

    def learn(self, items: Iterable[EvidenceItem]) -> "InformationBase":
        known = set(self.evidence.atom_ids)
        fresh = [i for i in items if i.atom.id not in known]
        return replace(self, evidence=self.evidence.extend(fresh))

    def share(self, facts: Iterable[Tuple[str, Formula]]) -> "InformationBase":
        known = {n for n, _ in self.facts}
        return replace(self, facts=self.facts + tuple((n, f) for n, f in facts if n not in known))

    def adopt(self, names: Iterable[str]) -> "InformationBase":
        return replace(self, adopted=self.adopted + tuple(n for n in names if n not in self.adopted))


@dataclass(frozen=True)
class ConflictCause:
    justification: Tuple[str, ...]
    a_strategy: str
    b_strategy: str
    goals_a: Tuple[str, ...]
    goals_b: Tuple[str, ...]
    group: str
    group_atoms: Tuple[str, ...] = ()
    reason: str = REASON_JOINT_FAILURE
    failed_goals: Tuple[str, ...] = ()
    a_decisions: Tuple[str, ...] = ()
    b_decisions: Tuple[str, ...] = ()
    round: int = 0
    contradicts: Tuple[str, ...] = ()
    witness: Optional[Run] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.justification:
            raise ValueError("a conflict cause needs a nonempty justification")

    def to_log_line(self) -> str:
        return (
            f"CONFLICT_CAUSE | round={self.round} | group={self.group} "
            f"| a={self.a_strategy} | b={self.b_strategy} "
            f"| justification={','.join(self.justification)} | failed={','.join(self.failed_goals)}"
        )


@dataclass(frozen=True)
class TraceEntry:
    round: int
    level: ResolutionLevel
    delta: Tuple[str, ...]
    info_size: int
    groups: int
    survivors: int

    def to_log_line(self) -> str:
        return (
            f"LEVEL_APPLIED | round={self.round} | level={self.level.value} "
            f"| delta={len(self.delta)} | info={self.info_size} | groups={self.groups}"
        )


@dataclass(frozen=True)
class ConflictReport:
    verdict: str
    level: Optional[ResolutionLevel]
    strategies: Tuple[Strategy, ...]
    causes: Tuple[ConflictCause, ...] = ()
    trace: Tuple[TraceEntry, ...] = ()
    negotiated_goals: Optional[Tuple[str, ...]] = None
    observable: Tuple[str, ...] = ()
    groups: Tuple[str, ...] = ()
    graph: Tuple[Tuple[str, str], ...] = ()
    info: Optional[InformationBase] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.verdict not in (NO_CONFLICT, RESOLVED, UNRESOLVED):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == RESOLVED:
            if self.level is None or not self.strategies:
                raise ValueError("a resolved report needs a level and surviving strategies")
            if not any(e.level == self.level and e.delta for e in self.trace):
                raise ValueError(f"no trace entry applied {self.level.value}")

    @property
    def conflict(self) -> bool:
        return self.verdict != NO_CONFLICT

    def discharge_level(self, cause: ConflictCause) -> Optional[ResolutionLevel]:
        """Level applied right after the round that found ``cause``; None if never discharged."""
        if self.verdict != RESOLVED:
            return None
        for entry in self.trace:
            if entry.round == cause.round:
                return entry.level
        return None

    def to_log_line(self) -> str:
        level = self.level.value if self.level else "-"
        return (
            f"REPORT | verdict={self.verdict} | level={level} "
            f"| strategies={len(self.strategies)} | causes={len(self.causes)}"
        )


def describe_fact(name: str, f: Formula) -> str:
    return f"{name} : {to_text(f)}"
