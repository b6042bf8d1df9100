"""
Strategy and goal value objects.

A decision point is (step, observation class); the class is the tuple of
observable values at every position 0..step. Strategies are finite,
sorted decision tables, so equal tables compare and hash equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..errors import InputError, TotalityError
from ..formula import TOP, Formula, conj, to_text

Observation = Tuple[str, ...]
ObservationClass = Tuple[Observation, ...]
DecisionPoint = Tuple[int, ObservationClass]


def describe_class(observable: Sequence[str], cls: ObservationClass) -> str:
    if not observable:
        return "*"
    return " ".join(",".join(f"{n}={x}" for n, x in zip(observable, obs)) for obs in cls)


@dataclass(frozen=True)
class Strategy:
    owner: str
    decisions: Tuple[Tuple[DecisionPoint, str], ...]
    id: str = field(default="", compare=False)

    def __post_init__(self):
        if self.owner not in ("A", "B"):
            raise ValueError(f"strategies belong to A or B, not {self.owner!r}")
        ordered = tuple(sorted(self.decisions))
        points = [p for p, _ in ordered]
        if len(set(points)) != len(points):
            raise ValueError(f"strategy {self.id or self.owner}: two actions for one decision point")
        object.__setattr__(self, "decisions", ordered)

    @classmethod
    def from_table(cls, owner: str, table: Mapping[DecisionPoint, str], id: str = "") -> "Strategy":
        return cls(owner, tuple(table.items()), id)

    @classmethod
    def by_step(
        cls,
        owner: str,
        actions: Mapping[int, str],
        points: Iterable[DecisionPoint],
        id: str = "",
    ) -> "Strategy":
        """Open-loop strategy: the same action for every class at a step."""
        table = {}
        for step, obs in points:
            if step not in actions:
                raise TotalityError(owner, step, obs)
            table[(step, obs)] = actions[step]
        return cls.from_table(owner, table, id)

    @property
    def table(self) -> Dict[DecisionPoint, str]:
        return dict(self.decisions)

    @property
    def label(self) -> str:
        return self.id or f"{self.owner}#?"

    def action(self, step: int, cls: ObservationClass) -> str:
        for point, act in self.decisions:
            if point == (step, cls):
                return act
        raise TotalityError(self.owner, step, cls)

    def covers(self, points: Iterable[DecisionPoint]) -> Optional[DecisionPoint]:
        """First point the table lacks, or None when total on ``points``."""
        table = self.table
        for point in sorted(points):
            if point not in table:
                return point
        return None

    def describe(self, observable: Sequence[str] = ()) -> List[str]:
        return [
            f"t{step} [{describe_class(observable, obs)}]: {act}"
            for (step, obs), act in self.decisions
        ]


@dataclass(frozen=True)
class JointStrategy:
    a_part: Strategy
    b_part: Strategy

    def __post_init__(self):
        if self.a_part.owner != "A" or self.b_part.owner != "B":
            raise ValueError("a joint strategy pairs an A strategy with a B strategy")

    @property
    def label(self) -> str:
        return f"{self.a_part.label}+{self.b_part.label}"

    @property
    def parts(self) -> Tuple[Strategy, Strategy]:
        return (self.a_part, self.b_part)


def parts_of(strategy) -> Tuple[Strategy, ...]:
    if isinstance(strategy, JointStrategy):
        return strategy.parts
    return (strategy,)


@dataclass(frozen=True)
class GoalSet:
    """Named goals with a sparse weight table; unlisted subsets weigh 0.

    Adopted goals outweigh every listed subset: each one adds
    ``1 + max listed weight`` on top of the weight of the remaining goals.
    """

    goals: Tuple[Tuple[str, Formula], ...] = ()
    weights: Tuple[Tuple[FrozenSet[str], int], ...] = ()
    adopted: FrozenSet[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "goals", tuple(self.goals))
        object.__setattr__(
            self,
            "weights",
            tuple(sorted(((frozenset(s), int(w)) for s, w in self.weights), key=lambda e: sorted(e[0]))),
        )
        object.__setattr__(self, "adopted", frozenset(self.adopted))
        names = [n for n, _ in self.goals]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate goal names in {names}")
        known = set(names)
        seen = set()
        for subset, weight in self.weights:
            if weight < 0:
                raise ValueError(f"weight of {sorted(subset)} must be >= 0")
            if not subset <= known:
                raise InputError(f"weights mention undeclared goals {sorted(subset - known)}")
            if subset in seen:
                raise InputError(f"weight of {sorted(subset)} given twice")
            seen.add(subset)
        if not self.adopted <= known:
            raise InputError(f"adopted goals {sorted(self.adopted - known)} are not declared")

    @classmethod
    def of(
        cls,
        goals: Mapping[str, Formula],
        weights: Optional[Mapping[Iterable[str], int]] = None,
    ) -> "GoalSet":
        return cls(
            tuple(goals.items()),
            tuple((frozenset(s), w) for s, w in (weights or {}).items()),
        )

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.goals)

    def formula(self, name: str) -> Formula:
        for n, f in self.goals:
            if n == name:
                return f
        raise InputError(f"unknown goal {name!r}")

    def conjunction(self, subset: Iterable[str]) -> Formula:
        return conj([self.formula(n) for n in sorted(subset)]) if subset else TOP

    def weight(self, subset: Iterable[str]) -> int:
        subset = frozenset(subset)
        table = dict(self.weights)
        base = table.get(subset - self.adopted, 0)
        if not self.adopted:
            return base
        top = max(table.values(), default=0)
        return base + len(subset & self.adopted) * (1 + top)

    def best_subsets(self, achievable: FrozenSet[str]) -> Tuple[int, List[FrozenSet[str]]]:
        """Weight-maximal subsets of ``achievable``; ``[frozenset()]`` when nothing weighs more than 0."""
        ranked: Dict[FrozenSet[str], int] = {}
        names = sorted(achievable)
        for k in range(len(names) + 1):
            for combo in itertools.combinations(names, k):
                ranked[frozenset(combo)] = self.weight(combo)
        best = max(ranked.values())
        if best == 0:
            return 0, [frozenset()]
        return best, sorted((s for s, w in ranked.items() if w == best), key=sorted)

    def union(self, other: "GoalSet") -> Tuple[Tuple[str, Formula], ...]:
        merged = dict(self.goals)
        for n, f in other.goals:
            if n in merged and merged[n] != f:
                raise InputError(f"goal {n!r} is declared twice with different formulas")
            merged[n] = f
        return tuple(merged.items())

    def adopt(self, goals: Sequence[Tuple[str, Formula]]) -> "GoalSet":
        present = dict(self.goals)
        extra = tuple((n, f) for n, f in goals if n not in present)
        return replace(
            self,
            goals=self.goals + extra,
            adopted=self.adopted | frozenset(n for n, _ in goals),
        )

    def negotiated(self, subset: Iterable[str], weight: int) -> "GoalSet":
        """The goals of ``subset`` this set declares, as its only weighted subset."""
        keep = frozenset(subset) & frozenset(self.names)
        return GoalSet(
            tuple((n, f) for n, f in self.goals if n in keep),
            ((keep, weight),) if keep else (),
        )

    def describe(self) -> List[str]:
        return [f"{n} : {to_text(f)}" for n, f in self.goals]
