"""
Formula AST for the justification-graph language.

Core nodes: Bottom, Atom, Implies, Believes, Next, Prev, Until, Since.
Everything else (Top, Not, And, Or, Iff, G, F, H, G<=k, F<=k) is a derived
node that ``expand`` rewrites into the core. ``Compare`` is a surface node
over finite-domain variables; the scenario builder lowers it to atoms.

Policy:
- Nodes are frozen dataclasses; structural equality, safe to share
- Invariants are checked at construction (ValueError)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        from .printer import to_text

        return to_text(self)


# =============================================================================
# Core constructors
# =============================================================================

@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    time_index: Optional[int] = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom name must be nonempty")
        if self.time_index is not None and self.time_index < 0:
            raise ValueError(f"atom {self.name}: negative time index")


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Believes(Formula):
    entities: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        if not self.entities:
            raise ValueError("belief groups may not be empty")
        object.__setattr__(self, "entities", frozenset(self.entities))


@dataclass(frozen=True)
class Next(Formula):
    body: Formula


@dataclass(frozen=True)
class Prev(Formula):
    body: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula


# =============================================================================
# Derived constructors
# =============================================================================

@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Globally(Formula):
    body: Formula


@dataclass(frozen=True)
class Finally(Formula):
    body: Formula


@dataclass(frozen=True)
class Historically(Formula):
    body: Formula


@dataclass(frozen=True)
class BoundedGlobally(Formula):
    bound: int
    body: Formula

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("G<=k needs k >= 0")


@dataclass(frozen=True)
class BoundedFinally(Formula):
    bound: int
    body: Formula

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("F<=k needs k >= 0")


COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Compare(Formula):
    """``left op right`` over declared variables and literal values."""

    left: str
    op: str
    right: str

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison {self.op!r}")


BOTTOM = Bottom()
TOP = Top()

CORE_TYPES = (Bottom, Atom, Implies, Believes, Next, Prev, Until, Since)
UNARY_TYPES = (Believes, Next, Prev, Not, Globally, Finally, Historically,
               BoundedGlobally, BoundedFinally)
BINARY_TYPES = (Implies, Until, Since, And, Or, Iff)


def conj(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is Top."""
    result: Optional[Formula] = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TOP if result is None else result


def disj(formulas: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is Bottom."""
    result: Optional[Formula] = None
    for f in formulas:
        result = f if result is None else Or(result, f)
    return BOTTOM if result is None else result


def shift(f: Formula, steps: int) -> Formula:
    """X^steps f."""
    for _ in range(steps):
        f = Next(f)
    return f


def children(f: Formula) -> tuple:
    if isinstance(f, BINARY_TYPES):
        return (f.left, f.right)
    if isinstance(f, UNARY_TYPES):
        return (f.body,)
    return ()


def walk(f: Formula):
    """Pre-order traversal."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def atoms(f: Formula) -> FrozenSet[str]:
    return frozenset(node.name for node in walk(f) if isinstance(node, Atom))


def contains_belief(f: Formula) -> bool:
    return any(isinstance(node, Believes) for node in walk(f))


def is_core(f: Formula) -> bool:
    return all(isinstance(node, CORE_TYPES) for node in walk(f))


def is_state_formula(f: Formula) -> bool:
    """True when no temporal or epistemic operator occurs."""
    return all(
        isinstance(node, (Bottom, Top, Atom, Compare, Implies, Not, And, Or, Iff))
        for node in walk(f)
    )
