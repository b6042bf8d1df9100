"""
Finite-trace semantics with stuttering.

A run of length n stands for the infinite run that repeats its last state
forever. Every formula of temporal depth d has constant truth value from
position n-1+d on, so tables over n+d positions decide all queries; at the
last table position Next refers to itself and Until collapses to its right
argument. Prev at position 0 is false.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Tuple

from ..errors import PreconditionError, UnsupportedFragmentError
from .syntax import (
    BOTTOM,
    Atom,
    Believes,
    Bottom,
    BoundedFinally,
    BoundedGlobally,
    Compare,
    Finally,
    Formula,
    Globally,
    Historically,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    And,
    Prev,
    Since,
    Top,
    Until,
    conj,
    disj,
    shift,
    walk,
)


@dataclass(frozen=True)
class Run:
    """Sequence of valuations; each valuation is the set of true atom names."""

    states: Tuple[FrozenSet[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(frozenset(s) for s in self.states))
        if not self.states:
            raise ValueError("a run has at least one state")

    @classmethod
    def of(cls, *states: Iterable[str]) -> "Run":
        return cls(tuple(frozenset(s) for s in states))

    @property
    def length(self) -> int:
        return len(self.states)

    def stutter(self, extra: int = 1) -> "Run":
        return Run(self.states + (self.states[-1],) * extra)

    def project(self, names: Iterable[str]) -> "Run":
        keep = frozenset(names)
        return Run(tuple(s & keep for s in self.states))


def temporal_depth(f: Formula) -> int:
    """Number of steps ``f`` may look ahead or back from its evaluation point."""
    if isinstance(f, (Bottom, Top, Atom, Compare)):
        return 0
    if isinstance(f, (Next, Prev, Globally, Finally, Historically)):
        return 1 + temporal_depth(f.body)
    if isinstance(f, (Until, Since)):
        return 1 + max(temporal_depth(f.left), temporal_depth(f.right))
    if isinstance(f, (BoundedGlobally, BoundedFinally)):
        return f.bound + temporal_depth(f.body)
    if isinstance(f, (Not, Believes)):
        return temporal_depth(f.body)
    return max(temporal_depth(f.left), temporal_depth(f.right))


def expand(f: Formula) -> Formula:
    """Rewrite every derived operator into Bottom/Atom/Implies/X/P/U/S/E:."""
    if isinstance(f, (Bottom, Atom)):
        return f
    if isinstance(f, Compare):
        raise UnsupportedFragmentError(f"comparison {f} must be lowered before expansion")
    if isinstance(f, Top):
        return Implies(BOTTOM, BOTTOM)
    if isinstance(f, Implies):
        return Implies(expand(f.left), expand(f.right))
    if isinstance(f, Until):
        return Until(expand(f.left), expand(f.right))
    if isinstance(f, Since):
        return Since(expand(f.left), expand(f.right))
    if isinstance(f, Next):
        return Next(expand(f.body))
    if isinstance(f, Prev):
        return Prev(expand(f.body))
    if isinstance(f, Believes):
        return Believes(f.entities, expand(f.body))
    if isinstance(f, Not):
        return Implies(expand(f.body), BOTTOM)
    if isinstance(f, And):
        return Implies(Implies(expand(f.left), Implies(expand(f.right), BOTTOM)), BOTTOM)
    if isinstance(f, Or):
        return Implies(Implies(expand(f.left), BOTTOM), expand(f.right))
    if isinstance(f, Iff):
        return expand(And(Implies(f.left, f.right), Implies(f.right, f.left)))
    if isinstance(f, Globally):
        return expand(Not(Until(Top(), Not(f.body))))
    if isinstance(f, Finally):
        return expand(Until(Top(), f.body))
    if isinstance(f, Historically):
        return expand(Not(Since(Top(), Not(f.body))))
    if isinstance(f, BoundedGlobally):
        return expand(conj(shift(f.body, i) for i in range(f.bound + 1)))
    if isinstance(f, BoundedFinally):
        return expand(disj(shift(f.body, i) for i in range(f.bound + 1)))
    raise UnsupportedFragmentError(f"unknown node {type(f).__name__}")


def evaluate(f: Formula, run: Run, t: int) -> bool:
    """Truth of ``f`` at position ``t`` of the stuttered ``run``."""
    if not 0 <= t < run.length:
        raise PreconditionError(f"position {t} outside run of length {run.length}")
    size = run.length + temporal_depth(f)
    return _Tables(run, size).table(f)[t]


class _Tables:
    """Bottom-up truth tables over positions 0..size-1."""

    def __init__(self, run: Run, size: int):
        self.states = run.states
        self.size = size
        self._memo: Dict[int, List[bool]] = {}

    def _state(self, i: int) -> FrozenSet[str]:
        return self.states[min(i, len(self.states) - 1)]

    def table(self, f: Formula) -> List[bool]:
        key = id(f)
        cached = self._memo.get(key)
        if cached is None:
            cached = self._compute(f)
            self._memo[key] = cached
        return cached

    def _compute(self, f: Formula) -> List[bool]:
        n = self.size
        last = n - 1
        if isinstance(f, Bottom):
            return [False] * n
        if isinstance(f, Top):
            return [True] * n
        if isinstance(f, Atom):
            if f.time_index is not None:
                return [f.name in self._state(f.time_index)] * n
            return [f.name in self._state(i) for i in range(n)]
        if isinstance(f, Believes):
            raise UnsupportedFragmentError("E: belief operators are evaluated by jgraph")
        if isinstance(f, Compare):
            raise UnsupportedFragmentError(f"comparison {f} must be lowered before evaluation")
        if isinstance(f, Implies):
            a, b = self.table(f.left), self.table(f.right)
            return [(not x) or y for x, y in zip(a, b)]
        if isinstance(f, Not):
            return [not x for x in self.table(f.body)]
        if isinstance(f, And):
            return [x and y for x, y in zip(self.table(f.left), self.table(f.right))]
        if isinstance(f, Or):
            return [x or y for x, y in zip(self.table(f.left), self.table(f.right))]
        if isinstance(f, Iff):
            return [x == y for x, y in zip(self.table(f.left), self.table(f.right))]
        if isinstance(f, Next):
            s = self.table(f.body)
            return [s[min(i + 1, last)] for i in range(n)]
        if isinstance(f, Prev):
            s = self.table(f.body)
            return [False] + s[:-1]
        if isinstance(f, Until):
            a, b = self.table(f.left), self.table(f.right)
            out = [False] * n
            out[last] = b[last]
            for i in range(last - 1, -1, -1):
                out[i] = b[i] or (a[i] and out[i + 1])
            return out
        if isinstance(f, Since):
            a, b = self.table(f.left), self.table(f.right)
            out = [False] * n
            out[0] = b[0]
            for i in range(1, n):
                out[i] = b[i] or (a[i] and out[i - 1])
            return out
        if isinstance(f, Globally):
            s = self.table(f.body)
            out = list(s)
            for i in range(last - 1, -1, -1):
                out[i] = s[i] and out[i + 1]
            return out
        if isinstance(f, Finally):
            s = self.table(f.body)
            out = list(s)
            for i in range(last - 1, -1, -1):
                out[i] = s[i] or out[i + 1]
            return out
        if isinstance(f, Historically):
            s = self.table(f.body)
            out = list(s)
            for i in range(1, n):
                out[i] = s[i] and out[i - 1]
            return out
        if isinstance(f, BoundedGlobally):
            s = self.table(f.body)
            return [all(s[min(j, last)] for j in range(i, i + f.bound + 1)) for i in range(n)]
        if isinstance(f, BoundedFinally):
            s = self.table(f.body)
            return [any(s[min(j, last)] for j in range(i, i + f.bound + 1)) for i in range(n)]
        raise UnsupportedFragmentError(f"unknown node {type(f).__name__}")


class TruthCache:
    """Shared memo for evaluating many formulas over runs that share states.

    Position-local subformulas (no temporal operator, no pinned atom) are
    decided once per distinct state. Formulas are keyed by identity and
    kept alive by the cache.
    """

    def __init__(self):
        self._local: Dict[int, bool] = {}
        self._depth: Dict[int, int] = {}
        self._truth: Dict[Tuple[int, FrozenSet[str]], bool] = {}
        self._alive: List[Formula] = []

    def is_local(self, f: Formula) -> bool:
        key = id(f)
        hit = self._local.get(key)
        if hit is None:
            hit = all(
                isinstance(node, (Bottom, Top, Implies, Not, And, Or, Iff))
                or (isinstance(node, Atom) and node.time_index is None)
                for node in walk(f)
            )
            self._local[key] = hit
            self._alive.append(f)
        return hit

    def depth(self, f: Formula) -> int:
        key = id(f)
        hit = self._depth.get(key)
        if hit is None:
            hit = temporal_depth(f)
            self._depth[key] = hit
            self._alive.append(f)
        return hit

    def holds_in(self, f: Formula, state: FrozenSet[str]) -> bool:
        key = (id(f), state)
        hit = self._truth.get(key)
        if hit is None:
            hit = _Tables(Run((state,)), 1).table(f)[0]
            self._truth[key] = hit
        return hit

    def evaluate(self, f: Formula, run: Run, t: int) -> bool:
        if not 0 <= t < run.length:
            raise PreconditionError(f"position {t} outside run of length {run.length}")
        return _CachedTables(run, run.length + self.depth(f), self).table(f)[t]


class _CachedTables(_Tables):
    def __init__(self, run: Run, size: int, cache: TruthCache):
        super().__init__(run, size)
        self.cache = cache

    def table(self, f: Formula) -> List[bool]:
        key = id(f)
        cached = self._memo.get(key)
        if cached is None:
            if self.cache.is_local(f):
                cached = [self.cache.holds_in(f, self._state(i)) for i in range(self.size)]
            else:
                cached = self._compute(f)
            self._memo[key] = cached
        return cached
