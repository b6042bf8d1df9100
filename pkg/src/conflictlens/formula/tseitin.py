"""
CNF compilation of formulas over a bounded timeline.

Formulas are first put in negation normal form (a hash-consed DAG of
integer node ids), then every (node, position) pair gets a literal through
Tseitin equivalences. Positions run up to ``last``; the timeline is the
stuttered run, so at ``last`` Next points to itself, Until/Release reduce
to their right argument, and atoms beyond the real run reuse its final
state. Auxiliary variables come from ``VarPool.aux`` and are never named.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import HorizonOverflowError, UnsupportedFragmentError
from ..sat.cnf import CnfFormula, VarPool
from .semantics import temporal_depth
from .syntax import (
    And,
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
    Prev,
    Since,
    Top,
    Until,
    atoms,
    contains_belief,
)

# NNF node kinds
CONST = "const"
LIT = "lit"
AND = "and"
OR = "or"
NEXT = "next"
YESTERDAY = "yesterday"
WEAK_YESTERDAY = "weak_yesterday"
UNTIL = "until"
RELEASE = "release"
SINCE = "since"
TRIGGER = "trigger"

Resolved = Union[int, bool]
AtomResolver = Callable[[str, Optional[int], int], Resolved]


class NnfBuilder:
    """Hash-consed negation normal form."""

    def __init__(self):
        self.nodes: List[tuple] = []
        self._index: Dict[tuple, int] = {}
        self._memo: Dict[Tuple[int, bool], Tuple[Formula, int]] = {}
        self.false = self._intern((CONST, False))
        self.true = self._intern((CONST, True))

    def _intern(self, node: tuple) -> int:
        found = self._index.get(node)
        if found is None:
            found = len(self.nodes)
            self.nodes.append(node)
            self._index[node] = found
        return found

    def _junction(self, kind: str, parts: Sequence[int]) -> int:
        absorbing, neutral = (self.false, self.true) if kind == AND else (self.true, self.false)
        flat: List[int] = []
        for part in parts:
            if part == absorbing:
                return absorbing
            if part == neutral:
                continue
            node = self.nodes[part]
            flat.extend(node[1] if node[0] == kind else (part,))
        unique = tuple(sorted(set(flat)))
        if not unique:
            return neutral
        if len(unique) == 1:
            return unique[0]
        return self._intern((kind, unique))

    def conj(self, parts: Sequence[int]) -> int:
        return self._junction(AND, parts)

    def disj(self, parts: Sequence[int]) -> int:
        return self._junction(OR, parts)

    def next(self, node: int, steps: int = 1) -> int:
        for _ in range(steps):
            if self.nodes[node][0] == CONST:
                return node
            node = self._intern((NEXT, node))
        return node

    def build(self, f: Formula, positive: bool = True) -> int:
        key = (id(f), positive)
        entry = self._memo.get(key)
        if entry is not None and entry[0] is f:
            return entry[1]
        node = self._build(f, positive)
        self._memo[key] = (f, node)
        return node

    def _build(self, f: Formula, pos: bool) -> int:
        b = self.build
        if isinstance(f, Bottom):
            return self.false if pos else self.true
        if isinstance(f, Top):
            return self.true if pos else self.false
        if isinstance(f, Atom):
            return self._intern((LIT, f.name, f.time_index, pos))
        if isinstance(f, Not):
            return b(f.body, not pos)
        if isinstance(f, Implies):
            if pos:
                return self.disj([b(f.left, False), b(f.right, True)])
            return self.conj([b(f.left, True), b(f.right, False)])
        if isinstance(f, And):
            if pos:
                return self.conj([b(f.left, True), b(f.right, True)])
            return self.disj([b(f.left, False), b(f.right, False)])
        if isinstance(f, Or):
            if pos:
                return self.disj([b(f.left, True), b(f.right, True)])
            return self.conj([b(f.left, False), b(f.right, False)])
        if isinstance(f, Iff):
            lp, ln = b(f.left, True), b(f.left, False)
            rp, rn = b(f.right, True), b(f.right, False)
            if pos:
                return self.disj([self.conj([lp, rp]), self.conj([ln, rn])])
            return self.disj([self.conj([lp, rn]), self.conj([ln, rp])])
        if isinstance(f, Next):
            return self.next(b(f.body, pos))
        if isinstance(f, Prev):
            return self._intern((YESTERDAY if pos else WEAK_YESTERDAY, b(f.body, pos)))
        if isinstance(f, Until):
            kind = UNTIL if pos else RELEASE
            return self._intern((kind, b(f.left, pos), b(f.right, pos)))
        if isinstance(f, Since):
            kind = SINCE if pos else TRIGGER
            return self._intern((kind, b(f.left, pos), b(f.right, pos)))
        if isinstance(f, Globally):
            if pos:
                return self._intern((RELEASE, self.false, b(f.body, True)))
            return self._intern((UNTIL, self.true, b(f.body, False)))
        if isinstance(f, Finally):
            if pos:
                return self._intern((UNTIL, self.true, b(f.body, True)))
            return self._intern((RELEASE, self.false, b(f.body, False)))
        if isinstance(f, Historically):
            if pos:
                return self._intern((TRIGGER, self.false, b(f.body, True)))
            return self._intern((SINCE, self.true, b(f.body, False)))
        if isinstance(f, (BoundedGlobally, BoundedFinally)):
            body = b(f.body, pos)
            copies = [self.next(body, i) for i in range(f.bound + 1)]
            universal = isinstance(f, BoundedGlobally) == pos
            return self.conj(copies) if universal else self.disj(copies)
        if isinstance(f, Believes):
            raise UnsupportedFragmentError("E: belief operators cannot be compiled to CNF")
        if isinstance(f, Compare):
            raise UnsupportedFragmentError(f"comparison {f} must be lowered before encoding")
        raise UnsupportedFragmentError(f"unknown node {type(f).__name__}")


class Encoder:
    """Maps (formula, position) to literals in ``pool``.

    ``stable_from`` is the last position of the real run; ``last`` the last
    table position. A formula of depth d is accepted while
    ``stable_from + d <= last``.
    """

    def __init__(self, pool: VarPool, resolve_atom: AtomResolver, stable_from: int, last: int):
        self.pool = pool
        self.nnf = NnfBuilder()
        self.resolve_atom = resolve_atom
        self.stable_from = stable_from
        self.last = last
        self._memo: Dict[Tuple[int, int], int] = {}
        self._gates: Dict[tuple, int] = {}

    def literal(self, f: Formula, position: int) -> int:
        depth = temporal_depth(f)
        if self.stable_from + depth > self.last:
            raise HorizonOverflowError(depth, self.last - self.stable_from)
        if contains_belief(f):
            raise UnsupportedFragmentError("E: belief operators cannot be compiled to CNF")
        return self._lit(self.nnf.build(f), min(position, self.last))

    def assert_at(self, f: Formula, position: int) -> int:
        lit = self.literal(f, position)
        self.pool.add((lit,))
        return lit

    def conjunction(self, lits: Sequence[int]) -> int:
        return self._gate(AND, lits)

    def disjunction(self, lits: Sequence[int]) -> int:
        return self._gate(OR, lits)

    # =========================================================================
    # Gates
    # =========================================================================

    def _true(self) -> int:
        return self.pool.true_literal()

    def _const(self, value: bool) -> int:
        t = self._true()
        return t if value else -t

    def _gate(self, kind: str, lits: Sequence[int]) -> int:
        t = self._true()
        absorbing, neutral = (-t, t) if kind == AND else (t, -t)
        parts = []
        for lit in lits:
            if lit == absorbing:
                return absorbing
            if lit == neutral:
                continue
            parts.append(lit)
        unique = tuple(sorted(set(parts)))
        if not unique:
            return neutral
        if len(unique) == 1:
            return unique[0]
        if any(-lit in unique for lit in unique):
            return absorbing
        key = (kind, unique)
        found = self._gates.get(key)
        if found is not None:
            return found
        x = self.pool.aux()
        if kind == AND:
            for lit in unique:
                self.pool.add((-x, lit))
            self.pool.add((x,) + tuple(-lit for lit in unique))
        else:
            for lit in unique:
                self.pool.add((x, -lit))
            self.pool.add((-x,) + unique)
        self._gates[key] = x
        return x

    def _lit(self, node_id: int, i: int) -> int:
        key = (node_id, i)
        found = self._memo.get(key)
        if found is None:
            found = self._compute(node_id, i)
            self._memo[key] = found
        return found

    def _compute(self, node_id: int, i: int) -> int:
        node = self.nnf.nodes[node_id]
        kind = node[0]
        last = self.last
        if kind == CONST:
            return self._const(node[1])
        if kind == LIT:
            _, name, time_index, positive = node
            resolved = self.resolve_atom(name, time_index, i)
            lit = self._const(resolved) if isinstance(resolved, bool) else resolved
            return lit if positive else -lit
        if kind == AND:
            return self._gate(AND, [self._lit(c, i) for c in node[1]])
        if kind == OR:
            return self._gate(OR, [self._lit(c, i) for c in node[1]])
        if kind == NEXT:
            return self._lit(node[1], min(i + 1, last))
        if kind == YESTERDAY:
            return self._const(False) if i == 0 else self._lit(node[1], i - 1)
        if kind == WEAK_YESTERDAY:
            return self._const(True) if i == 0 else self._lit(node[1], i - 1)
        a, b = node[1], node[2]
        if kind == UNTIL:
            if i >= last:
                return self._lit(b, last)
            inner = self._gate(AND, [self._lit(a, i), self._lit(node_id, i + 1)])
            return self._gate(OR, [self._lit(b, i), inner])
        if kind == RELEASE:
            if i >= last:
                return self._lit(b, last)
            inner = self._gate(OR, [self._lit(a, i), self._lit(node_id, i + 1)])
            return self._gate(AND, [self._lit(b, i), inner])
        if kind == SINCE:
            if i == 0:
                return self._lit(b, 0)
            inner = self._gate(AND, [self._lit(a, i), self._lit(node_id, i - 1)])
            return self._gate(OR, [self._lit(b, i), inner])
        if kind == TRIGGER:
            if i == 0:
                return self._lit(b, 0)
            inner = self._gate(OR, [self._lit(a, i), self._lit(node_id, i - 1)])
            return self._gate(AND, [self._lit(b, i), inner])
        raise UnsupportedFragmentError(f"unknown NNF node {kind}")


# =============================================================================
# Theories: the background an evidence body or goal is encoded against
# =============================================================================

@dataclass
class Encoding:
    pool: VarPool
    encoder: Encoder
    origin: int


class Theory(ABC):
    """Background constraints plus the atom layout formulas are compiled against."""

    @abstractmethod
    def instantiate(self) -> Encoding:
        """Fresh pool holding the background clauses and an encoder over it."""


class FreeTheory(Theory):
    """Atoms are free per position, except declared one-hot value groups.

    ``one_hot`` maps a variable to its values; the atoms ``var=value`` then
    take exactly one value per position.
    """

    def __init__(self, horizon: int, one_hot: Optional[Mapping[str, Sequence[str]]] = None):
        if horizon < 0:
            raise ValueError("horizon must be >= 0")
        self.horizon = horizon
        self.one_hot = {var: tuple(values) for var, values in (one_hot or {}).items()}

    def instantiate(self) -> Encoding:
        pool = VarPool()
        for var, values in sorted(self.one_hot.items()):
            for t in range(self.horizon + 1):
                lits = [pool.var((f"{var}={value}", t)) for value in values]
                pool.add(lits)
                for j, a in enumerate(lits):
                    for b in lits[j + 1:]:
                        pool.add((-a, -b))
        horizon = self.horizon

        def resolve(name: str, time_index: Optional[int], i: int) -> int:
            t = time_index if time_index is not None else i
            return pool.var((name, min(t, horizon)))

        encoder = Encoder(pool, resolve, stable_from=horizon, last=2 * horizon)
        return Encoding(pool, encoder, origin=0)


def encode(f: Formula, horizon: int) -> Tuple[CnfFormula, Dict[Tuple[str, int], int]]:
    """CNF equisatisfiable with ``f`` at position 0 over runs of length horizon+1.

    Returns the CNF and the map from (atom name, position) to variable.
    """
    if contains_belief(f):
        raise UnsupportedFragmentError("E: belief operators cannot be compiled to CNF")
    depth = temporal_depth(f)
    if depth > horizon:
        raise HorizonOverflowError(depth, horizon)
    pool = VarPool()
    atom_map: Dict[Tuple[str, int], int] = {}
    for name in sorted(atoms(f)):
        for t in range(horizon + 1):
            atom_map[(name, t)] = pool.var((name, t))

    def resolve(name: str, time_index: Optional[int], i: int) -> int:
        t = time_index if time_index is not None else i
        return pool.var((name, min(t, horizon)))

    encoder = Encoder(pool, resolve, stable_from=horizon, last=horizon + depth)
    encoder.assert_at(f, 0)
    return pool.to_cnf(), atom_map
