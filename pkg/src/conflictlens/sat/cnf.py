from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..errors import InputError

Clause = Tuple[int, ...]


@dataclass(frozen=True)
class CnfFormula:
    """Clauses over variables 1..num_vars (DIMACS signed literals)."""

    num_vars: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise InputError("num_vars must be >= 0")
        clauses = tuple(tuple(c) for c in self.clauses)
        for clause in clauses:
            for lit in clause:
                check_literal(lit, self.num_vars)
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def of(cls, clauses: Iterable[Sequence[int]], num_vars: Optional[int] = None) -> "CnfFormula":
        clauses = tuple(tuple(c) for c in clauses)
        if num_vars is None:
            num_vars = max((abs(lit) for c in clauses for lit in c), default=0)
        return cls(num_vars, clauses)

    def conjoin(self, clauses: Iterable[Sequence[int]], num_vars: Optional[int] = None) -> "CnfFormula":
        extra = tuple(tuple(c) for c in clauses)
        top = max([self.num_vars] + [abs(lit) for c in extra for lit in c])
        return CnfFormula(max(top, num_vars or 0), self.clauses + extra)

    def satisfied_by(self, model: Dict[int, bool]) -> bool:
        return all(any(model.get(abs(lit), False) == (lit > 0) for lit in c) for c in self.clauses)


def check_literal(lit: int, num_vars: int) -> None:
    if isinstance(lit, bool) or not isinstance(lit, int) or lit == 0:
        raise InputError(f"malformed literal {lit!r}")
    if abs(lit) > num_vars:
        raise InputError(f"literal {lit} exceeds num_vars={num_vars}")


class VarPool:
    """Allocates CNF variables; named keys for problem atoms, anonymous aux vars.

    Auxiliary variables never receive a name, so cores and model projections
    over named keys can never mention them.
    """

    def __init__(self):
        self.num_vars = 0
        self.clauses: List[Clause] = []
        self._by_key: Dict[Hashable, int] = {}
        self._key_of: Dict[int, Hashable] = {}
        self._true: Optional[int] = None

    def var(self, key: Hashable) -> int:
        found = self._by_key.get(key)
        if found is None:
            found = self._fresh()
            self._by_key[key] = found
            self._key_of[found] = key
        return found

    def lookup(self, key: Hashable) -> Optional[int]:
        return self._by_key.get(key)

    def key_of(self, var: int) -> Optional[Hashable]:
        return self._key_of.get(var)

    def aux(self) -> int:
        return self._fresh()

    def true_literal(self) -> int:
        if self._true is None:
            self._true = self._fresh()
            self.clauses.append((self._true,))
        return self._true

    def add(self, clause: Iterable[int]) -> None:
        self.clauses.append(tuple(clause))

    def named(self) -> Dict[Hashable, int]:
        return dict(self._by_key)

    def to_cnf(self) -> CnfFormula:
        return CnfFormula(self.num_vars, tuple(self.clauses))

    def _fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars
