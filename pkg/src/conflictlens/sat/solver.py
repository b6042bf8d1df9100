"""
One-shot solver API over CnfFormula.

Policy:
- Each call builds its own CdclSolver; nothing is shared between calls
- Cores are always subsets of the assumptions passed in
- Core minimization is deletion-based and re-solves once per member
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from ..errors import PreconditionError
from .cdcl import CdclSolver
from .cnf import CnfFormula, check_literal


class SolveStatus(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True)
class SolveResult:
    status: SolveStatus
    model: Optional[Tuple[int, ...]] = None
    core: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.status is SolveStatus.SAT and self.model is None:
            raise ValueError("SAT result needs a model")
        if self.status is SolveStatus.UNSAT and self.core is None:
            raise ValueError("UNSAT result needs a core")

    @property
    def satisfiable(self) -> bool:
        return self.status is SolveStatus.SAT

    def value(self, var: int) -> bool:
        if self.model is None:
            raise PreconditionError("no model on an UNSAT result")
        return self.model[var - 1] > 0

    def to_log_line(self) -> str:
        if self.satisfiable:
            return f"SOLVE | status=SAT | vars={len(self.model)}"
        return f"SOLVE | status=UNSAT | core={list(self.core)}"


def load_solver(f: CnfFormula, seed: int = 0) -> CdclSolver:
    solver = CdclSolver(f.num_vars, seed=seed)
    for clause in f.clauses:
        solver.add_clause(clause)
    return solver


def solve(f: CnfFormula, assumptions: Sequence[int] = (), seed: int = 0) -> SolveResult:
    for lit in assumptions:
        check_literal(lit, f.num_vars)
    solver = load_solver(f, seed)
    if solver.solve(assumptions):
        return SolveResult(SolveStatus.SAT, model=tuple(solver.model))
    return SolveResult(SolveStatus.UNSAT, core=tuple(solver.core))


def shrink_core(
    solver: CdclSolver,
    core: Sequence[int],
    background: Sequence[int] = (),
) -> List[int]:
    """Deletion-based minimization on an already loaded solver.

    ``background`` literals are assumed on every call and never dropped.
    Members are tried for deletion from the end of ``core`` backwards, so
    earlier members are preferred when several minimal cores exist.
    """
    background = list(background)
    kept = list(dict.fromkeys(core))
    if solver.solve(background + kept):
        raise PreconditionError("formula is satisfiable under the given core")
    refined = set(solver.core)
    kept = [lit for lit in kept if lit in refined]
    for lit in reversed(list(kept)):
        if lit not in kept:
            continue
        trial = [x for x in kept if x != lit]
        if not solver.solve(background + trial):
            refined = set(solver.core)
            kept = [x for x in trial if x in refined]
    return kept


def minimize_core(
    f: CnfFormula,
    core: Sequence[int],
    background: Sequence[int] = (),
    seed: int = 0,
) -> List[int]:
    for lit in list(core) + list(background):
        check_literal(lit, f.num_vars)
    kept = shrink_core(load_solver(f, seed), core, background)
    logger.debug(f"CORE_MINIMIZED | before={len(set(core))} | after={len(kept)}")
    return kept


def enumerate_models(
    f: CnfFormula,
    projection: Iterable[int],
    limit: int,
    assumptions: Sequence[int] = (),
    seed: int = 0,
) -> List[Dict[int, bool]]:
    """Distinct projections of models, found by blocking clauses."""
    if limit < 1:
        raise PreconditionError("limit must be >= 1")
    projection = sorted(set(projection))
    for var in projection:
        check_literal(var, f.num_vars)
    solver = load_solver(f, seed)
    found: List[Dict[int, bool]] = []
    while len(found) < limit and solver.solve(assumptions):
        model = solver.model
        valuation = {var: model[var - 1] > 0 for var in projection}
        found.append(valuation)
        if not projection:
            break
        solver.add_clause([-var if value else var for var, value in valuation.items()])
    return found


def count_models(f: CnfFormula, projection: Iterable[int], limit: int = 1 << 20) -> int:
    return len(enumerate_models(f, projection, limit))
