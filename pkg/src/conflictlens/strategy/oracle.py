"""
Incremental winning checks for one possible-world group.

The solver holds the unrolled dynamics once. Everything that varies between
queries is switched on by assumption literals:

- evidence bodies and shared facts, one selector each (so cores can name them)
- decisions, one selector per (step, class, action): sel -> (class -> action)
- goal negations, one selector per queried goal subset

A strategy wins a goal set in the group iff it has at least one compliant
run there and no compliant run falsifies a goal of the set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from ..formula import Formula, Run, evaluate
from ..sat import CdclSolver, shrink_core
from ..world import PossibleWorldSet, Unrolling, WorldGroup, unroll
from .model import DecisionPoint, ObservationClass, Strategy, parts_of


@dataclass(frozen=True)
class Selector:
    kind: str
    key: Hashable
    literal: int


class GroupOracle:
    def __init__(self, ws: PossibleWorldSet, group: WorldGroup, seed: int = 0):
        self.ws = ws
        self.group = group
        self.model = ws.model
        self.unrolling: Unrolling = unroll(self.model)
        self.encoder = self.unrolling.encoder
        self.pool = self.unrolling.pool
        now = self.model.now

        self.selectors: Dict[int, Selector] = {}
        self.context: List[int] = []
        for item in group.items:
            self._guard("evidence", item.atom.id, self.encoder.literal(item.body, now))
        for i, fact in enumerate(ws.facts):
            self._guard("fact", i, self.encoder.literal(fact, now))

        self.solver = CdclSolver(self.pool.num_vars, seed=seed)
        self._loaded = 0
        self._decisions: Dict[Tuple[DecisionPoint, str], int] = {}
        self._negations: Dict[FrozenSet[Formula], int] = {}
        self._achieved: Dict[Tuple[Tuple[int, ...], Tuple[Formula, ...]], Optional[FrozenSet[Formula]]] = {}
        self._sync()

    def _guard(self, kind: str, key: Hashable, body: int) -> None:
        sel = self.pool.var((kind, key))
        self.pool.add((-sel, body))
        self.selectors[sel] = Selector(kind, key, sel)
        self.context.append(sel)

    def _sync(self) -> None:
        self.solver.ensure_vars(self.pool.num_vars)
        for clause in self.pool.clauses[self._loaded:]:
            self.solver.add_clause(clause)
        self._loaded = len(self.pool.clauses)

    # =========================================================================
    # Literals
    # =========================================================================

    def class_literals(self, step: int, cls: ObservationClass) -> List[int]:
        out = []
        for t, obs in enumerate(cls):
            for name, value in zip(self.model.observable, obs):
                out.append(self.unrolling.value_var(name, value, t))
        return out

    def decision(self, point: DecisionPoint, action: str) -> int:
        key = (point, action)
        sel = self._decisions.get(key)
        if sel is None:
            step, cls = point
            sel = self.pool.var(("decision", step, cls, action))
            self.pool.add(
                [-sel]
                + [-lit for lit in self.class_literals(step, cls)]
                + [self.unrolling.action_var(action, step)]
            )
            self._decisions[key] = sel
        return sel

    def strategy_literals(self, strategies: Iterable) -> List[int]:
        lits: List[int] = []
        for s in strategies:
            for part in parts_of(s):
                lits.extend(self.decision(point, act) for point, act in part.decisions)
        return lits

    def goal_literal(self, goal: Formula) -> int:
        return self.encoder.literal(goal, self.model.now)

    def negation(self, goals: Iterable[Formula]) -> int:
        """Selector forcing at least one of ``goals`` to fail."""
        key = frozenset(goals)
        sel = self._negations.get(key)
        if sel is None:
            sel = self.pool.aux()
            self.pool.add([-sel] + [-self.goal_literal(g) for g in sorted(key, key=str)])
            self._negations[key] = sel
        return sel

    # =========================================================================
    # Queries
    # =========================================================================

    def solve(self, assumptions: Sequence[int]) -> bool:
        self._sync()
        return self.solver.solve(list(self.context) + list(assumptions))

    def solve_exact(self, assumptions: Sequence[int]) -> bool:
        """Solve under exactly ``assumptions``, without the context selectors."""
        self._sync()
        return self.solver.solve(list(assumptions))

    def witness(self) -> Run:
        return self.unrolling.decode(self.solver.model)

    def admissible(self, strategies: Sequence[Strategy]) -> Optional[Run]:
        """A compliant run, or None if the strategies exclude every run of the group."""
        if self.solve(self.strategy_literals(strategies)):
            return self.witness()
        return None

    def check(self, strategies: Sequence, goal: Formula) -> Tuple[bool, Optional[Run]]:
        """(wins, witness): witness is a falsifying run, or None when no run complies."""
        decisions = self.strategy_literals(strategies)
        if not self.solve(decisions):
            return False, None
        if self.solve(decisions + [self.negation([goal])]):
            return False, self.witness()
        return True, None

    def achieved(self, strategies: Sequence, goals: Sequence[Formula]) -> Optional[FrozenSet[Formula]]:
        """Goals of ``goals`` every compliant run satisfies; None when no run complies.

        Candidates are pruned on concrete runs: each counterexample drops the
        goals it falsifies until the remaining conjunction is entailed.
        """
        decisions = self.strategy_literals(strategies)
        key = (tuple(sorted(decisions)), tuple(goals))
        if key in self._achieved:
            return self._achieved[key]
        now = self.model.now
        result: Optional[FrozenSet[Formula]]
        if not self.solve(decisions):
            result = None
        else:
            candidates = [g for g in goals if evaluate(g, self.witness(), now)]
            while candidates and self.solve(decisions + [self.negation(candidates)]):
                run = self.witness()
                candidates = [g for g in candidates if evaluate(g, run, now)]
            result = frozenset(candidates)
        self._achieved[key] = result
        return result

    def core(self, assumptions: Sequence[int], background: Sequence[int]) -> List[int]:
        """Minimal subset of ``assumptions`` that together with ``background`` is UNSAT."""
        self._sync()
        kept = shrink_core(self.solver, assumptions, background)
        logger.debug(f"CORE_EXTRACTED | group={self.group.id} | size={len(kept)}")
        return kept


def build_oracles(ws: PossibleWorldSet, seed: int = 0) -> List[GroupOracle]:
    return [GroupOracle(ws, g, seed) for g in ws.groups]
