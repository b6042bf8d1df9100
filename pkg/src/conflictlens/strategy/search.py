"""
Strategy enumeration, strategy encoding, winning checks and maximal goal sets.

Policy:
- Decision points are the observation classes some run of some group reaches
- Enumeration order is itertools.product over actions sorted by name, points
  sorted by (step, class); the count is checked before the first yield
- Winning needs a compliant run in every group (no vacuous wins)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from loguru import logger

from ..errors import CapacityError, HorizonOverflowError, PreconditionError, TotalityError
from ..formula import Formula, Run, temporal_depth
from ..sat import CnfFormula, enumerate_models
from ..utils.pool import ordered_map
from ..utils.shutdown import check_stop
from ..world import PossibleWorldSet, WorldGroup
from .model import DecisionPoint, GoalSet, JointStrategy, Strategy, parts_of
from .oracle import GroupOracle, build_oracles

DEFAULT_STRATEGY_BOUND = 100000
DEFAULT_CLASS_BOUND = 4096

AnyStrategy = Union[Strategy, JointStrategy]


def group_classes(
    ws: PossibleWorldSet,
    group: WorldGroup,
    bound: int = DEFAULT_CLASS_BOUND,
) -> FrozenSet[DecisionPoint]:
    """Decision points reachable in one group under unconstrained play."""
    m = ws.model
    if not m.decision_steps:
        return frozenset()
    unrolling = ws.unrolling(group)
    final = m.decision_steps[-1]
    projection = [
        unrolling.value_var(name, x, t)
        for t in range(final + 1)
        for name in m.observable
        for x in m.var(name).domain
    ]
    if not projection:
        return frozenset((step, tuple(() for _ in range(step + 1))) for step in m.decision_steps)
    models = enumerate_models(unrolling.cnf, projection, bound + 1)
    if len(models) > bound:
        raise CapacityError("observation classes", len(models), bound, "--class-bound")
    points = set()
    for valuation in models:
        full = tuple(
            tuple(
                next(x for x in m.var(name).domain if valuation[unrolling.value_var(name, x, t)])
                for name in m.observable
            )
            for t in range(final + 1)
        )
        for step in m.decision_steps:
            points.add((step, full[: step + 1]))
    return frozenset(points)


def decision_points(ws: PossibleWorldSet, bound: int = DEFAULT_CLASS_BOUND) -> Tuple[DecisionPoint, ...]:
    points = set()
    for group in ws.groups:
        points |= group_classes(ws, group, bound)
    return tuple(sorted(points))


def strategy_count(actions: int, points: int) -> int:
    return actions ** points


def enumerate_strategies(
    agent: str,
    ws: PossibleWorldSet,
    bound: int = DEFAULT_STRATEGY_BOUND,
    actions: Optional[Sequence[str]] = None,
    points: Optional[Sequence[DecisionPoint]] = None,
) -> Iterator[Strategy]:
    """Every total deterministic strategy of ``agent`` over the reachable decision points."""
    alphabet = ws.model.actions.of(agent)
    acts = sorted(alphabet if actions is None else [a for a in actions if a in alphabet])
    if not acts:
        raise PreconditionError(f"agent {agent} has no actions to choose from")
    points = tuple(sorted(points if points is not None else decision_points(ws)))
    count = strategy_count(len(acts), len(points))
    if count > bound:
        raise CapacityError(f"strategies of {agent}", count, bound, "--strategy-bound")
    logger.debug(f"STRATEGIES | agent={agent} | points={len(points)} | actions={len(acts)} | count={count}")
    return _strategies(agent, acts, points)


def _strategies(agent: str, acts: Sequence[str], points: Sequence[DecisionPoint]) -> Iterator[Strategy]:
    for i, choice in enumerate(itertools.product(acts, repeat=len(points))):
        check_stop("strategy enumeration")
        yield Strategy(agent, tuple(zip(points, choice)), id=f"{agent}#{i}")


def encode_strategy(d: AnyStrategy, ws: PossibleWorldSet, group: WorldGroup) -> CnfFormula:
    """World constraint of ``group`` plus clauses forcing each decision of ``d``."""
    points = group_classes(ws, group)
    for part in parts_of(d):
        missing = part.covers(points)
        if missing is not None:
            raise TotalityError(part.owner, missing[0], missing[1])
    unrolling = ws.unrolling(group)
    m = ws.model
    for part in parts_of(d):
        for (step, cls), act in part.decisions:
            lits = [
                unrolling.value_var(name, value, t)
                for t, obs in enumerate(cls)
                for name, value in zip(m.observable, obs)
            ]
            unrolling.pool.add([-lit for lit in lits] + [unrolling.action_var(act, step)])
    return unrolling.cnf


def is_winning(
    d: Union[AnyStrategy, Sequence[AnyStrategy]],
    ws: PossibleWorldSet,
    goal: Formula,
    group: Optional[WorldGroup] = None,
    oracles: Optional[Sequence[GroupOracle]] = None,
) -> Tuple[bool, Optional[Run]]:
    """(wins, witness) over every group of ``ws`` (or just ``group``).

    The witness is a compliant run falsifying ``goal``; it is None when the
    strategy wins, or loses only because no run complies with it.
    """
    depth = temporal_depth(goal)
    if depth > ws.model.horizon:
        raise HorizonOverflowError(depth, ws.model.horizon, "goal")
    strategies = list(d) if isinstance(d, (list, tuple)) else [d]
    if oracles is None:
        groups = [group] if group is not None else list(ws.groups)
        oracles = [GroupOracle(ws, g) for g in groups]
    elif group is not None:
        oracles = [o for o in oracles if o.group.id == group.id]
    for oracle in oracles:
        wins, witness = oracle.check(strategies, goal)
        if not wins:
            return False, witness
    return True, None


@dataclass(frozen=True)
class Achievement:
    """A weight-maximal goal subset and the strategies winning it."""

    goals: FrozenSet[str]
    weight: int
    strategies: Tuple[AnyStrategy, ...]

    @property
    def names(self) -> List[str]:
        return sorted(self.goals)


def achieved_names(
    oracles: Sequence[GroupOracle],
    strategies: Sequence[AnyStrategy],
    gs: GoalSet,
    jobs: int = 1,
) -> List[Optional[FrozenSet[str]]]:
    """Per strategy, the goal names it wins in all groups (None: no compliant run somewhere)."""
    formulas = [gs.formula(n) for n in gs.names]
    named = list(zip(gs.names, formulas))

    def per_group(oracle: GroupOracle) -> List[Optional[FrozenSet[str]]]:
        out = []
        for s in strategies:
            check_stop("winning check")
            won = oracle.achieved(parts_of(s), formulas)
            out.append(None if won is None else frozenset(n for n, f in named if f in won))
        return out

    results = ordered_map(per_group, oracles, jobs)
    merged: List[Optional[FrozenSet[str]]] = []
    for i in range(len(strategies)):
        acc: Optional[FrozenSet[str]] = frozenset(gs.names)
        for column in results:
            won = column[i]
            if won is None:
                acc = None
                break
            acc = acc & won
        merged.append(acc)
    return merged


def max_achievable(
    ws: PossibleWorldSet,
    gs: GoalSet,
    strategies: Sequence[AnyStrategy],
    oracles: Optional[Sequence[GroupOracle]] = None,
    jobs: int = 1,
) -> List[Achievement]:
    """Weight-maximal goal subsets won in every group, each with its winning strategies.

    Strategies without a compliant run in some group win nothing there; the
    empty subset is reported when no subset weighs more than 0.
    """
    oracles = list(oracles) if oracles is not None else build_oracles(ws)
    strategies = list(strategies)
    per_strategy = achieved_names(oracles, strategies, gs, jobs)
    best = 0
    winners: Dict[FrozenSet[str], List[AnyStrategy]] = {}
    for s, won in zip(strategies, per_strategy):
        if won is None:
            continue
        weight, subsets = gs.best_subsets(won)
        if weight < best:
            continue
        if weight > best:
            best = weight
            winners = {}
        for subset in subsets:
            winners.setdefault(subset, []).append(s)
    achievements = [
        Achievement(subset, best, tuple(winners[subset]))
        for subset in sorted(winners, key=sorted)
    ]
    logger.debug(
        f"MAX_ACHIEVABLE | weight={best} | sets={[a.names for a in achievements]}"
    )
    return achievements


def joint_strategies(a_parts: Sequence[Strategy], b_parts: Sequence[Strategy]) -> List[JointStrategy]:
    return [JointStrategy(a, b) for a in a_parts for b in b_parts]
