"""
Believed possible conflicts for one information state.

A's maximal goal sets are computed cooperatively (A steers B). For each of
them the game search looks for an A strategy that wins the set with some
help from B and that no believed B strategy can break: a B strategy is
believed in a group when, with some A, it wins one of B's maximal goal sets
there. A conflict is believed iff no goal set has such a survivor.

Policy:
- Joint plays without a compliant run in a group are skipped there
- Causes are reported per group, for the cooperative witness of each
  maximal goal set completed with the first declared action
- A failure is justified by a minimized core over evidence selectors;
  anything else in the core is reported as the "model" pseudo-atom
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from loguru import logger

from ..config import AnalysisLimits
from ..errors import InputError
from ..formula import Formula, Run
from ..jgraph import EvidenceBase, EvidenceReasoner
from ..strategy import (
    Achievement,
    Blame,
    GameTree,
    GoalSet,
    GroupOracle,
    JointStrategy,
    Strategy,
    SurvivalCheck,
)
from ..world import (
    MODEL_ATOM,
    EvidenceTheory,
    PossibleWorldSet,
    WorldGroup,
    WorldModel,
    build_possible_worlds,
)
from .model import REASON_NO_COOPERATIVE, ConflictCause, InformationBase

BelievedGoals = Union[GoalSet, Mapping[FrozenSet[str], GoalSet]]


@dataclass(frozen=True)
class Candidate:
    strategy: Strategy
    goals: FrozenSet[str]


@dataclass
class Detection:
    worlds: PossibleWorldSet
    candidates: List[Candidate]
    survivors: List[Strategy]
    causes: List[ConflictCause]
    max_a: List[Achievement] = field(default_factory=list)

    @property
    def conflict(self) -> bool:
        return not self.survivors


class ConflictAnalyzer:
    """Game tree, oracles and believed goal sets for one information state."""

    def __init__(
        self,
        m: WorldModel,
        info: InformationBase,
        goals_a: GoalSet,
        goals_b: BelievedGoals,
        acts_a: Optional[Sequence[str]] = None,
        acts_b: Optional[Sequence[str]] = None,
        limits: AnalysisLimits = AnalysisLimits(),
        round: int = 0,
    ):
        self.model = m
        self.info = info
        self.goals_a = goals_a
        self.goals_b = goals_b
        self.limits = limits
        self.round = round
        self.ws = build_possible_worlds(
            info.active(), m, info.fact_formulas, limits.evidence_bound, limits.seed
        )
        self.game = GameTree(
            self.ws, acts_a, acts_b, limits.strategy_bound, limits.class_bound, limits.jobs
        )
        self._oracles: Dict[str, GroupOracle] = {}
        self._believed: Dict[int, List[FrozenSet[str]]] = {}
        self._labels: Dict[Tuple[str, tuple], Strategy] = {}
        self._reasoner: Optional[EvidenceReasoner] = None

    # =========================================================================
    # Goals
    # =========================================================================

    def goals_b_for(self, group: WorldGroup) -> GoalSet:
        if isinstance(self.goals_b, GoalSet):
            return self.goals_b
        found = self.goals_b.get(group.atoms)
        if found is None:
            raise InputError(f"no believed goals of B for group {group.label}")
        return found

    def _formulas(self, gs_b: GoalSet) -> Dict[str, Formula]:
        return dict(self.goals_a.union(gs_b))

    def cooperative_max(self, gs: GoalSet) -> List[Achievement]:
        return self.game.achievements(gs)

    def believed_b(self, index: int) -> List[FrozenSet[str]]:
        """B's believed maximal goal sets in one group; ``[frozenset()]`` when none weighs more than 0."""
        cached = self._believed.get(index)
        if cached is not None:
            return cached
        group = self.ws.groups[index]
        achievements = self.game.achievements(self.goals_b_for(group), 1 << index)
        result = [a.goals for a in achievements]
        logger.debug(
            f"BELIEVED_B | group={group.id} | weight={achievements[0].weight if achievements else '-'} "
            f"| sets={[sorted(s) for s in result]}"
        )
        self._believed[index] = result
        return result

    def _threats(self) -> List[List[Tuple[Formula, ...]]]:
        out = []
        for index, group in enumerate(self.ws.groups):
            gs_b = self.goals_b_for(group)
            out.append([tuple(gs_b.formula(n) for n in sorted(s)) for s in self.believed_b(index)])
        return out

    # =========================================================================
    # Strategies and oracles
    # =========================================================================

    def label(self, owner: str, table: Mapping) -> Strategy:
        """The strategy with decision table ``table``; ids count up per owner in discovery order."""
        decisions = tuple(sorted(table.items()))
        key = (owner, decisions)
        hit = self._labels.get(key)
        if hit is None:
            count = sum(1 for o, _ in self._labels if o == owner)
            hit = Strategy(owner, decisions, id=f"{owner}#{count}")
            self._labels[key] = hit
        return hit

    def oracle(self, group: WorldGroup) -> GroupOracle:
        hit = self._oracles.get(group.id)
        if hit is None:
            hit = GroupOracle(self.ws, group, self.limits.seed)
            self._oracles[group.id] = hit
        return hit

    def contradicts(self, atoms: Sequence[str]) -> Tuple[str, ...]:
        """Active evidence atoms inconsistent with one of ``atoms``."""
        if self._reasoner is None:
            self._reasoner = EvidenceReasoner(
                self.info.active(), EvidenceTheory(self.model), self.limits.seed,
                facts=self.info.fact_formulas,
            )
        active = set(self.info.active().atom_ids)
        found = set()
        for atom in atoms:
            if atom in active:
                found.update(self._reasoner.contradiction_partners(atom))
        return tuple(sorted(found - set(atoms)))

    # =========================================================================
    # Causes and justification
    # =========================================================================

    def causes(self, check: SurvivalCheck, achievement: Achievement) -> List[ConflictCause]:
        """One cause per group where the canonical A strategy for ``achievement`` meets a bad leaf."""
        a_table = dict(achievement.strategies[0].a_part.table)
        for _ in self.game.walk(self.game.all_groups, a_table):
            pass
        d_a = self.label("A", a_table)
        found = []
        for index in range(len(self.ws.groups)):
            blame = check.first_bad(a_table, index)
            if blame is not None:
                found.append(self._cause(index, d_a, achievement.goals, blame))
        return found

    def _cause(self, index: int, d_a: Strategy, goals_a: FrozenSet[str], blame: Blame) -> ConflictCause:
        group = self.ws.groups[index]
        goals_b = self.believed_b(index)[blame.threat]
        b_table = blame.witness.table("B")
        b_table.update(self.game.chain(blame.play))
        for _ in self.game.walk(1 << index, d_a.table, b_table):
            pass
        d_b = self.label("B", b_table)
        formulas = self._formulas(self.goals_b_for(group))
        required = sorted(goals_a | goals_b)
        failed = tuple(n for n in required if not self.game.holds(blame.play, formulas[n]))
        witness = self.game.run(blame.play)
        justification = self.justify(
            self.oracle(group), JointStrategy(d_a, d_b), [formulas[n] for n in required], witness
        )
        cause = ConflictCause(
            justification=justification,
            a_strategy=d_a.label,
            b_strategy=d_b.label,
            goals_a=tuple(sorted(goals_a)),
            goals_b=tuple(sorted(goals_b)),
            group=group.id,
            group_atoms=tuple(sorted(group.atoms)),
            failed_goals=failed,
            a_decisions=tuple(d_a.describe(self.model.observable)),
            b_decisions=tuple(d_b.describe(self.model.observable)),
            round=self.round,
            contradicts=self.contradicts([a for a in justification if a != MODEL_ATOM]),
            witness=witness,
        )
        logger.info(cause.to_log_line())
        return cause

    def justify(
        self,
        oracle: GroupOracle,
        joint: JointStrategy,
        goals: Sequence[Formula],
        witness: Optional[Run],
    ) -> Tuple[str, ...]:
        """Evidence atoms that, with the joint strategy, rule out satisfying ``goals``.

        Env moves of the failing run are fixed and its past states and moves
        are pinned, so the query is UNSAT. Pins are minimized first with the
        context held fixed, then the context against the remaining pins; any
        pin or non-evidence selector left over is reported as "model".
        """
        unrolling = oracle.unrolling
        m = self.model
        background = oracle.strategy_literals(joint.parts)
        background += [oracle.goal_literal(g) for g in goals]
        pins: List[int] = []
        if witness is not None:
            env = set(m.actions.env)
            for t in range(m.now + 1):
                for v in m.vars:
                    for x in v.domain:
                        if v.atom(x) in witness.states[t]:
                            pins.append(unrolling.value_var(v.name, x, t))
            for t in range(m.last):
                for act in sorted(witness.states[t] & m.actions.all):
                    if act in env:
                        background.append(unrolling.action_var(act, t))
                    elif t < m.now:
                        pins.append(unrolling.action_var(act, t))
        context = list(oracle.context)
        if oracle.solve_exact(context + pins + background):
            return (MODEL_ATOM,)
        kept_pins = oracle.core(pins, background + context)
        kept = oracle.core(context, background + kept_pins)
        evidence = sorted(
            oracle.selectors[lit].key for lit in kept
            if lit in oracle.selectors and oracle.selectors[lit].kind == "evidence"
        )
        if kept_pins or len(evidence) < len(kept) or not evidence:
            evidence.append(MODEL_ATOM)
        return tuple(evidence)

    # =========================================================================
    # Detection
    # =========================================================================

    def detect(self) -> Detection:
        max_a = self.cooperative_max(self.goals_a)
        if not max_a:
            cause = ConflictCause(
                justification=(MODEL_ATOM,),
                a_strategy="-",
                b_strategy="-",
                goals_a=(),
                goals_b=(),
                group="*",
                reason=REASON_NO_COOPERATIVE,
                round=self.round,
            )
            logger.info(cause.to_log_line())
            return Detection(self.ws, [], [], [cause], max_a)

        threats = self._threats()
        candidates: List[Candidate] = []
        survivors: List[Strategy] = []
        causes: List[ConflictCause] = []
        for achievement in max_a:
            candidates.append(Candidate(self.label("A", achievement.strategies[0].a_part.table), achievement.goals))
            check = SurvivalCheck(
                self.game, [self.goals_a.formula(n) for n in sorted(achievement.goals)], threats
            )
            table = check.survivor()
            if table is None:
                causes.extend(self.causes(check, achievement))
                continue
            survivor = self.label("A", table)
            if survivor not in survivors:
                survivors.append(survivor)
                logger.info(f"STRATEGY_SURVIVED | id={survivor.label} | goals={sorted(achievement.goals)}")
        if survivors:
            causes = []
        logger.info(
            f"DETECTED | round={self.round} | groups={len(self.ws)} | candidates={len(candidates)} "
            f"| survivors={len(survivors)} | causes={len(causes)} | nodes={self.game.visited}"
        )
        return Detection(self.ws, candidates, survivors, causes, max_a)


def detect_conflict(
    base: EvidenceBase,
    m: WorldModel,
    goals_a: GoalSet,
    believed_goals_b: BelievedGoals,
    acts_a: Optional[Sequence[str]] = None,
    acts_b: Optional[Sequence[str]] = None,
    limits: AnalysisLimits = AnalysisLimits(),
) -> Tuple[bool, List[ConflictCause]]:
    """(conflict, causes) for the evidence ``base`` with nothing shared yet."""
    detection = ConflictAnalyzer(
        m, InformationBase(base), goals_a, believed_goals_b, acts_a, acts_b, limits
    ).detect()
    return detection.conflict, detection.causes
