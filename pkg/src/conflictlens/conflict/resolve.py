"""
One resolution step per level.

- C1: dismiss cause atoms that contradict other evidence and B's own
  observations; learn B's observations
- C2: share B's strategy commitments as facts
- C3: B adopts the requested goals
- C4: both agents settle on the best jointly achievable goal set

An empty delta means the level had nothing to offer.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from loguru import logger

from ..errors import ConfigurationError
from ..jgraph import EvidenceReasoner
from ..strategy import GoalSet
from ..world import MODEL_ATOM, EvidenceTheory
from .detect import BelievedGoals, ConflictAnalyzer
from .model import ConflictCause, InformationBase, ResolutionLevel, ResolutionOffers


@dataclass(frozen=True)
class FixResult:
    info: InformationBase
    goals_a: GoalSet
    goals_b: BelievedGoals
    delta: Tuple[str, ...] = ()
    negotiated: Optional[Tuple[str, ...]] = None

    @property
    def changed(self) -> bool:
        return bool(self.delta)


def _map_goals(goals_b: BelievedGoals, fn) -> BelievedGoals:
    if isinstance(goals_b, GoalSet):
        return fn(goals_b)
    return {atoms: fn(gs) for atoms, gs in goals_b.items()}


def _union_goals(goals_b: BelievedGoals) -> GoalSet:
    if isinstance(goals_b, GoalSet):
        return goals_b
    merged = GoalSet()
    for gs in goals_b.values():
        merged = GoalSet(merged.union(gs))
    return merged


def _share_awareness(
    causes: Sequence[ConflictCause],
    info: InformationBase,
    offers: ResolutionOffers,
    analyzer: ConflictAnalyzer,
) -> Tuple[InformationBase, Tuple[str, ...]]:
    if not offers.knows:
        return info, ()
    active = info.active()
    reasoner = EvidenceReasoner(
        active.extend(i for i in offers.knows if i.atom.id not in active.atom_ids),
        EvidenceTheory(analyzer.model),
        analyzer.limits.seed,
        facts=info.fact_formulas,
    )
    told = [i.atom.id for i in offers.knows]
    losing: Dict[str, List[str]] = {}
    for atom in sorted({a for c in causes for a in c.justification}):
        if atom == MODEL_ATOM or atom in told or atom not in active.atom_ids:
            continue
        partners = [p for p in reasoner.contradiction_partners(atom) if p not in told]
        if not partners:
            continue
        if reasoner.is_consistent([atom] + told):
            continue
        losing[atom] = partners
    if not losing:
        return info, ()
    updated = info.dismiss(losing).learn(offers.knows)
    delta = tuple(f"dismiss {a} (contradicts {','.join(p)})" for a, p in losing.items()) + tuple(
        f"learn {i.atom.id}" for i in offers.knows if i.atom.id not in info.evidence.atom_ids
    )
    return updated, delta


def _negotiate(
    goals_a: GoalSet,
    goals_b: BelievedGoals,
    offers: ResolutionOffers,
    analyzer: ConflictAnalyzer,
) -> Optional[Tuple[Tuple[str, ...], int]]:
    if offers.joint_weights is None:
        raise ConfigurationError("resolution level C4 needs a JOINT_WEIGHTS table")
    joint = GoalSet(goals_a.union(_union_goals(goals_b)), offers.joint_weights)
    achievements = analyzer.cooperative_max(joint)
    if not achievements:
        return None
    best = achievements[0]
    return tuple(best.names), max(best.weight, 1)


def fix(
    causes: Sequence[ConflictCause],
    level: ResolutionLevel,
    info: InformationBase,
    goals_a: GoalSet,
    goals_b: BelievedGoals,
    offers: ResolutionOffers,
    analyzer: ConflictAnalyzer,
) -> FixResult:
    """Apply ``level`` once; an unchanged result carries an empty delta."""
    unchanged = FixResult(info, goals_a, goals_b)

    if level is ResolutionLevel.C1:
        updated, delta = _share_awareness(causes, info, offers, analyzer)
        if not delta:
            return unchanged
        result = FixResult(updated, goals_a, goals_b, delta)

    elif level is ResolutionLevel.C2:
        known = {n for n, _ in info.facts}
        fresh = [(n, f) for n, f in offers.commits if n not in known]
        if not fresh:
            return unchanged
        result = FixResult(info.share(fresh), goals_a, goals_b, tuple(f"commit {n}" for n, _ in fresh))

    elif level is ResolutionLevel.C3:
        fresh = [(n, f) for n, f in offers.adopts if n not in info.adopted]
        if not fresh:
            return unchanged
        result = FixResult(
            info.adopt(n for n, _ in fresh),
            goals_a,
            _map_goals(goals_b, lambda gs: gs.adopt(fresh)),
            tuple(f"adopt {n}" for n, _ in fresh),
        )

    else:
        if info.joint:
            return unchanged
        settled = _negotiate(goals_a, goals_b, offers, analyzer)
        if settled is None:
            return unchanged
        names, weight = settled
        result = FixResult(
            replace(info, joint=True),
            goals_a.negotiated(names, weight),
            _map_goals(goals_b, lambda gs: gs.negotiated(names, weight)),
            (f"negotiate {','.join(names) or 'nothing'}",),
            negotiated=names,
        )

    logger.info(f"FIX | level={level.value} | delta={list(result.delta)}")
    return result


def offers_for(
    knows: Sequence = (),
    commits: Sequence = (),
    adopts: Sequence = (),
    joint_weights: Optional[Mapping] = None,
) -> ResolutionOffers:
    """Convenience constructor taking plain sequences and a weight mapping."""
    weights = None
    if joint_weights is not None:
        weights = tuple((frozenset(s), int(w)) for s, w in joint_weights.items())
    return ResolutionOffers(tuple(knows), tuple(commits), tuple(adopts), weights)
