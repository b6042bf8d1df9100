"""
Possible-world sets: one world constraint per maximal consistent evidence group.

Grouping only looks at the evidence bodies (plus one-hot domains), so two
sensors that disagree split the worlds even when the dynamics would allow
either reading. Every group is then checked against the unrolled dynamics;
a group the dynamics rule out is an input error, not a silent drop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Sequence, Set, Tuple

from loguru import logger

from ..errors import EvidenceIncompatibleError, InputError
from ..formula import Encoding, Formula, FreeTheory, Theory
from ..jgraph import (
    DEFAULT_EVIDENCE_BOUND,
    ConsistentGroup,
    EvidenceBase,
    EvidenceItem,
    EvidenceReasoner,
)
from ..sat import CnfFormula, enumerate_models
from .model import WorldModel
from .unroll import Unrolling, WorldTheory, unroll

MODEL_ATOM = "model"

History = Tuple[FrozenSet[str], ...]


class EvidenceTheory(Theory):
    """Free atoms per position with one-hot value groups, anchored at ``now``."""

    def __init__(self, m: WorldModel):
        self.model = m

    def instantiate(self) -> Encoding:
        domains = {v.name: v.domain for v in self.model.vars}
        encoding = FreeTheory(self.model.last, domains).instantiate()
        return Encoding(encoding.pool, encoding.encoder, origin=self.model.now)


@dataclass(frozen=True)
class WorldGroup:
    group: ConsistentGroup
    items: Tuple[EvidenceItem, ...]

    @property
    def id(self) -> str:
        return self.group.id

    @property
    def atoms(self) -> FrozenSet[str]:
        return self.group.atoms

    @property
    def label(self) -> str:
        return self.group.label

    @property
    def bodies(self) -> Tuple[Formula, ...]:
        return tuple(item.body for item in self.items)


@dataclass(frozen=True)
class PossibleWorldSet:
    model: WorldModel
    base: EvidenceBase
    groups: Tuple[WorldGroup, ...]
    facts: Tuple[Formula, ...] = ()

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self) -> Iterator[WorldGroup]:
        return iter(self.groups)

    def group(self, group_id: str) -> WorldGroup:
        for g in self.groups:
            if g.id == group_id:
                return g
        raise InputError(f"unknown world group {group_id!r}")

    def unrolling(self, group: WorldGroup) -> Unrolling:
        """Unrolled dynamics with the group's bodies and the shared facts asserted at now."""
        unrolling = unroll(self.model)
        for f in group.bodies + self.facts:
            unrolling.encoder.assert_at(f, self.model.now)
        return unrolling

    def world_constraint(self, group: WorldGroup) -> CnfFormula:
        return self.unrolling(group).cnf


def build_possible_worlds(
    base: EvidenceBase,
    m: WorldModel,
    facts: Sequence[Formula] = (),
    bound: int = DEFAULT_EVIDENCE_BOUND,
    seed: int = 0,
) -> PossibleWorldSet:
    facts = tuple(facts)
    for item in base.items:
        m.check_atoms(item.body, where=f"evidence {item.atom.id}")
    for f in facts:
        m.check_atoms(f, where="shared fact")

    grouping = EvidenceReasoner(base, EvidenceTheory(m), seed, facts=facts)
    groups = grouping.groups(bound)
    if not groups:
        raise EvidenceIncompatibleError((MODEL_ATOM,))

    dynamics = EvidenceReasoner(base, WorldTheory(m), seed, facts=facts)
    if not dynamics.is_consistent(()):
        raise EvidenceIncompatibleError((MODEL_ATOM,))
    for g in groups:
        if not dynamics.is_consistent(g.atoms):
            core = sorted(dynamics.conflict_core(g.atoms))
            raise EvidenceIncompatibleError(core + [MODEL_ATOM])

    world_groups = tuple(
        WorldGroup(g, tuple(base.item(a) for a in sorted(g.atoms))) for g in groups
    )
    logger.info(
        f"WORLDS_BUILT | groups={len(world_groups)} | atoms={len(base)} | facts={len(facts)}"
    )
    return PossibleWorldSet(m, base, world_groups, facts)


def histories(ws: PossibleWorldSet, limit: int = 4096) -> Set[History]:
    """Union over groups of the state sequences 0..now the group allows."""
    m = ws.model
    found: Set[History] = set()
    for group in ws.groups:
        unrolling = ws.unrolling(group)
        projection: List[int] = []
        for t in range(m.now + 1):
            projection.extend(unrolling.state_vars(t))
        for valuation in enumerate_models(unrolling.cnf, projection, limit):
            found.add(tuple(
                frozenset(
                    v.atom(x) for v in m.vars for x in v.domain
                    if valuation[unrolling.value_var(v.name, x, t)]
                )
                for t in range(m.now + 1)
            ))
    return found
