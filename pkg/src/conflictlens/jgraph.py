"""
Justification graphs over belief atoms.

Evidence items e:phi are reduced to propositional satisfiability: each body
is compiled against a background theory and guarded by one selector
variable per atom, so consistency, maximal grouping and entailment are all
solve-under-assumptions calls on a single incremental solver.

Policy:
- Enumeration refuses (CapacityError) above the configured atom bound
- Groups and justifications are ordered by atom id
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from .errors import CapacityError, InputError, PreconditionError, UnsupportedFragmentError
from .formula import Formula, FreeTheory, Theory, contains_belief, to_text
from .sat import CdclSolver, shrink_core

DEFAULT_EVIDENCE_BOUND = 16


@dataclass(frozen=True)
class BeliefAtom:
    id: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("belief atom id must be nonempty")


@dataclass(frozen=True)
class BeliefEntity:
    """Node of a justification graph; atoms are exactly the entities without components."""

    id: str
    components: Tuple["BeliefEntity", ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("belief entity id must be nonempty")
        object.__setattr__(self, "components", tuple(self.components))
        stack = list(self.components)
        while stack:
            node = stack.pop()
            if node.id == self.id:
                raise ValueError(f"entity {self.id} is its own component")
            stack.extend(node.components)

    @property
    def is_atom(self) -> bool:
        return not self.components

    def leaves(self) -> FrozenSet[str]:
        if self.is_atom:
            return frozenset({self.id})
        return frozenset().union(*(c.leaves() for c in self.components))

    def edges(self) -> List[Tuple[str, str]]:
        """(parent, component) pairs, depth first."""
        out: List[Tuple[str, str]] = []
        for comp in self.components:
            out.append((self.id, comp.id))
            out.extend(comp.edges())
        return out


@dataclass(frozen=True)
class EvidenceItem:
    atom: BeliefAtom
    body: Formula
    tag: str = "sensor"

    def __post_init__(self):
        if contains_belief(self.body):
            raise UnsupportedFragmentError(f"evidence {self.atom.id}: body must be belief-free")

    def to_log_line(self) -> str:
        return f"EVIDENCE | atom={self.atom.id} | tag={self.tag} | body={to_text(self.body)}"


@dataclass(frozen=True)
class EvidenceBase:
    items: Tuple[EvidenceItem, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        ids = [item.atom.id for item in self.items]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate evidence atoms in {ids}")

    @property
    def atom_ids(self) -> Tuple[str, ...]:
        return tuple(item.atom.id for item in self.items)

    def item(self, atom_id: str) -> EvidenceItem:
        for item in self.items:
            if item.atom.id == atom_id:
                return item
        raise InputError(f"unknown evidence atom {atom_id!r}")

    def restrict(self, atom_ids: Iterable[str]) -> "EvidenceBase":
        keep = set(atom_ids)
        return EvidenceBase(tuple(i for i in self.items if i.atom.id in keep))

    def extend(self, items: Iterable[EvidenceItem]) -> "EvidenceBase":
        return EvidenceBase(self.items + tuple(items))

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class ConsistentGroup:
    atoms: FrozenSet[str]
    graph: BeliefEntity = field(compare=False)

    @property
    def id(self) -> str:
        return self.graph.id

    @property
    def label(self) -> str:
        return "{" + ",".join(sorted(self.atoms)) + "}"


def make_group(atom_ids: Iterable[str], index: int) -> ConsistentGroup:
    ids = sorted(atom_ids)
    root = BeliefEntity(f"g{index}", tuple(BeliefEntity(a) for a in ids))
    return ConsistentGroup(frozenset(ids), root)


class EvidenceReasoner:
    """Incremental consistency and entailment checks over one evidence base."""

    def __init__(
        self,
        base: EvidenceBase,
        theory: Theory,
        seed: int = 0,
        facts: Sequence[Formula] = (),
    ):
        self.base = base
        self.encoding = theory.instantiate()
        pool = self.encoding.pool
        for fact in facts:
            self.encoding.encoder.assert_at(fact, self.encoding.origin)
        self.selectors: Dict[str, int] = {}
        for item in base.items:
            sel = pool.var(("evidence", item.atom.id))
            body = self.encoding.encoder.literal(item.body, self.encoding.origin)
            pool.add((-sel, body))
            self.selectors[item.atom.id] = sel
        self.solver = CdclSolver(pool.num_vars, seed=seed)
        self._loaded = 0
        self._consistent: Dict[FrozenSet[str], bool] = {}
        self._sync()

    def _sync(self) -> None:
        clauses = self.encoding.pool.clauses
        self.solver.ensure_vars(self.encoding.pool.num_vars)
        for clause in clauses[self._loaded:]:
            self.solver.add_clause(clause)
        self._loaded = len(clauses)

    def _selectors_for(self, atoms: Iterable[str]) -> List[int]:
        out = []
        for atom in sorted(set(atoms)):
            if atom not in self.selectors:
                raise InputError(f"unknown evidence atom {atom!r}")
            out.append(self.selectors[atom])
        return out

    def is_consistent(self, atoms: Iterable[str]) -> bool:
        key = frozenset(atoms)
        cached = self._consistent.get(key)
        if cached is None:
            cached = self.solver.solve(self._selectors_for(key))
            self._consistent[key] = cached
        return cached

    def groups(self, bound: int = DEFAULT_EVIDENCE_BOUND) -> List[ConsistentGroup]:
        ids = sorted(self.base.atom_ids)
        if len(ids) > bound:
            raise CapacityError("evidence atoms", len(ids), bound, "--evidence-bound")
        found: List[FrozenSet[str]] = []

        def grow(i: int, chosen: FrozenSet[str]) -> None:
            if i == len(ids):
                if all(a in chosen or not self.is_consistent(chosen | {a}) for a in ids):
                    if chosen not in found:
                        found.append(chosen)
                return
            with_atom = chosen | {ids[i]}
            if self.is_consistent(with_atom):
                grow(i + 1, with_atom)
            grow(i + 1, chosen)

        if self.is_consistent(frozenset()):
            grow(0, frozenset())
        ordered = sorted(found, key=lambda g: tuple(sorted(g)))
        groups = [make_group(g, i) for i, g in enumerate(ordered)]
        logger.debug(f"GROUPS_BUILT | atoms={len(ids)} | groups={len(groups)}")
        return groups

    def entails(self, group: ConsistentGroup, query: Formula) -> Tuple[bool, FrozenSet[str]]:
        q = self.encoding.encoder.literal(query, self.encoding.origin)
        self._sync()
        selectors = self._selectors_for(group.atoms)
        if self.solver.solve(selectors + [-q]):
            return False, frozenset()
        by_selector = {sel: atom for atom, sel in self.selectors.items()}
        kept = shrink_core(self.solver, selectors, background=[-q])
        return True, frozenset(by_selector[sel] for sel in kept)

    def conflict_core(self, atoms: Iterable[str]) -> FrozenSet[str]:
        """Minimal subset of ``atoms`` inconsistent with the theory; empty if the theory alone is."""
        selectors = self._selectors_for(atoms)
        if self.solver.solve(selectors):
            raise PreconditionError("evidence set is consistent")
        by_selector = {sel: atom for atom, sel in self.selectors.items()}
        return frozenset(by_selector[sel] for sel in shrink_core(self.solver, selectors))

    def contradiction_partners(self, atom: str) -> List[str]:
        return [
            other for other in sorted(self.base.atom_ids)
            if other != atom and not self.is_consistent({atom, other})
        ]


def _theory(horizon: int, theory: Optional[Theory]) -> Theory:
    return theory if theory is not None else FreeTheory(horizon)


def is_consistent(
    base: EvidenceBase,
    atoms: Iterable[str],
    horizon: int,
    theory: Optional[Theory] = None,
) -> bool:
    return EvidenceReasoner(base, _theory(horizon, theory)).is_consistent(atoms)


def max_consistent_groups(
    base: EvidenceBase,
    horizon: int,
    theory: Optional[Theory] = None,
    bound: int = DEFAULT_EVIDENCE_BOUND,
) -> List[ConsistentGroup]:
    if len(base) > bound:
        raise CapacityError("evidence atoms", len(base), bound, "--evidence-bound")
    return EvidenceReasoner(base, _theory(horizon, theory)).groups(bound)


def entails(
    base: EvidenceBase,
    group: ConsistentGroup,
    query: Formula,
    horizon: int,
    theory: Optional[Theory] = None,
) -> Tuple[bool, FrozenSet[str]]:
    return EvidenceReasoner(base, _theory(horizon, theory)).entails(group, query)


def graph_edges(groups: Sequence[ConsistentGroup]) -> List[Tuple[str, str]]:
    return [edge for group in groups for edge in group.graph.edges()]
