from __future__ import annotations

import itertools

from hypothesis import given, settings, strategies as st

from conflictlens.formula import BOTTOM, And, Atom, Not, Or, Run, evaluate
from conflictlens.jgraph import BeliefAtom, EvidenceBase, EvidenceItem, entails, make_group, max_consistent_groups

NAMES = ("p", "q", "r", "s")

literal = st.sampled_from(NAMES).flatmap(lambda n: st.sampled_from([Atom(n), Not(Atom(n))]))
bodies = st.one_of(
    literal,
    st.builds(Or, literal, literal),
    st.builds(And, literal, literal),
)
bases = st.lists(bodies, min_size=0, max_size=8).map(
    lambda fs: EvidenceBase(tuple(EvidenceItem(BeliefAtom(f"e{i}"), f) for i, f in enumerate(fs)))
)


def _satisfiable(formulas) -> bool:
    for bits in itertools.product((False, True), repeat=len(NAMES)):
        run = Run.of({n for n, b in zip(NAMES, bits) if b})
        if all(evaluate(f, run, 0) for f in formulas):
            return True
    return False


def _maximal_subsets(base: EvidenceBase):
    ids = base.atom_ids
    body = {i: base.item(i).body for i in ids}
    consistent = [
        frozenset(combo)
        for k in range(len(ids) + 1)
        for combo in itertools.combinations(ids, k)
        if _satisfiable([body[i] for i in combo])
    ]
    return {s for s in consistent if not any(s < other for other in consistent)}


@settings(max_examples=60, deadline=None)
@given(base=bases)
def test_groups_are_exactly_the_maximal_consistent_subsets(base: EvidenceBase) -> None:
    groups = max_consistent_groups(base, horizon=1)
    assert {g.atoms for g in groups} == _maximal_subsets(base)
    assert [g.id for g in groups] == [f"g{i}" for i in range(len(groups))]
    for g in groups:
        assert g.graph.leaves() == g.atoms or (not g.atoms and g.graph.is_atom)


def _entailed(formulas, query) -> bool:
    return not _satisfiable(list(formulas) + [Not(query)])


def _bodies(base: EvidenceBase, atoms):
    return [base.item(a).body for a in sorted(atoms)]


@settings(max_examples=60, deadline=None)
@given(base=bases, query=bodies)
def test_entailment_matches_valuations_and_support_is_minimal(base: EvidenceBase, query) -> None:
    for g in max_consistent_groups(base, horizon=1):
        holds, support = entails(base, g, query, horizon=1)
        assert holds == _entailed(_bodies(base, g.atoms), query)
        if not holds:
            assert support == frozenset()
            continue
        assert support <= g.atoms
        assert _entailed(_bodies(base, support), query)
        for atom in support:
            assert not _entailed(_bodies(base, support - {atom}), query)


@settings(max_examples=60, deadline=None)
@given(base=bases, left=bodies, right=bodies)
def test_groups_close_entailment_under_conjunction(base: EvidenceBase, left, right) -> None:
    for g in max_consistent_groups(base, horizon=1):
        ids = sorted(g.atoms)
        half = len(ids) // 2
        first, second = make_group(ids[:half], 0), make_group(ids[half:], 1)
        if entails(base, first, left, horizon=1)[0] and entails(base, second, right, horizon=1)[0]:
            assert entails(base, g, And(left, right), horizon=1)[0]


@settings(max_examples=60, deadline=None)
@given(base=bases)
def test_no_group_entails_falsehood(base: EvidenceBase) -> None:
    groups = max_consistent_groups(base, horizon=1)
    assert groups
    for g in groups:
        assert not entails(base, g, BOTTOM, horizon=1)[0]
