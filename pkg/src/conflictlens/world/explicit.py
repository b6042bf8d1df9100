"""
Explicit-state exploration of a world model.

Used for the integrity check on clashing assignments and as an
independent enumeration of runs to cross-check the CNF unrolling.
"""

from __future__ import annotations

import functools
import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from loguru import logger

from ..errors import CapacityError
from ..formula import Formula, FreeTheory, Run, TruthCache, evaluate, temporal_depth
from ..sat import enumerate_models
from .model import JointAction, State, WorldModel, apply_rules, successor


def initial_states(m: WorldModel, limit: int = 100000) -> List[State]:
    """States satisfying INIT, in declaration-order of values."""
    theory = FreeTheory(temporal_depth(m.init), {v.name: v.domain for v in m.vars})
    encoding = theory.instantiate()
    encoding.encoder.assert_at(m.init, 0)
    pool = encoding.pool
    projection = [pool.var((v.atom(x), 0)) for v in m.vars for x in v.domain]
    models = enumerate_models(pool.to_cnf(), projection, limit + 1)
    if len(models) > limit:
        raise CapacityError("initial states", len(models), limit, "limit=")
    states = []
    for valuation in models:
        states.append(tuple(
            next(x for x in v.domain if valuation[pool.var((v.atom(x), 0))])
            for v in m.vars
        ))
    return sorted(states, key=lambda s: tuple(v.index(x) for v, x in zip(m.vars, s)))


class Transitions:
    """Memoized explicit successors of one world model."""

    def __init__(self, m: WorldModel, cache: Optional[TruthCache] = None):
        self.model = m
        self.cache = cache or TruthCache()
        self._next: Dict[Tuple[State, JointAction], State] = {}
        self._guards: Dict[State, Tuple[bool, ...]] = {}
        self._atoms: Dict[State, frozenset] = {}

    def atoms(self, state: State) -> frozenset:
        hit = self._atoms.get(state)
        if hit is None:
            hit = self.model.state_atoms(state)
            self._atoms[state] = hit
        return hit

    def _enabled(self, state: State) -> Tuple[bool, ...]:
        hit = self._guards.get(state)
        if hit is None:
            valuation = self.atoms(state)
            hit = tuple(self.cache.holds_in(r.guard, valuation) for r in self.model.rules)
            self._guards[state] = hit
        return hit

    def __call__(self, state: State, joint: JointAction) -> State:
        key = (state, joint)
        hit = self._next.get(key)
        if hit is None:
            fired = [
                r for r, on in zip(self.model.rules, self._enabled(state))
                if on and r.matches(joint)
            ]
            hit = apply_rules(self.model, state, joint, fired)
            self._next[key] = hit
        return hit


def check_integrity(m: WorldModel, limit: int = 20000) -> int:
    """Breadth-first search over reachable states up to ``m.last`` steps.

    Raises ModelIntegrityError when two firing rules disagree. Returns the
    number of states visited; stops early (with a warning) past ``limit``.
    Results are memoized per model.
    """
    return _integrity(m, limit)


@functools.lru_cache(maxsize=32)
def _integrity(m: WorldModel, limit: int) -> int:
    step = Transitions(m)
    joints = m.actions.joint_actions()
    frontier: Set[State] = set(initial_states(m))
    seen: Set[State] = set(frontier)
    for _ in range(m.last):
        following: Set[State] = set()
        for state in sorted(frontier):
            for joint in joints:
                nxt = step(state, joint)
                if nxt not in seen:
                    seen.add(nxt)
                    following.add(nxt)
        if len(seen) > limit:
            logger.warning(f"INTEGRITY_PARTIAL | visited={len(seen)} | limit={limit}")
            break
        if not following:
            break
        frontier = following
    return len(seen)


def _run_of(m: WorldModel, states: Sequence[State], joints: Sequence[JointAction]) -> Run:
    positions = []
    for t, state in enumerate(states):
        names = set(m.state_atoms(state))
        if t < len(joints):
            names.update(joints[t])
        positions.append(frozenset(names))
    return Run(tuple(positions))


def runs(
    m: WorldModel,
    constraints: Iterable[Tuple[int, Formula]] = (),
    limit: int = 100000,
) -> List[Run]:
    """Every run over positions 0..last consistent with INIT, HISTORY and ``constraints``.

    Exponential in the number of steps; meant for small models.
    """
    checks = list(m.history) + list(constraints)
    joints = m.actions.joint_actions()
    found: List[Run] = []
    for start in initial_states(m):
        for sequence in itertools.product(joints, repeat=m.last):
            states = [start]
            for joint in sequence:
                states.append(successor(m, states[-1], joint))
            run = _run_of(m, states, sequence)
            if all(evaluate(f, run, pos) for pos, f in checks):
                found.append(run)
                if len(found) > limit:
                    raise CapacityError("runs", len(found), limit, "limit=")
    return found


def state_of(m: WorldModel, run: Run, t: int) -> Optional[State]:
    position = run.states[min(t, len(run.states) - 1)]
    values = []
    for v in m.vars:
        hit = [x for x in v.domain if v.atom(x) in position]
        if len(hit) != 1:
            return None
        values.append(hit[0])
    return tuple(values)
