"""
Bounded unrolling of a world model to CNF.

Timeline positions 0..last, last = now + horizon. Per position every state
variable is one-hot (at-least-one plus pairwise at-most-one); per step each
agent performs exactly one action. A rule fires iff its guard holds and the
joint action matches; firing forces its assignments at t+1, and a value
persists unless a firing rule assigns that variable (explicit frame
clauses).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence

from loguru import logger

from ..errors import InputError
from ..formula import Encoder, Encoding, Formula, Run, Theory, temporal_depth
from ..sat import CnfFormula, VarPool
from .explicit import check_integrity
from .model import AGENTS, WorldModel


def _exactly_one(pool: VarPool, lits: Sequence[int]) -> None:
    pool.add(lits)
    for i, a in enumerate(lits):
        for b in lits[i + 1:]:
            pool.add((-a, -b))


@dataclass
class Unrolling:
    model: WorldModel
    pool: VarPool
    encoder: Encoder

    @property
    def now(self) -> int:
        return self.model.now

    @property
    def last(self) -> int:
        return self.model.last

    @property
    def cnf(self) -> CnfFormula:
        return self.pool.to_cnf()

    @property
    def varmap(self) -> Dict[Hashable, int]:
        return self.pool.named()

    def value_var(self, var: str, value: str, t: int) -> int:
        return self.pool.var(("val", var, str(value), min(t, self.last)))

    def action_var(self, action: str, t: int) -> int:
        if not 0 <= t < self.last:
            raise InputError(f"no action variable for step {t}")
        return self.pool.var(("act", action, t))

    def state_vars(self, t: int, names: Optional[Sequence[str]] = None) -> List[int]:
        chosen = [self.model.var(n) for n in names] if names is not None else self.model.vars
        return [self.value_var(v.name, x, t) for v in chosen for x in v.domain]

    def decode(self, model: Sequence[int]) -> Run:
        """Run over positions 0..last from a full SAT model."""
        true = {lit for lit in model if lit > 0}
        states = []
        for t in range(self.last + 1):
            names = {
                v.atom(x) for v in self.model.vars for x in v.domain
                if self.value_var(v.name, x, t) in true
            }
            if t < self.last:
                names |= {a for a in self.model.actions.all if self.action_var(a, t) in true}
            states.append(frozenset(names))
        return Run(tuple(states))

    def state_at(self, model: Sequence[int], t: int) -> Dict[str, str]:
        true = {lit for lit in model if lit > 0}
        return {
            v.name: x for v in self.model.vars for x in v.domain
            if self.value_var(v.name, x, t) in true
        }


def _formula_slack(m: WorldModel) -> int:
    depths = [temporal_depth(m.init)] + [temporal_depth(f) for _, f in m.history]
    return max([m.horizon] + depths)


def unroll(m: WorldModel, horizon: Optional[int] = None, integrity_limit: int = 20000) -> Unrolling:
    """CNF whose models are the runs of ``m`` over positions 0..now+horizon."""
    if horizon is not None:
        if horizon < 1:
            raise InputError("horizon must be >= 1")
        m = m.with_horizon(horizon)
    check_integrity(m, integrity_limit)

    pool = VarPool()
    last = m.last
    values = {v.atom(x): (v.name, x) for v in m.vars for x in v.domain}
    actions = m.actions.all

    for t in range(last + 1):
        for v in m.vars:
            _exactly_one(pool, [pool.var(("val", v.name, x, t)) for x in v.domain])
    for t in range(last):
        for agent in AGENTS:
            _exactly_one(pool, [pool.var(("act", a, t)) for a in m.actions.of(agent)])

    def resolve(name: str, time_index: Optional[int], i: int):
        t = time_index if time_index is not None else i
        hit = values.get(name)
        if hit is not None:
            return pool.var(("val", hit[0], hit[1], min(t, last)))
        if name in actions:
            return pool.var(("act", name, t)) if t < last else False
        raise InputError(f"unknown proposition {name!r}")

    encoder = Encoder(pool, resolve, stable_from=last, last=last + _formula_slack(m))
    unrolling = Unrolling(m, pool, encoder)
    index = m.var_index

    for t in range(last):
        fired: Dict[str, List[int]] = {v.name: [] for v in m.vars}
        for rule in m.rules:
            match = [unrolling.action_var(p, t) for p in rule.pattern if p is not None]
            fire = encoder.conjunction([encoder.literal(rule.guard, t)] + match)
            for asg in rule.assignments:
                target = index[asg.var]
                fired[asg.var].append(fire)
                if asg.value is not None:
                    pool.add((-fire, unrolling.value_var(asg.var, asg.value, t + 1)))
                    continue
                source = index[asg.source]
                for u in source.domain:
                    moved = asg.result(target, source, u)
                    pool.add((
                        -fire,
                        -unrolling.value_var(source.name, u, t),
                        unrolling.value_var(asg.var, moved, t + 1),
                    ))
        for v in m.vars:
            for x in v.domain:
                pool.add(
                    [-unrolling.value_var(v.name, x, t)]
                    + fired[v.name]
                    + [unrolling.value_var(v.name, x, t + 1)]
                )

    encoder.assert_at(m.init, 0)
    for pos, f in m.history:
        encoder.assert_at(f, pos)
    logger.debug(
        f"UNROLLED | now={m.now} | last={last} | vars={pool.num_vars} | clauses={len(pool.clauses)}"
    )
    return unrolling


class WorldTheory(Theory):
    """Unrolled world dynamics as the background for evidence and goals."""

    def __init__(self, m: WorldModel, integrity_limit: int = 20000):
        self.model = m
        self.integrity_limit = integrity_limit

    def instantiate(self) -> Encoding:
        unrolling = unroll(self.model, integrity_limit=self.integrity_limit)
        return Encoding(unrolling.pool, unrolling.encoder, origin=self.model.now)

    def unrolling(self) -> Unrolling:
        return unroll(self.model, integrity_limit=self.integrity_limit)


def assert_formulas(encoding: Encoding, formulas: Sequence[Formula]) -> None:
    for f in formulas:
        encoding.encoder.assert_at(f, encoding.origin)
