"""
Explicit game search over the plays of every world group.

A play is a history prefix of one group extended step by step with joint
actions; plays that agree on their observations share a decision point.
Strategies are never enumerated as tables:

- cooperative: A and B pick one joint action per decision point, Env stays
  universal; each node returns the Pareto set of (groups covered, goals won)
- survival: A picks, B and Env are universal; a leaf is bad when it violates
  A's and B's goals for a B strategy that still wins one of B's maximal goal
  sets, checked by a cooperative search with B's moves pinned along the leaf

Every node expanded counts against ``node_bound``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from loguru import logger

from ..errors import CapacityError, HorizonOverflowError, PreconditionError
from ..formula import Formula, Run, TruthCache
from ..sat import enumerate_models
from ..utils.pool import ordered_map
from ..utils.shutdown import check_stop
from ..world import PossibleWorldSet, State, Transitions
from .model import DecisionPoint, GoalSet, JointStrategy, Observation, ObservationClass, Strategy
from .search import DEFAULT_CLASS_BOUND, DEFAULT_STRATEGY_BOUND, Achievement

Move = Tuple[str, str]
Chain = Tuple[Tuple[DecisionPoint, str], ...]
Table = Dict[DecisionPoint, str]


class Play:
    __slots__ = ("group", "positions", "state", "cls", "moves", "uid", "children")

    def __init__(
        self,
        group: int,
        positions: Tuple[frozenset, ...],
        state: State,
        cls: ObservationClass,
        moves: Tuple[Move, ...],
        uid: int,
    ):
        self.group = group
        self.positions = positions
        self.state = state
        self.cls = cls
        self.moves = moves
        self.uid = uid
        self.children: Dict[Move, Tuple["Play", ...]] = {}

    @property
    def step(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class Outcome:
    """Groups with a compliant run and goals every compliant run satisfies, as bit masks."""

    covered: int
    won: int
    decisions: Tuple[Tuple[DecisionPoint, Move], ...] = ()

    def covers(self, other: "Outcome") -> bool:
        return (self.covered | other.covered) == self.covered and (self.won | other.won) == self.won

    def table(self, owner: str) -> Table:
        side = 0 if owner == "A" else 1
        return {point: move[side] for point, move in self.decisions}


class Query:
    """Goals, groups and pinned B moves of one cooperative search."""

    __slots__ = ("goals", "groups", "forced", "key", "free")

    def __init__(self, goals: Tuple[Formula, ...], groups: int, forced: Mapping[DecisionPoint, str], key: int):
        self.goals = goals
        self.groups = groups
        self.forced = dict(forced)
        self.key = key
        self.free: "Query" = self

    @property
    def full(self) -> int:
        return (1 << len(self.goals)) - 1


def pareto(outcomes: Iterable[Outcome]) -> List[Outcome]:
    kept: List[Outcome] = []
    for o in outcomes:
        if any(k.covers(o) for k in kept):
            continue
        kept = [k for k in kept if not o.covers(k)] + [o]
    return kept


def _combine(xs: Sequence[Outcome], ys: Sequence[Outcome]) -> List[Outcome]:
    return pareto(
        Outcome(x.covered | y.covered, x.won & y.won, x.decisions + y.decisions)
        for x in xs
        for y in ys
    )


def _maximal(masks: Iterable[Tuple[int, tuple]]) -> List[Tuple[int, tuple]]:
    kept: List[Tuple[int, tuple]] = []
    for mask, decisions in masks:
        if any(k | mask == k for k, _ in kept):
            continue
        kept = [(k, d) for k, d in kept if k | mask != mask] + [(mask, decisions)]
    return kept


def by_class(plays: Iterable[Play]) -> List[Tuple[ObservationClass, List[Play]]]:
    found: Dict[ObservationClass, List[Play]] = {}
    for p in plays:
        found.setdefault(p.cls, []).append(p)
    return sorted(found.items())


def _uids(plays: Sequence[Play]) -> Tuple[int, ...]:
    return tuple(p.uid for p in plays)


def _alphabet(agent: str, declared: Sequence[str], chosen: Optional[Sequence[str]]) -> Tuple[str, ...]:
    acts = tuple(a for a in declared if chosen is None or a in chosen)
    if not acts:
        raise PreconditionError(f"agent {agent} has no actions to choose from")
    return acts


class GameTree:
    def __init__(
        self,
        ws: PossibleWorldSet,
        acts_a: Optional[Sequence[str]] = None,
        acts_b: Optional[Sequence[str]] = None,
        node_bound: int = DEFAULT_STRATEGY_BOUND,
        class_bound: int = DEFAULT_CLASS_BOUND,
        jobs: int = 1,
    ):
        m = ws.model
        self.ws = ws
        self.model = m
        self.acts_a = _alphabet("A", m.actions.a, acts_a)
        self.acts_b = _alphabet("B", m.actions.b, acts_b)
        self.node_bound = node_bound
        self.class_bound = class_bound
        self.cache = TruthCache()
        self.step = Transitions(m, self.cache)
        self.visited = 0
        self._uid = itertools.count()
        self._observed: Dict[State, Observation] = {}
        self._runs: Dict[int, Run] = {}
        self._compliant: Dict[int, bool] = {}
        self._holds: Dict[Tuple[int, int], bool] = {}
        self._queries: Dict[tuple, Query] = {}
        self._memo: Dict[tuple, List[Outcome]] = {}
        self._extends: Dict[int, Optional[Outcome]] = {}
        self.checks = [self._checks(g) for g in ws.groups]
        self.roots: List[List[Play]] = ordered_map(self._roots, range(len(ws.groups)), jobs)
        self.all_groups = (1 << len(ws.groups)) - 1
        logger.debug(
            f"GAME_TREE | groups={len(ws.groups)} | histories={sum(len(r) for r in self.roots)} "
            f"| acts_a={len(self.acts_a)} | acts_b={len(self.acts_b)}"
        )

    # =========================================================================
    # Plays
    # =========================================================================

    def _checks(self, group) -> List[Tuple[int, Formula]]:
        m = self.model
        out = [(m.now, f) for f in group.bodies + self.ws.facts]
        for pos, f in ((0, m.init),) + m.history:
            if pos + self.cache.depth(f) > m.now:
                out.append((pos, f))
        return out

    def observe(self, state: State) -> Observation:
        hit = self._observed.get(state)
        if hit is None:
            hit = self.model.observation(state)
            self._observed[state] = hit
        return hit

    def _roots(self, index: int) -> List[Play]:
        m = self.model
        unrolling = self.ws.unrolling(self.ws.groups[index])
        acts = sorted(m.actions.all)
        projection = [
            unrolling.value_var(v.name, x, t) for t in range(m.now + 1) for v in m.vars for x in v.domain
        ]
        projection += [unrolling.action_var(a, t) for t in range(m.now) for a in acts]
        models = enumerate_models(unrolling.cnf, projection, self.class_bound + 1)
        if len(models) > self.class_bound:
            raise CapacityError("histories", len(models), self.class_bound, "--class-bound")
        plays = []
        for valuation in models:
            states = [
                tuple(
                    next(x for x in v.domain if valuation[unrolling.value_var(v.name, x, t)])
                    for v in m.vars
                )
                for t in range(m.now + 1)
            ]
            positions = tuple(
                self.step.atoms(states[t])
                | {a for a in acts if valuation[unrolling.action_var(a, t)]}
                for t in range(m.now)
            )
            cls = tuple(self.observe(s) for s in states)
            plays.append((states, positions, cls))
        plays.sort(key=lambda e: (e[2], e[0], [sorted(p) for p in e[1]]))
        return [Play(index, positions, states[-1], cls, (), next(self._uid)) for states, positions, cls in plays]

    def advance(self, play: Play, a: str, b: str) -> Tuple[Play, ...]:
        """One child per Env action."""
        key = (a, b)
        hit = play.children.get(key)
        if hit is None:
            here = self.step.atoms(play.state)
            kids = []
            for e in self.model.actions.env:
                nxt = self.step(play.state, (a, b, e))
                kids.append(Play(
                    play.group,
                    play.positions + (here | {a, b, e},),
                    nxt,
                    play.cls + (self.observe(nxt),),
                    play.moves + (key,),
                    next(self._uid),
                ))
            hit = tuple(kids)
            play.children[key] = hit
        return hit

    def run(self, play: Play) -> Run:
        hit = self._runs.get(play.uid)
        if hit is None:
            hit = Run(play.positions + (self.step.atoms(play.state),))
            self._runs[play.uid] = hit
        return hit

    def compliant(self, play: Play) -> bool:
        hit = self._compliant.get(play.uid)
        if hit is None:
            run = self.run(play)
            hit = all(self.cache.evaluate(f, run, pos) for pos, f in self.checks[play.group])
            self._compliant[play.uid] = hit
        return hit

    def holds(self, play: Play, goal: Formula) -> bool:
        key = (play.uid, id(goal))
        hit = self._holds.get(key)
        if hit is None:
            hit = self.cache.evaluate(goal, self.run(play), self.model.now)
            self._holds[key] = hit
        return hit

    def chain(self, play: Play) -> Chain:
        """B's moves along ``play`` at the decision points it passes."""
        now = self.model.now
        return tuple(((now + i, play.cls[: now + i + 1]), b) for i, (_, b) in enumerate(play.moves))

    def tick(self) -> None:
        self.visited += 1
        if self.visited > self.node_bound:
            raise CapacityError("search nodes", self.visited, self.node_bound, "--strategy-bound")
        if self.visited % 1024 == 0:
            check_stop("game search")

    def walk(self, groups: int, a_table: Table, b_table: Optional[Table] = None) -> Iterable[Play]:
        """Leaves reached under ``a_table`` (and ``b_table`` if given), filling gaps with the first action."""
        last = self.model.last
        stack = [p for i in range(len(self.roots)) if groups >> i & 1 for p in reversed(self.roots[i])]
        while stack:
            p = stack.pop()
            if p.step == last:
                yield p
                continue
            point = (p.step, p.cls)
            a = a_table.setdefault(point, self.acts_a[0])
            bs = self.acts_b if b_table is None else (b_table.setdefault(point, self.acts_b[0]),)
            kids = [kid for b in bs for kid in self.advance(p, a, b)]
            stack.extend(reversed(kids))

    # =========================================================================
    # Cooperative search
    # =========================================================================

    def query(self, goals: Sequence[Formula], groups: int, forced: Chain = ()) -> Query:
        goals = tuple(goals)
        horizon = self.model.horizon
        for g in goals:
            depth = self.cache.depth(g)
            if depth > horizon:
                raise HorizonOverflowError(depth, horizon, "goal")
        key = (tuple(id(g) for g in goals), groups, forced)
        hit = self._queries.get(key)
        if hit is None:
            hit = Query(goals, groups, forced, len(self._queries))
            self._queries[key] = hit
            if forced:
                hit.free = self.query(goals, groups)
        return hit

    def search(self, q: Query) -> List[Outcome]:
        plays = [p for i, roots in enumerate(self.roots) if q.groups >> i & 1 for p in roots]
        result = [Outcome(0, q.full)]
        for cls, members in by_class(plays):
            result = _combine(result, self._cooperate(q, self.model.now, cls, members))
        return result

    def _cooperate(self, q: Query, t: int, cls: ObservationClass, plays: List[Play]) -> List[Outcome]:
        point = (t, cls)
        last = self.model.last
        if t == last or point not in q.forced:
            q = q.free
        key = (q.key, t, cls, _uids(plays))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self.tick()
        if t == last:
            result = [self._leaf(q, plays)]
        else:
            present = 0
            for p in plays:
                present |= 1 << p.group
            options = (q.forced[point],) if point in q.forced else self.acts_b
            result = []
            for a, b in itertools.product(self.acts_a, options):
                merged = [Outcome(0, q.full, ((point, (a, b)),))]
                kids = by_class(kid for p in plays for kid in self.advance(p, a, b))
                for child, members in kids:
                    merged = _combine(merged, self._cooperate(q, t + 1, child, members))
                best = [o for o in merged if o.covered == present and o.won == q.full]
                if best:
                    result = best[:1]
                    break
                result = pareto(result + merged)
        self._memo[key] = result
        return result

    def _leaf(self, q: Query, plays: Sequence[Play]) -> Outcome:
        covered, won = 0, q.full
        for p in plays:
            if not self.compliant(p):
                continue
            covered |= 1 << p.group
            for i, g in enumerate(q.goals):
                if won >> i & 1 and not self.holds(p, g):
                    won &= ~(1 << i)
        return Outcome(covered, won)

    def achievements(self, gs: GoalSet, groups: Optional[int] = None) -> List[Achievement]:
        """Weight-maximal goal subsets won cooperatively in all of ``groups``, one witness each."""
        groups = self.all_groups if groups is None else groups
        names = gs.names
        q = self.query([gs.formula(n) for n in names], groups)
        best = 0
        winners: Dict[frozenset, Outcome] = {}
        for o in self.search(q):
            if o.covered != groups:
                continue
            won = frozenset(n for i, n in enumerate(names) if o.won >> i & 1)
            weight, subsets = gs.best_subsets(won)
            if weight < best:
                continue
            if weight > best:
                best, winners = weight, {}
            for subset in subsets:
                winners.setdefault(subset, o)
        return [
            Achievement(s, best, (self.joint(winners[s]),))
            for s in sorted(winners, key=sorted)
        ]

    def joint(self, o: Outcome) -> JointStrategy:
        return JointStrategy(Strategy.from_table("A", o.table("A")), Strategy.from_table("B", o.table("B")))

    def extends(self, group: int, goals: Tuple[Formula, ...], chain: Chain) -> Optional[Outcome]:
        """Cooperative witness winning ``goals`` in ``group`` with B playing ``chain``, if any."""
        q = self.query(goals, 1 << group, chain)
        if q.key in self._extends:
            return self._extends[q.key]
        found = next(
            (o for o in self.search(q) if o.covered == q.groups and o.won == q.full),
            None,
        )
        self._extends[q.key] = found
        return found


@dataclass(frozen=True)
class Blame:
    """A bad leaf, the B goal set it threatens and the cooperative witness for that set."""

    play: Play
    threat: int
    witness: Outcome


class SurvivalCheck:
    """Does some A strategy win ``goals_a`` with B's help and stay safe against every believed B?

    ``threats[g]`` lists B's maximal goal sets in group ``g``.
    """

    def __init__(self, tree: GameTree, goals_a: Sequence[Formula], threats: Sequence[Sequence[Tuple[Formula, ...]]]):
        self.tree = tree
        self.goals_a = tuple(goals_a)
        self.threats = threats
        tree.query(self.goals_a, tree.all_groups)
        for group, sets in enumerate(threats):
            for goals in sets:
                tree.query(goals, 1 << group)
        self._bad: Dict[int, Optional[Blame]] = {}
        self._safe: Dict[tuple, bool] = {}
        self._guard: Dict[tuple, List[Tuple[int, tuple]]] = {}

    def bad(self, play: Play) -> Optional[Blame]:
        if play.uid in self._bad:
            return self._bad[play.uid]
        tree = self.tree
        found = None
        if tree.compliant(play):
            fine_a = all(tree.holds(play, f) for f in self.goals_a)
            for k, goals in enumerate(self.threats[play.group]):
                if fine_a and all(tree.holds(play, f) for f in goals):
                    continue
                witness = tree.extends(play.group, goals, tree.chain(play))
                if witness is not None:
                    found = Blame(play, k, witness)
                    break
        self._bad[play.uid] = found
        return found

    def _kids(self, plays: Sequence[Play], a: str) -> List[Tuple[ObservationClass, List[Play]]]:
        return by_class(kid for p in plays for b in self.tree.acts_b for kid in self.tree.advance(p, a, b))

    def safe(self, t: int, cls: ObservationClass, plays: List[Play]) -> bool:
        key = (t, cls, _uids(plays))
        hit = self._safe.get(key)
        if hit is not None:
            return hit
        self.tree.tick()
        if t == self.tree.model.last:
            hit = not any(self.bad(p) for p in plays)
        else:
            hit = any(
                all(self.safe(t + 1, c, ms) for c, ms in self._kids(plays, a))
                for a in self.tree.acts_a
            )
        self._safe[key] = hit
        return hit

    def _masks(self, t: int, cls: ObservationClass, plays: List[Play], coop: List[Play]) -> List[Tuple[int, tuple]]:
        """Maximal group masks the helped plays can cover, with A's decisions; empty when A cannot stay safe."""
        tree = self.tree
        key = (t, cls, _uids(plays), _uids(coop))
        hit = self._guard.get(key)
        if hit is not None:
            return hit
        tree.tick()
        if t == tree.model.last:
            hit = self._leaf(plays, coop)
            self._guard[key] = hit
            return hit
        point = (t, cls)
        target = 0
        for p in coop:
            target |= 1 << p.group
        hit = []
        for a in tree.acts_a:
            kids = self._kids(plays, a)
            if not all(self.safe(t + 1, c, ms) for c, ms in kids):
                continue
            for beta in (tree.acts_b if coop else (None,)):
                helped = {kid.uid for p in coop for kid in tree.advance(p, a, beta)} if beta else set()
                merged: List[Tuple[int, tuple]] = [(0, ((point, a),))]
                for c, ms in kids:
                    sub = self._masks(t + 1, c, ms, [p for p in ms if p.uid in helped])
                    if not sub:
                        merged = []
                        break
                    merged = _maximal((x | y, dx + dy) for x, dx in merged for y, dy in sub)
                done = [(x, d) for x, d in merged if x == target]
                if done:
                    self._guard[key] = done[:1]
                    return done[:1]
                hit = _maximal(hit + merged)
        self._guard[key] = hit
        return hit

    def _leaf(self, plays: Sequence[Play], coop: Sequence[Play]) -> List[Tuple[int, tuple]]:
        if any(self.bad(p) for p in plays):
            return []
        covered = 0
        for p in coop:
            if not self.tree.compliant(p):
                continue
            if not all(self.tree.holds(p, f) for f in self.goals_a):
                return []
            covered |= 1 << p.group
        return [(covered, ())]

    def survivor(self) -> Optional[Table]:
        """A's decisions of a surviving strategy, or None."""
        tree = self.tree
        plays = [p for roots in tree.roots for p in roots]
        result: List[Tuple[int, tuple]] = [(0, ())]
        for cls, members in by_class(plays):
            sub = self._masks(tree.model.now, cls, members, members)
            if not sub:
                return None
            result = _maximal((x | y, dx + dy) for x, dx in result for y, dy in sub)
        for covered, decisions in result:
            if covered == tree.all_groups:
                return dict(decisions)
        return None

    def first_bad(self, a_table: Table, group: int) -> Optional[Blame]:
        """First bad leaf of ``group`` reached under ``a_table`` against any B and Env."""
        for play in self.tree.walk(1 << group, a_table):
            blame = self.bad(play)
            if blame is not None:
                return blame
        return None
