"""
Incremental CDCL solver.

Two watched literals, first-UIP learning, activity branching with phase
saving, Luby restarts. Assumptions are decided first, one per decision
level; when one is falsified the solver reports the subset of assumptions
that forced it (the core). Clauses may be added between solve calls.

Policy:
- Deterministic for a fixed clause order, assumption order and seed
- One instance per thread; never share an instance between workers
"""

from __future__ import annotations

import heapq
import random
from typing import List, Optional, Sequence, Tuple

from ..errors import InputError


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    if i < 1:
        raise ValueError("luby index starts at 1")
    while True:
        k = i.bit_length()
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i = i - (1 << (k - 1)) + 1


def _code(lit: int) -> int:
    return 2 * lit if lit > 0 else -2 * lit + 1


class CdclSolver:
    def __init__(
        self,
        num_vars: int = 0,
        seed: int = 0,
        restart_base: int = 100,
        var_decay: float = 0.95,
    ):
        if restart_base < 1:
            raise ValueError("restart_base must be >= 1")
        if not 0.0 < var_decay < 1.0:
            raise ValueError("var_decay must be in (0, 1)")
        self._rng = random.Random(seed)
        self._restart_base = restart_base
        self._decay = var_decay
        self._bump = 1.0

        self.num_vars = 0
        self._value: List[int] = [0]
        self._level: List[int] = [0]
        self._reason: List[int] = [-1]
        self._activity: List[float] = [0.0]
        self._phase: List[bool] = [False]
        self._seen: List[bool] = [False]
        self._watches: List[List[int]] = [[], []]
        self._clauses: List[List[int]] = []
        self._heap: List[Tuple[float, int]] = []

        self._trail: List[int] = []
        self._trail_lim: List[int] = []
        self._qhead = 0
        self._ok = True

        self.conflicts = 0
        self.decisions = 0
        self.model: Optional[List[int]] = None
        self.core: Optional[List[int]] = None

        self.ensure_vars(num_vars)

    # =========================================================================
    # Problem construction
    # =========================================================================

    def ensure_vars(self, n: int) -> None:
        for v in range(self.num_vars + 1, n + 1):
            act = self._rng.random() * 1e-6
            self._value.append(0)
            self._level.append(0)
            self._reason.append(-1)
            self._activity.append(act)
            self._phase.append(False)
            self._seen.append(False)
            self._watches.append([])
            self._watches.append([])
            heapq.heappush(self._heap, (-act, v))
        self.num_vars = max(self.num_vars, n)

    def add_clause(self, lits: Sequence[int]) -> bool:
        """Add a clause; returns False once the clause set is unsatisfiable."""
        for lit in lits:
            if isinstance(lit, bool) or not isinstance(lit, int) or lit == 0:
                raise InputError(f"malformed literal {lit!r}")
        if not self._ok:
            return False
        self._cancel_until(0)
        self.ensure_vars(max((abs(lit) for lit in lits), default=0))

        seen = set()
        clause: List[int] = []
        for lit in lits:
            if -lit in seen:
                return True
            if lit in seen:
                continue
            val = self._lit_value(lit)
            if val == 1:
                return True
            if val == -1:
                continue
            seen.add(lit)
            clause.append(lit)

        if not clause:
            self._ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], -1)
            if self._propagate() is not None:
                self._ok = False
            return self._ok
        self._attach(clause)
        return True

    # =========================================================================
    # Search
    # =========================================================================

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        assumptions = list(assumptions)
        for lit in assumptions:
            if isinstance(lit, bool) or not isinstance(lit, int) or lit == 0:
                raise InputError(f"malformed assumption literal {lit!r}")
        self.ensure_vars(max((abs(lit) for lit in assumptions), default=0))
        self.model = None
        self.core = None
        if not self._ok:
            self.core = []
            return False
        self._cancel_until(0)

        restarts = 0
        budget = self._restart_base * luby(1)
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self._trail_lim:
                    self._ok = False
                    self.core = []
                    return False
                learnt, back_level = self._analyze(confl)
                self._cancel_until(back_level)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                self._bump /= self._decay
                continue

            if since_restart >= budget:
                restarts += 1
                budget = self._restart_base * luby(restarts + 1)
                since_restart = 0
                self._cancel_until(0)
                continue

            level = len(self._trail_lim)
            if level < len(assumptions):
                p = assumptions[level]
                val = self._lit_value(p)
                if val == -1:
                    failed = set(self._analyze_final(p))
                    self.core = list(dict.fromkeys(a for a in assumptions if a in failed))
                    self._cancel_until(0)
                    return False
                self._trail_lim.append(len(self._trail))
                if val == 0:
                    self._enqueue(p, -1)
                continue

            var = self._pick_branch()
            if var == 0:
                self.model = [v if self._value[v] == 1 else -v for v in range(1, self.num_vars + 1)]
                self._cancel_until(0)
                return True
            self.decisions += 1
            self._trail_lim.append(len(self._trail))
            self._enqueue(var if self._phase[var] else -var, -1)

    # =========================================================================
    # Internals
    # =========================================================================

    def _lit_value(self, lit: int) -> int:
        val = self._value[abs(lit)]
        return val if lit > 0 else -val

    def _attach(self, clause: List[int]) -> int:
        idx = len(self._clauses)
        self._clauses.append(clause)
        self._watches[_code(clause[0])].append(idx)
        self._watches[_code(clause[1])].append(idx)
        return idx

    def _enqueue(self, lit: int, reason: int) -> None:
        v = abs(lit)
        self._value[v] = 1 if lit > 0 else -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _propagate(self) -> Optional[int]:
        clauses = self._clauses
        watches = self._watches
        value = self._value
        while self._qhead < len(self._trail):
            p = self._trail[self._qhead]
            self._qhead += 1
            false_lit = -p
            ws = watches[_code(false_lit)]
            i = j = 0
            end = len(ws)
            while i < end:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[abs(first)]
                if (fv if first > 0 else -fv) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    lit = c[k]
                    lv = value[abs(lit)]
                    if (lv if lit > 0 else -lv) != -1:
                        c[1], c[k] = lit, c[1]
                        watches[_code(lit)].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = ci
                j += 1
                if (fv if first > 0 else -fv) == -1:
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self._qhead = len(self._trail)
                    return ci
                self._enqueue(first, ci)
            del ws[j:]
        return None

    def _analyze(self, confl: int) -> Tuple[List[int], int]:
        seen = self._seen
        level = self._level
        trail = self._trail
        current = len(self._trail_lim)
        learnt = [0]
        counter = 0
        p = 0
        idx = len(trail) - 1
        clause = self._clauses[confl]
        while True:
            for q in (clause if p == 0 else clause[1:]):
                v = abs(q)
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    self._bump_var(v)
                    if level[v] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[abs(p)] = False
            counter -= 1
            if counter <= 0:
                break
            clause = self._clauses[self._reason[abs(p)]]
        learnt[0] = -p
        for q in learnt[1:]:
            seen[abs(q)] = False

        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for i in range(2, len(learnt)):
            if level[abs(learnt[i])] > level[abs(learnt[best])]:
                best = i
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[abs(learnt[1])]

    def _analyze_final(self, p: int) -> List[int]:
        """Assumptions responsible for assumption ``p`` being false."""
        core = [p]
        root = abs(p)
        if self._level[root] == 0:
            return core
        seen = self._seen
        seen[root] = True
        for i in range(len(self._trail) - 1, self._trail_lim[0] - 1, -1):
            x = self._trail[i]
            v = abs(x)
            if not seen[v]:
                continue
            reason = self._reason[v]
            if reason == -1:
                core.append(x)
            else:
                for q in self._clauses[reason][1:]:
                    if self._level[abs(q)] > 0:
                        seen[abs(q)] = True
            seen[v] = False
        seen[root] = False
        return core

    def _cancel_until(self, level: int) -> None:
        if len(self._trail_lim) <= level:
            return
        stop = self._trail_lim[level]
        for i in range(len(self._trail) - 1, stop - 1, -1):
            lit = self._trail[i]
            v = abs(lit)
            self._phase[v] = lit > 0
            self._value[v] = 0
            self._reason[v] = -1
            heapq.heappush(self._heap, (-self._activity[v], v))
        del self._trail[stop:]
        del self._trail_lim[level:]
        self._qhead = len(self._trail)
        if len(self._heap) > 4 * self.num_vars + 1024:
            self._rebuild_heap()

    def _bump_var(self, v: int) -> None:
        self._activity[v] += self._bump
        if self._activity[v] > 1e100:
            self._activity = [a * 1e-100 for a in self._activity]
            self._bump *= 1e-100
            self._rebuild_heap()
        elif self._value[v] == 0:
            heapq.heappush(self._heap, (-self._activity[v], v))

    def _rebuild_heap(self) -> None:
        self._heap = [
            (-self._activity[v], v) for v in range(1, self.num_vars + 1) if self._value[v] == 0
        ]
        heapq.heapify(self._heap)

    def _pick_branch(self) -> int:
        heap = self._heap
        while heap:
            neg_act, v = heapq.heappop(heap)
            if self._value[v] == 0 and -neg_act == self._activity[v]:
                return v
        return 0
