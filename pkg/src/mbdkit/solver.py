"""Incremental CDCL SAT solver with assumptions and unsat cores.

The solver follows the classic two-watched-literal / first-UIP design.
Assumptions are handled solver-internally: each assumption literal gets its
own decision level, so one clause database serves thousands of consistency
queries.  Consecutive calls that share an assumption prefix reuse the
corresponding part of the trail instead of re-propagating it.

Externally, literals are DIMACS-style signed integers.  Internally a literal
is ``2*(var-1)`` (positive) or ``2*(var-1)+1`` (negative).
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from .formula import Assignment, MalformedLiteralError

_VAR_RESCALE = 1e100
_VAR_DECAY = 1 / 0.95
_CLA_DECAY = 1 / 0.999
_RESTART_BASE = 100


def _luby(x: int) -> int:
    """The x-th element (1-based) of the Luby restart sequence."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return 1 << seq


@dataclass
class SolverStats:
    solves: int = 0
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    learned: int = 0
    reductions: int = 0


@dataclass(frozen=True)
class SatResult:
    """Outcome of one solve call: a total model, or a core over assumptions."""

    satisfiable: bool
    model: Optional[Assignment] = None
    core: Optional[FrozenSet[int]] = None


class CdclSolver:
    """A CDCL solver usable incrementally under assumption literals."""

    def __init__(self, clauses: Iterable[Sequence[int]] = (), num_vars: int = 0):
        self.stats = SolverStats()
        self._nvars = 0
        self._assign: List[int] = []          # -1 unassigned, else 0/1
        self._level: List[int] = []
        self._reason: List[Optional[list]] = []
        self._phase: List[int] = []           # saved polarity, default 0 (False)
        self._activity: List[float] = []
        self._occurs: List[int] = []          # 1 iff var occurs in some clause
        self._in_heap: List[int] = []         # 1 iff var has a live heap entry
        self._seen: List[int] = []            # scratch for conflict analysis
        self._watches: List[list] = []        # indexed by internal literal
        self._trail: List[int] = []
        self._trail_lim: List[int] = []
        self._heap: List[tuple] = []
        self._qhead = 0
        self._assump_levels: List[int] = []   # assumption decisions still on trail
        self._clauses: List[list] = []
        self._learnts: List[list] = []
        self._cla_act: Dict[int, float] = {}  # id(clause) -> activity
        self._var_inc = 1.0
        self._cla_inc = 1.0
        self._max_learnts = 4000
        self._ok = True
        self._model_valid = False
        self._core: Optional[FrozenSet[int]] = None
        if num_vars:
            self._ensure_var(num_vars)
        for clause in clauses:
            self.add_clause(clause)

    # ------------------------------------------------------------------
    # bookkeeping

    @property
    def num_vars(self) -> int:
        return self._nvars

    def _ensure_var(self, var: int) -> None:
        while self._nvars < var:
            self._assign.append(-1)
            self._level.append(0)
            self._reason.append(None)
            self._phase.append(0)
            self._activity.append(0.0)
            self._occurs.append(0)
            self._in_heap.append(0)
            self._seen.append(0)
            self._watches.append([])
            self._watches.append([])
            self._nvars += 1

    def _to_internal(self, ext: int) -> int:
        if ext == 0:
            raise MalformedLiteralError("literal 0 is reserved as a terminator")
        var = ext if ext > 0 else -ext
        self._ensure_var(var)
        return 2 * (var - 1) + (1 if ext < 0 else 0)

    @staticmethod
    def _to_external(p: int) -> int:
        var = (p >> 1) + 1
        return -var if p & 1 else var

    def set_phase(self, var: int, value: bool) -> None:
        """Suggest the polarity a free variable is first tried with."""
        self._ensure_var(var)
        self._phase[var - 1] = 1 if value else 0

    def _bump_var(self, v: int) -> None:
        # Heap priorities may go stale after a bump; that only perturbs the
        # decision order, never correctness, and saves duplicate entries.
        act = self._activity[v] + self._var_inc
        self._activity[v] = act
        if act > _VAR_RESCALE:
            scale = 1.0 / _VAR_RESCALE
            for i in range(self._nvars):
                self._activity[i] *= scale
            self._var_inc *= scale
            heap = self._heap
            heap.clear()  # in place: solve() holds an alias
            assign = self._assign
            occurs = self._occurs
            activity = self._activity
            in_heap = self._in_heap
            for i in range(self._nvars):
                if assign[i] == -1 and occurs[i]:
                    in_heap[i] = 1
                    heappush(heap, (-activity[i], i))
                else:
                    in_heap[i] = 0
        elif self._assign[v] == -1 and self._occurs[v] and not self._in_heap[v]:
            self._in_heap[v] = 1
            heappush(self._heap, (-act, v))

    def _enqueue(self, p: int, reason: Optional[list]) -> None:
        v = p >> 1
        self._assign[v] = (p & 1) ^ 1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(p)

    def _cancel_until(self, lvl: int) -> None:
        if len(self._trail_lim) <= lvl:
            return
        assign = self._assign
        phase = self._phase
        heap = self._heap
        activity = self._activity
        occurs = self._occurs
        in_heap = self._in_heap
        reason = self._reason
        bound = self._trail_lim[lvl]
        for i in range(len(self._trail) - 1, bound - 1, -1):
            p = self._trail[i]
            v = p >> 1
            phase[v] = assign[v]
            assign[v] = -1
            reason[v] = None
            if occurs[v] and not in_heap[v]:
                in_heap[v] = 1
                heappush(heap, (-activity[v], v))
        del self._trail[bound:]
        del self._trail_lim[lvl:]
        if len(self._assump_levels) > lvl:
            del self._assump_levels[lvl:]
        # The retained prefix is propagation-closed (watch invariant), so no
        # rescan is needed.
        self._qhead = len(self._trail)

    # ------------------------------------------------------------------
    # clause management

    def add_clause(self, lits: Iterable[int]) -> None:
        """Add a clause permanently; variables are auto-extended."""
        self._model_valid = False
        unique = set()
        for ext in lits:
            unique.add(self._to_internal(ext))
        for p in unique:
            if p ^ 1 in unique:
                return  # tautology, never constrains anything
        self._cancel_until(0)
        if not self._ok:
            return
        assign = self._assign
        simplified = []
        for p in sorted(unique):
            a = assign[p >> 1]
            if a == -1:
                simplified.append(p)
            elif a == (p & 1) ^ 1:
                return  # satisfied at root level, permanently entailed
        if not simplified:
            self._ok = False
            return
        for p in simplified:
            v = p >> 1
            if not self._occurs[v]:
                self._occurs[v] = 1
                if self._assign[v] == -1 and not self._in_heap[v]:
                    self._in_heap[v] = 1
                    heappush(self._heap, (-self._activity[v], v))
        if len(simplified) == 1:
            self._enqueue(simplified[0], None)
            if self._propagate() is not None:
                self._ok = False
            return
        clause = simplified
        self._clauses.append(clause)
        self._watches[clause[0]].append(clause)
        self._watches[clause[1]].append(clause)

    def _attach_learnt(self, clause: list) -> None:
        self._learnts.append(clause)
        self._cla_act[id(clause)] = self._cla_inc
        self._watches[clause[0]].append(clause)
        self._watches[clause[1]].append(clause)
        self.stats.learned += 1
        for p in clause:
            v = p >> 1
            if not self._occurs[v]:
                self._occurs[v] = 1
                if self._assign[v] == -1 and not self._in_heap[v]:
                    self._in_heap[v] = 1
                    heappush(self._heap, (-self._activity[v], v))

    def _reduce_db(self) -> None:
        """Drop the low-activity half of the learnt clauses (root level only)."""
        locked = set()
        for r in self._reason:
            if r is not None:
                locked.add(id(r))
        ranked = sorted(
            self._learnts,
            key=lambda c: (id(c) in locked, len(c) <= 2, self._cla_act.get(id(c), 0.0)),
        )
        drop = len(ranked) // 2
        keep = []
        for idx, clause in enumerate(ranked):
            if idx < drop and id(clause) not in locked and len(clause) > 2:
                self._cla_act.pop(id(clause), None)
                clause.clear()  # empty list = deleted sentinel, purged lazily
            else:
                keep.append(clause)
        self._learnts = keep
        self.stats.reductions += 1
        self._max_learnts += 1000

    # ------------------------------------------------------------------
    # search

    def _propagate(self) -> Optional[list]:
        trail = self._trail
        watches = self._watches
        assign = self._assign
        level = self._level
        reason = self._reason
        nlevel = len(self._trail_lim)
        qhead = self._qhead
        nprops = 0
        confl = None
        while qhead < len(trail):
            p = trail[qhead]
            qhead += 1
            nprops += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if not c:
                    continue  # deleted clause
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                fa = assign[first >> 1]
                if fa == (first & 1) ^ 1:
                    ws[j] = c
                    j += 1
                    continue
                for idx in range(2, len(c)):
                    lk = c[idx]
                    if assign[lk >> 1] != lk & 1:
                        c[1] = lk
                        c[idx] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if fa == first & 1:
                        while i < end:  # conflict: keep the rest of the list
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        confl = c
                    else:
                        v = first >> 1
                        assign[v] = (first & 1) ^ 1
                        level[v] = nlevel
                        reason[v] = c
                        trail.append(first)
            del ws[j:]
            if confl is not None:
                qhead = len(trail)
                break
        self._qhead = qhead
        self.stats.propagations += nprops
        return confl

    def _analyze(self, confl: list) -> tuple:
        """First-UIP conflict analysis; returns (learnt clause, backtrack level)."""
        learnt = [0]
        seen = self._seen
        trail = self._trail
        level = self._level
        reason = self._reason
        cur = len(self._trail_lim)
        counter = 0
        index = len(trail) - 1
        c = confl
        first_pass = True
        while True:
            if id(c) in self._cla_act:
                act = self._cla_act[id(c)] + self._cla_inc
                self._cla_act[id(c)] = act
                if act > _VAR_RESCALE:
                    scale = 1.0 / _VAR_RESCALE
                    for key in self._cla_act:
                        self._cla_act[key] *= scale
                    self._cla_inc *= scale
            for q in c if first_pass else c[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump_var(v)
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            first_pass = False
            while not seen[trail[index] >> 1]:
                index -= 1
            pl = trail[index]
            v = pl >> 1
            index -= 1
            seen[v] = 0
            counter -= 1
            if counter == 0:
                learnt[0] = pl ^ 1
                break
            c = reason[v]
        for q in learnt[1:]:
            seen[q >> 1] = 0
        if len(learnt) == 1:
            bt = 0
        else:
            max_i = 1
            max_lvl = level[learnt[1] >> 1]
            for i in range(2, len(learnt)):
                lvl = level[learnt[i] >> 1]
                if lvl > max_lvl:
                    max_lvl = lvl
                    max_i = i
            learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
            bt = max_lvl
        return learnt, bt

    def _analyze_final(self, p: int) -> FrozenSet[int]:
        """Subset of the assumptions that forces assumption ``p`` false."""
        core = {p}
        if not self._trail_lim:
            return frozenset(self._to_external(q) for q in core)
        seen = self._seen
        level = self._level
        reason = self._reason
        trail = self._trail
        seen[p >> 1] = 1
        for i in range(len(trail) - 1, self._trail_lim[0] - 1, -1):
            q = trail[i]
            v = q >> 1
            if seen[v]:
                r = reason[v]
                if r is None:
                    core.add(q)  # decisions here are always assumptions
                else:
                    for l in r:
                        u = l >> 1
                        if level[u] > 0:
                            seen[u] = 1
                seen[v] = 0
        seen[p >> 1] = 0
        return frozenset(self._to_external(q) for q in core)

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        """Solve under the given assumption literals.

        True: ``model_value``/``get_model`` expose a total model satisfying
        every clause and every assumption.  False: ``get_core`` exposes a
        subset of the assumptions that is jointly unsatisfiable with the
        clauses (empty if the clauses alone are unsatisfiable).
        """
        self.stats.solves += 1
        self._model_valid = False
        self._core = None
        if not self._ok:
            self._core = frozenset()
            return False
        if assumptions:
            if 0 in assumptions:
                raise MalformedLiteralError("literal 0 is reserved as a terminator")
            hi, lo = max(assumptions), min(assumptions)
            need = hi if hi > -lo else -lo
            if need > self._nvars:
                self._ensure_var(need)
            assumps = [e + e - 2 if e > 0 else -e - e - 1 for e in assumptions]
        else:
            assumps = []

        keep = 0
        established = self._assump_levels
        limit = min(len(established), len(assumps))
        while keep < limit and established[keep] == assumps[keep]:
            keep += 1
        self._cancel_until(keep)

        if not self._trail_lim and self._propagate() is not None:
            self._ok = False
            self._core = frozenset()
            return False

        assign = self._assign
        level = self._level
        reason = self._reason
        trail = self._trail
        trail_lim = self._trail_lim
        watches = self._watches
        heap = self._heap
        occurs = self._occurs
        in_heap = self._in_heap
        phase = self._phase
        n_assumps = len(assumps)
        restart_count = 0
        budget = _RESTART_BASE * _luby(0)
        conflicts_here = 0
        confl = self._propagate() if self._qhead < len(trail) else None

        while True:
            if confl is not None:
                self.stats.conflicts += 1
                conflicts_here += 1
                if not trail_lim:
                    self._ok = False
                    self._core = frozenset()
                    return False
                learnt, bt = self._analyze(confl)
                confl = None
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._attach_learnt(learnt)
                    self._enqueue(learnt[0], learnt)
                self._var_inc *= _VAR_DECAY
                self._cla_inc *= _CLA_DECAY
                confl = self._propagate()
                continue

            if conflicts_here >= budget:
                restart_count += 1
                budget = _RESTART_BASE * _luby(restart_count)
                conflicts_here = 0
                if len(self._learnts) >= self._max_learnts:
                    self._cancel_until(0)
                    self._reduce_db()
                else:
                    self._cancel_until(len(self._assump_levels))
                confl = self._propagate() if self._qhead < len(trail) else None
                continue

            dl = len(trail_lim)
            while dl < n_assumps:
                p = assumps[dl]
                a = assign[p >> 1]
                if a == (p & 1) ^ 1:
                    trail_lim.append(len(trail))  # implied: empty level
                    established.append(p)
                    dl += 1
                elif a == p & 1:
                    self._core = self._analyze_final(p)
                    return False
                else:
                    trail_lim.append(len(trail))
                    established.append(p)
                    v = p >> 1
                    assign[v] = (p & 1) ^ 1
                    level[v] = dl + 1
                    reason[v] = None
                    trail.append(p)
                    dl += 1
                    if watches[p ^ 1]:
                        confl = self._propagate()
                        if confl is not None:
                            break
                    else:
                        self._qhead += 1
            if confl is not None:
                continue

            while True:
                p = -1
                while heap:
                    v = heappop(heap)[1]
                    in_heap[v] = 0
                    if assign[v] == -1 and occurs[v]:
                        p = v + v + (phase[v] ^ 1)
                        break
                if p == -1:
                    self._model_valid = True
                    return True
                self.stats.decisions += 1
                trail_lim.append(len(trail))
                v = p >> 1
                assign[v] = (p & 1) ^ 1
                level[v] = len(trail_lim)
                reason[v] = None
                trail.append(p)
                if watches[p ^ 1]:
                    confl = self._propagate()
                    if confl is not None:
                        break
                else:
                    self._qhead += 1

    # ------------------------------------------------------------------
    # results

    def model_value(self, ext: int) -> bool:
        """Truth value of a literal in the current model (after SAT)."""
        if not self._model_valid:
            raise RuntimeError("no model available; last solve was not SAT")
        var = abs(ext)
        if var > self._nvars:
            value = False
        else:
            a = self._assign[var - 1]
            value = bool(a) if a != -1 else bool(self._phase[var - 1])
        return value if ext > 0 else not value

    def get_model(self, num_vars: Optional[int] = None) -> Assignment:
        """Total assignment over 1..num_vars from the last SAT answer."""
        if not self._model_valid:
            raise RuntimeError("no model available; last solve was not SAT")
        n = num_vars if num_vars is not None else self._nvars
        model: Assignment = {}
        assign = self._assign
        phase = self._phase
        for var in range(1, n + 1):
            if var <= self._nvars:
                a = assign[var - 1]
                model[var] = bool(a) if a != -1 else bool(phase[var - 1])
            else:
                model[var] = False
        return model

    def get_core(self) -> FrozenSet[int]:
        """Assumption subset from the last UNSAT answer."""
        if self._core is None:
            raise RuntimeError("no core available; last solve was not UNSAT")
        return self._core

    def solve_result(self, assumptions: Sequence[int] = ()) -> SatResult:
        """Solve and package the outcome per the result contract."""
        if self.solve(assumptions):
            return SatResult(True, model=self.get_model())
        return SatResult(False, core=self.get_core())
