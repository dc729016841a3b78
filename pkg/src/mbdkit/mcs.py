"""Extraction and enumeration of minimal correction subsets.

The extractor runs the classic linear search: get a model of the hard part,
seed the satisfied set with the soft clauses it already satisfies, then test
the falsified ones one by one in ascending index order.  Each soft clause
gets a fresh selector variable so the whole enumeration runs incrementally
on one solver, with blocking clauses over selectors.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, FrozenSet, Optional, Tuple

from .formula import Assignment, WcnfInstance
from .solver import CdclSolver


class BudgetExceeded(Exception):
    """Internal signal: the enumeration deadline expired mid-extraction."""


@dataclass(frozen=True)
class McsResult:
    """One minimal correction subset with a witness model of the complement."""

    mcs: FrozenSet[int]
    model: Assignment


class McsSession:
    """One enumeration session over a partial MaxSAT instance.

    The session owns its solver: blocking clauses accumulate, so a session
    must not be shared across unrelated queries.
    """

    def __init__(self, instance: WcnfInstance):
        self.instance = instance
        self._num_orig_vars = instance.num_vars
        self._solver = CdclSolver(num_vars=self._num_orig_vars)
        for clause in instance.hard.clauses:
            self._solver.add_clause(clause)
        self._selectors = []
        next_var = self._num_orig_vars
        for clause in instance.soft:
            next_var += 1
            self._selectors.append(next_var)
            self._solver.add_clause(list(clause) + [-next_var])
        self.exhausted = False

    @property
    def sat_calls(self) -> int:
        return self._solver.stats.solves

    def extract(self, deadline: Optional[float] = None) -> Optional[McsResult]:
        """One linear-search pass; None once the hard part is unsatisfiable."""
        solver = self._solver
        soft = self.instance.soft
        selectors = self._selectors
        if not solver.solve([]):
            self.exhausted = True
            return None
        in_mcs = []
        pending = []
        assumed = []
        for i, clause in enumerate(soft):
            if any(solver.model_value(l) for l in clause):
                assumed.append(selectors[i])
            else:
                pending.append(i)
        model_current = True
        for i in pending:
            if model_current and any(solver.model_value(l) for l in soft[i]):
                # the adopted model already satisfies it, no solver call needed
                assumed.append(selectors[i])
                continue
            if deadline is not None and time.perf_counter() > deadline:
                raise BudgetExceeded
            if solver.solve(assumed + [selectors[i]]):
                assumed.append(selectors[i])
                model_current = True
            else:
                in_mcs.append(i)
                model_current = False
        if not model_current:
            solver.solve(assumed)  # guaranteed satisfiable: monotone growth
        model = solver.get_model(self._num_orig_vars)
        return McsResult(frozenset(in_mcs), model)

    def block(self, mcs: FrozenSet[int]) -> None:
        """Forbid mcs and all its supersets in later extractions."""
        self._solver.add_clause([self._selectors[i] for i in mcs])

    def enumerate(
        self,
        limit: Optional[int] = None,
        sink: Optional[Callable[[McsResult], None]] = None,
        deadline: Optional[float] = None,
    ) -> Tuple[int, bool]:
        """Emit distinct correction subsets until exhaustion, limit or deadline.

        Returns (count emitted, exhausted); exhausted is True iff blocking
        reached hard-unsat before the limit.
        """
        count = 0
        while limit is None or count < limit:
            if deadline is not None and time.perf_counter() > deadline:
                return count, False
            try:
                result = self.extract(deadline)
            except BudgetExceeded:
                return count, False
            if result is None:
                return count, True
            if sink is not None:
                sink(result)
            self.block(result.mcs)
            count += 1
        return count, False


def extract_mcs(instance: WcnfInstance) -> Optional[McsResult]:
    """First minimal correction subset of the instance, or None if hard-unsat."""
    return McsSession(instance).extract()


def enumerate_mcs(
    instance: WcnfInstance,
    limit: Optional[int] = None,
    sink: Optional[Callable[[McsResult], None]] = None,
    deadline: Optional[float] = None,
) -> Tuple[int, bool]:
    return McsSession(instance).enumerate(limit, sink, deadline)
