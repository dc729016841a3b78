"""Minimal hitting sets over a growing collection of explanations.

Each component gets one pick variable.  An explanation contributes the
covering clause "pick at least one of its components"; a reported diagnosis
is blocked by the clause "reject at least one of its components", which
excludes the set and all its supersets.  Subset-minimal answers come from a
model of the incremental solver followed by a deletion scan; cardinality-
minimal answers from an iterative bound with a sequential-counter encoding
rebuilt per bound.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from .solver import CdclSolver


class NoDiagnosisError(RuntimeError):
    """An empty explanation: some observation cannot be fixed at all."""


def encode_at_most(solver: CdclSolver, lits: Sequence[int], bound: int) -> None:
    """Sequential-counter encoding of sum(lits) <= bound, appended to solver."""
    n = len(lits)
    if bound >= n:
        return
    if bound == 0:
        for l in lits:
            solver.add_clause([-l])
        return
    base = solver.num_vars

    def s(i: int, j: int) -> int:
        # counter var: at least j+1 of the first i+1 lits are true
        return base + i * bound + j + 1

    solver.add_clause([-lits[0], s(0, 0)])
    for j in range(1, bound):
        solver.add_clause([-s(0, j)])
    for i in range(1, n):
        solver.add_clause([-lits[i], s(i, 0)])
        solver.add_clause([-s(i - 1, 0), s(i, 0)])
        for j in range(1, bound):
            solver.add_clause([-lits[i], -s(i - 1, j - 1), s(i, j)])
            solver.add_clause([-s(i - 1, j), s(i, j)])
        solver.add_clause([-lits[i], -s(i - 1, bound - 1)])


class ExplanationStore:
    """The explanation collection plus the solver that answers MinHS queries."""

    def __init__(self, universe: Sequence[int]):
        self.universe = list(universe)
        self.sets: List[FrozenSet[int]] = []
        self.blocked: List[FrozenSet[int]] = []
        self._members = set(universe)
        self._seen_sets: set = set()
        self._pick: Dict[int, int] = {c: i + 1 for i, c in enumerate(self.universe)}
        self._solver = CdclSolver(num_vars=len(self.universe))
        for v in self._pick.values():
            # all-picked is always a (non-minimal) hitting set; the deletion
            # scan prunes it, so prefer conflict-free all-true models
            self._solver.set_phase(v, True)
        self._sets_with: Dict[int, List[int]] = {c: [] for c in self.universe}
        self._extra_sat_calls = 0
        self._card_lb = 0

    @property
    def sat_calls(self) -> int:
        return self._solver.stats.solves + self._extra_sat_calls

    def add_explanation(self, components: Iterable[int]) -> None:
        expl = frozenset(components)
        if not expl:
            raise NoDiagnosisError("empty explanation: nothing can cover it")
        if not expl <= self._members:
            raise ValueError(f"explanation {sorted(expl)} leaves the universe")
        if expl in self._seen_sets:
            return
        self._seen_sets.add(expl)
        index = len(self.sets)
        self.sets.append(expl)
        for c in expl:
            self._sets_with[c].append(index)
        self._solver.add_clause([self._pick[c] for c in expl])

    def block_diagnosis(self, diag: Iterable[int]) -> None:
        diag = frozenset(diag)
        if not diag <= self._members:
            raise ValueError(f"diagnosis {sorted(diag)} leaves the universe")
        self.blocked.append(diag)
        self._solver.add_clause([-self._pick[c] for c in diag])

    def next_min_hs(self, mode: str = "subset") -> Optional[FrozenSet[int]]:
        """A new minimal hitting set of the stored sets, or None if all blocked."""
        if mode == "subset":
            return self._next_subset_minimal()
        if mode == "cardinality":
            return self._next_cardinality_minimal()
        raise ValueError(f"unknown minimality mode {mode!r}")

    def _next_subset_minimal(self) -> Optional[FrozenSet[int]]:
        if not self._solver.solve([]):
            return None
        model_value = self._solver.model_value
        hs = {c for c in self.universe if model_value(self._pick[c])}
        # Deletion scan in ascending component id.  A pure membership check
        # is equivalent to the assumption re-solve with a fully fixed pick
        # assignment: covering clauses are monotone in the picks and a subset
        # of a non-blocked set can never become a blocked superset.
        counts = [len(s & hs) for s in self.sets]
        for c in sorted(hs):
            if all(counts[i] >= 2 for i in self._sets_with[c]):
                hs.remove(c)
                for i in self._sets_with[c]:
                    counts[i] -= 1
        return frozenset(hs)

    def _next_cardinality_minimal(self) -> Optional[FrozenSet[int]]:
        if not self._solver.solve([]):
            return None
        picks = [self._pick[c] for c in self.universe]
        for bound in range(self._card_lb, len(self.universe) + 1):
            probe = CdclSolver(num_vars=len(self.universe))
            for s in self.sets:
                probe.add_clause([self._pick[c] for c in s])
            for d in self.blocked:
                probe.add_clause([-self._pick[c] for c in d])
            encode_at_most(probe, picks, bound)
            sat = probe.solve([])
            self._extra_sat_calls += probe.stats.solves
            if sat:
                self._card_lb = bound
                return frozenset(
                    c for c in self.universe if probe.model_value(self._pick[c])
                )
        return None
