"""The diagnosis data model.

A system description holds a CNF over system variables whose clauses are
organized into per-component groups; every component clause carries the
component's abnormal selector as its last literal, so declaring a component
abnormal relaxes its whole group.  Observations are unit assumptions over
system variables.  One shared solver answers every consistency query through
assumptions, for any candidate component set and any observation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .formula import Clause, CnfFormula, WcnfInstance
from .solver import CdclSolver

Diagnosis = FrozenSet[int]


class MalformedObservationError(ValueError):
    """An observation mentions an unknown variable or contradicts itself."""


class ContractError(RuntimeError):
    """A caller violated an operation precondition."""


@dataclass(frozen=True)
class Observation:
    """A set of unit value assignments over system variables."""

    id: int
    units: Tuple[int, ...]

    def __post_init__(self):
        seen = set(self.units)
        for lit in self.units:
            if lit == 0:
                raise MalformedObservationError("observation literal 0")
            if -lit in seen:
                raise MalformedObservationError(
                    f"observation {self.id} assigns variable {abs(lit)} both ways"
                )


@dataclass(frozen=True)
class Explanation:
    """A minimal component set that cannot all stay healthy under one observation."""

    components: FrozenSet[int]
    witness_obs: int


@dataclass
class SystemDescription:
    """Components, clause groups and abnormal selectors over one CNF.

    ``clauses`` are stored in relaxed form: a clause of component ``c`` ends
    with the selector literal ``ab_literal[c]``; background (hard) clauses
    carry no selector.  Selector variables sit directly above the system
    variables: component ``c`` uses variable ``num_system_vars + c``.
    """

    num_system_vars: int
    clauses: List[Clause]
    components: Tuple[int, ...]
    clause_groups: Dict[int, Tuple[int, ...]]
    hard_indices: Tuple[int, ...]
    ab_literal: Dict[int, int]
    component_names: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    @property
    def num_vars(self) -> int:
        """Variable count including the selector variables."""
        return self.num_system_vars + len(self.components)

    def group_of(self) -> List[int]:
        """Clause index -> component id (0 for background)."""
        owner = [0] * len(self.clauses)
        for comp, indices in self.clause_groups.items():
            for i in indices:
                owner[i] = comp
        return owner

    def check(self) -> None:
        seen: Set[int] = set()
        for comp, indices in self.clause_groups.items():
            ab = self.ab_literal[comp]
            for i in indices:
                if i in seen:
                    raise ValueError(f"clause {i} assigned to two groups")
                seen.add(i)
                if self.clauses[i][-1] != ab:
                    raise ValueError(f"clause {i} lacks the trailing selector of {comp}")
        for i in self.hard_indices:
            if i in seen:
                raise ValueError(f"clause {i} is both hard and component-owned")
            seen.add(i)
            for lit in self.clauses[i]:
                if abs(lit) > self.num_system_vars:
                    raise ValueError(f"hard clause {i} mentions a selector")
        if len(seen) != len(self.clauses):
            raise ValueError("clause groups and hard indices must cover all clauses")


def make_system(
    num_system_vars: int,
    grouped_clauses: Sequence[Tuple[int, Sequence[int]]],
    num_components: int,
    component_names: Optional[Sequence[str]] = None,
) -> SystemDescription:
    """Assemble a description from (group, clause) pairs; group 0 is hard."""
    components = tuple(range(1, num_components + 1))
    ab_literal = {c: num_system_vars + c for c in components}
    clauses: List[Clause] = []
    groups: Dict[int, List[int]] = {c: [] for c in components}
    hard: List[int] = []
    for group, lits in grouped_clauses:
        if not 0 <= group <= num_components:
            raise ValueError(f"group {group} out of range 0..{num_components}")
        for lit in lits:
            if lit == 0 or abs(lit) > num_system_vars:
                raise ValueError(f"literal {lit} outside system variables")
        if group == 0:
            hard.append(len(clauses))
            clauses.append(tuple(lits))
        else:
            groups[group].append(len(clauses))
            clauses.append(tuple(lits) + (ab_literal[group],))
    return SystemDescription(
        num_system_vars=num_system_vars,
        clauses=clauses,
        components=components,
        clause_groups={c: tuple(ix) for c, ix in groups.items()},
        hard_indices=tuple(hard),
        ab_literal=ab_literal,
        component_names=tuple(component_names) if component_names else None,
    )


class ConsistencyChecker:
    """One shared solver answering consistency queries via assumptions.

    Observations are applied as assumptions, never as clauses, so a single
    clause database serves every observation and every candidate set.
    """

    def __init__(self, sd: SystemDescription):
        self.sd = sd
        self._solver = CdclSolver(num_vars=sd.num_vars)
        for clause in sd.clauses:
            self._solver.add_clause(clause)
        for c in sd.components:
            # free selectors should fall to "abnormal", which never conflicts
            self._solver.set_phase(sd.ab_literal[c], True)
        self._neg_ab = [-sd.ab_literal[c] for c in sd.components]
        self._index = {c: i for i, c in enumerate(sd.components)}
        self._last_core: Optional[FrozenSet[int]] = None
        self._last_query: Optional[Tuple[FrozenSet[int], int]] = None
        # Lazily built twin for deletion minimization: its assumption prefix
        # differs structurally from check()'s, so giving it its own trail
        # avoids backtracking to the root on every extraction.
        self._minimizer: Optional[CdclSolver] = None

    def _minimizer_solver(self) -> CdclSolver:
        if self._minimizer is None:
            self._minimizer = CdclSolver(num_vars=self.sd.num_vars)
            for clause in self.sd.clauses:
                self._minimizer.add_clause(clause)
            for c in self.sd.components:
                self._minimizer.set_phase(self.sd.ab_literal[c], True)
        return self._minimizer

    @property
    def sat_calls(self) -> int:
        calls = self._solver.stats.solves
        if self._minimizer is not None:
            calls += self._minimizer.stats.solves
        return calls

    def _validate(self, obs: Observation) -> None:
        for lit in obs.units:
            if abs(lit) > self.sd.num_system_vars:
                raise MalformedObservationError(
                    f"observation {obs.id} mentions unknown variable {abs(lit)}"
                )

    def check(self, delta: Iterable[int], obs: Observation) -> bool:
        """True iff the system with exactly delta abnormal fits the observation."""
        delta = frozenset(delta)
        self._validate(obs)
        assumptions = list(self._neg_ab)
        for c in delta:
            assumptions[self._index[c]] = self.sd.ab_literal[c]
        assumptions.extend(obs.units)
        if self._solver.solve(assumptions):
            self._last_core = None
            self._last_query = None
            return True
        self._last_core = self._solver.get_core()
        self._last_query = (delta, obs.id)
        return False

    def extract_explanation(self, delta: Iterable[int], obs: Observation) -> Explanation:
        """Minimal conflict behind a failed check, disjoint from delta.

        Starts from the solver core restricted to healthy-selector
        assumptions, then deletion-minimizes in ascending component id:
        a component stays exactly when dropping it alone restores
        consistency at that step.
        """
        delta = frozenset(delta)
        if self._last_query != (delta, obs.id):
            if self.check(delta, obs):
                raise ContractError("extract_explanation requires a failing check")
        ab_of = self.sd.ab_literal
        candidates = sorted(
            c for c in self.sd.components if -ab_of[c] in self._last_core
        )
        solver = self._minimizer_solver()
        # Non-candidates are pinned abnormal: satisfiability-wise identical to
        # leaving them free (selectors occur only positively), and the fixed
        # prefix lets consecutive drop tests reuse the whole trail.
        cand_set = set(candidates)
        base = [ab_of[c] for c in self.sd.components if c not in cand_set]
        base.extend(obs.units)
        kept: List[int] = []
        for pos, c in enumerate(candidates):
            trial = kept + candidates[pos + 1 :]
            if solver.solve(base + [-ab_of[d] for d in trial]):
                kept.append(c)
        self._last_core = None
        return Explanation(frozenset(kept), obs.id)

    def verify_diagnosis(self, delta: Iterable[int], observations: Sequence[Observation]) -> bool:
        """Consistency with every observation plus minimality (deletion check)."""
        delta = frozenset(delta)
        if not all(self.check(delta, o) for o in observations):
            return False
        for c in sorted(delta):
            smaller = delta - {c}
            if all(self.check(smaller, o) for o in observations):
                return False
        return True


def observation_wcnf(sd: SystemDescription, obs: Observation) -> WcnfInstance:
    """MaxSAT view for one observation: units become hard, selectors soft.

    Soft clause i is the healthy-unit of components[i].
    """
    hard = CnfFormula(num_vars=sd.num_vars)
    for clause in sd.clauses:
        hard.add_clause(clause)
    for lit in obs.units:
        if abs(lit) > sd.num_system_vars:
            raise MalformedObservationError(
                f"observation {obs.id} mentions unknown variable {abs(lit)}"
            )
        hard.add_clause((lit,))
    soft = [(-sd.ab_literal[c],) for c in sd.components]
    return WcnfInstance(hard, soft)


def build_aggregate(sd: SystemDescription, observations: Sequence[Observation]) -> WcnfInstance:
    """One renamed system replica per observation, with shared selectors.

    Replica i maps system variable v to (i-1)*V + v; the shared selector of
    component c becomes r*V + c.  Soft clause i is the healthy-unit of
    components[i].
    """
    if not observations:
        raise ValueError("at least one observation is required")
    r = len(observations)
    v_sys = sd.num_system_vars

    def rename(lit: int, replica: int) -> int:
        var = abs(lit)
        if var <= v_sys:
            new = replica * v_sys + var
        else:
            new = r * v_sys + (var - v_sys)
        return new if lit > 0 else -new

    hard = CnfFormula(num_vars=r * v_sys + len(sd.components))
    for i, obs in enumerate(observations):
        for clause in sd.clauses:
            hard.add_clause(tuple(rename(l, i) for l in clause))
        for lit in obs.units:
            if abs(lit) > v_sys:
                raise MalformedObservationError(
                    f"observation {obs.id} mentions unknown variable {abs(lit)}"
                )
            hard.add_clause((rename(lit, i),))
    soft = [(-(r * v_sys + c),) for c in sd.components]
    return WcnfInstance(hard, soft)


def verify_diagnosis(
    sd: SystemDescription,
    checker: Optional[ConsistencyChecker],
    delta: Iterable[int],
    observations: Sequence[Observation],
) -> bool:
    if checker is None:
        checker = ConsistencyChecker(sd)
    return checker.verify_diagnosis(delta, observations)


def brute_force_diagnoses(
    sd: SystemDescription,
    observations: Sequence[Observation],
    cap: int = 15,
    monotone_skip: bool = True,
) -> Set[Diagnosis]:
    """All subset-minimal diagnoses by explicit subset enumeration.

    With monotone_skip, supersets of already-found diagnoses are not
    re-checked; under the weak fault model relaxing more components never
    breaks consistency, so the result is identical (cross-checked in tests
    against the unskipped scan).
    """
    m = len(sd.components)
    if m > cap:
        raise ValueError(f"{m} components exceed the brute-force cap of {cap}")
    checker = ConsistencyChecker(sd)
    minimal: List[Diagnosis] = []
    everything: List[Diagnosis] = []
    for size in range(m + 1):
        for combo in combinations(sd.components, size):
            delta = frozenset(combo)
            if monotone_skip and any(d <= delta for d in minimal):
                continue
            if all(checker.check(delta, o) for o in observations):
                if monotone_skip:
                    minimal.append(delta)
                else:
                    everything.append(delta)
    if not monotone_skip:
        minimal = [d for d in everything if not any(e < d for e in everything)]
    return set(minimal)
