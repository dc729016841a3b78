"""The three end-to-end diagnosis strategies.

The iterative dualization engine alternates two oracles against a single
system copy: a minimal-hitting-set query over the explanations found so far,
and per-observation consistency checks that either certify the candidate as
a diagnosis or return a new minimal explanation.  The two baselines are
per-observation enumeration with posterior assemblage, and enumeration over
one aggregated formula with a renamed system replica per observation.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Set

from .hitting import ExplanationStore, encode_at_most
from .mcs import McsSession
from .solver import CdclSolver
from .system import (
    ConsistencyChecker,
    Diagnosis,
    Explanation,
    Observation,
    SystemDescription,
    build_aggregate,
    observation_wcnf,
)

log = logging.getLogger(__name__)

Sink = Callable[[Diagnosis], None]


@dataclass(frozen=True)
class EngineConfig:
    mode: str = "subset"  # or "cardinality"
    max_diagnoses: Optional[int] = None
    time_budget: Optional[float] = None  # seconds
    seed: int = 0
    explanation_cap: Optional[int] = None  # safety valve, off by default

    def __post_init__(self):
        if self.mode not in ("subset", "cardinality"):
            raise ValueError(f"unknown minimality mode {self.mode!r}")
        if self.max_diagnoses is not None and self.max_diagnoses < 1:
            raise ValueError("max_diagnoses must be at least 1 when bounded")


@dataclass
class RunStats:
    diagnoses_emitted: int = 0
    explanations_found: int = 0
    sat_calls: int = 0
    iterations: int = 0
    elapsed_seconds: float = 0.0
    exhausted: bool = True


def _deadline(config: EngineConfig, start: float) -> Optional[float]:
    if config.time_budget is None:
        return None
    return start + config.time_budget


def ihsd_enumerate(
    sd: SystemDescription,
    observations: Sequence[Observation],
    config: EngineConfig,
    sink: Sink,
    explanation_sink: Optional[Callable[[Explanation], None]] = None,
) -> RunStats:
    """Iterative hitting-set dualization over a single system copy.

    Each outer iteration asks for a new minimal hitting set of the stored
    explanations; the candidate either fails some observation (yielding one
    new explanation) or is emitted as a diagnosis and blocked.  Terminates
    when no unblocked hitting set remains: at that point all diagnoses have
    been enumerated, even if some explanations were never discovered.
    """
    start = time.perf_counter()
    deadline = _deadline(config, start)
    stats = RunStats()
    checker = ConsistencyChecker(sd)

    failing: List[Observation] = []
    for obs in observations:
        if checker.check(frozenset(), obs):
            log.warning("observation %d is not failing; dropped", obs.id)
        else:
            failing.append(obs)

    store = ExplanationStore(sd.components)
    next_start = 0  # round-robin position: one past the last failing observation
    try:
        while True:
            stats.iterations += 1
            candidate = store.next_min_hs(config.mode)
            if candidate is None:
                break
            if deadline is not None and time.perf_counter() > deadline:
                stats.exhausted = False
                break
            conflicted = False
            for offset in range(len(failing)):
                i = (next_start + offset) % len(failing)
                obs = failing[i]
                if not checker.check(candidate, obs):
                    expl = checker.extract_explanation(candidate, obs)
                    store.add_explanation(expl.components)
                    if explanation_sink is not None:
                        explanation_sink(expl)
                    stats.explanations_found += 1
                    next_start = (i + 1) % len(failing)
                    conflicted = True
                    break
            if conflicted:
                if (
                    config.explanation_cap is not None
                    and stats.explanations_found >= config.explanation_cap
                ):
                    stats.exhausted = False
                    break
                continue
            sink(candidate)
            stats.diagnoses_emitted += 1
            store.block_diagnosis(candidate)
            if config.max_diagnoses is not None and stats.diagnoses_emitted >= config.max_diagnoses:
                stats.exhausted = False
                break
    finally:
        stats.sat_calls = checker.sat_calls + store.sat_calls
        stats.elapsed_seconds = time.perf_counter() - start
    return stats


@dataclass
class SeparateResult:
    """Per-observation enumeration outcome."""

    per_obs: Dict[int, Set[Diagnosis]] = field(default_factory=dict)
    exhausted: Dict[int, bool] = field(default_factory=dict)
    stats: RunStats = field(default_factory=RunStats)

    @property
    def all_exhausted(self) -> bool:
        return all(self.exhausted.values())

    @property
    def total_emitted(self) -> int:
        return sum(len(d) for d in self.per_obs.values())


def separate_enumerate(
    sd: SystemDescription,
    observations: Sequence[Observation],
    config: EngineConfig,
) -> SeparateResult:
    """Enumerate every diagnosis of every observation independently.

    Budget exhaustion is a recorded outcome per observation, not an error;
    an unexhausted observation makes any later assemblage unsound.
    """
    start = time.perf_counter()
    deadline = _deadline(config, start)
    result = SeparateResult()
    for obs in observations:
        session = McsSession(observation_wcnf(sd, obs))
        found: Set[Diagnosis] = set()

        def collect(mcs_result, _components=sd.components, _found=found):
            _found.add(frozenset(_components[i] for i in mcs_result.mcs))

        count, exhausted = session.enumerate(sink=collect, deadline=deadline)
        result.per_obs[obs.id] = found
        result.exhausted[obs.id] = exhausted
        result.stats.iterations += count
        result.stats.sat_calls += session.sat_calls
    result.stats.exhausted = result.all_exhausted
    result.stats.elapsed_seconds = time.perf_counter() - start
    return result


@dataclass
class AssembleResult:
    diagnoses: Set[Diagnosis]
    partial: bool  # True when built from unexhausted enumerations: possibly unsound


def assemble(per_obs: Dict[int, Set[Diagnosis]], all_exhausted: bool) -> AssembleResult:
    """Minimal unions over one diagnosis per observation.

    Iterative pairwise union with subsumption pruning after each merge; any
    full combination always dominates some pruned partial union, so no
    minimal element is lost.
    """
    if not all_exhausted:
        log.warning("assembling from incomplete enumerations: result may be unsound")
    acc: Set[Diagnosis] = {frozenset()}
    for obs_id in sorted(per_obs):
        merged = {a | d for a in acc for d in per_obs[obs_id]}
        acc = {s for s in merged if not any(t < s for t in merged)}
    return AssembleResult(acc, partial=not all_exhausted)


def aggregated_enumerate(
    sd: SystemDescription,
    observations: Sequence[Observation],
    config: EngineConfig,
    sink: Sink,
) -> RunStats:
    """Enumerate diagnoses of the aggregated multi-replica formula."""
    start = time.perf_counter()
    deadline = _deadline(config, start)
    stats = RunStats()
    aggregate = build_aggregate(sd, observations)
    components = sd.components
    if config.mode == "subset":
        session = McsSession(aggregate)

        def emit(mcs_result):
            sink(frozenset(components[i] for i in mcs_result.mcs))
            stats.diagnoses_emitted += 1

        _, exhausted = session.enumerate(
            limit=config.max_diagnoses, sink=emit, deadline=deadline
        )
        stats.exhausted = exhausted
        stats.iterations = stats.diagnoses_emitted
        stats.sat_calls = session.sat_calls
    else:
        stats = _aggregated_cardinality(aggregate, components, config, sink, deadline)
    stats.elapsed_seconds = time.perf_counter() - start
    return stats


def _aggregated_cardinality(
    aggregate, components, config: EngineConfig, sink: Sink, deadline: Optional[float]
) -> RunStats:
    """Bound loop over the shared selectors, smallest diagnoses first."""
    stats = RunStats()
    ab_vars = [-clause[0] for clause in aggregate.soft]  # positive selector vars
    feasibility = CdclSolver(num_vars=aggregate.hard.num_vars)
    for clause in aggregate.hard.clauses:
        feasibility.add_clause(clause)
    blocked: List[FrozenSet[int]] = []
    bound = 0
    while bound <= len(components):
        if deadline is not None and time.perf_counter() > deadline:
            stats.exhausted = False
            break
        stats.iterations += 1
        if not feasibility.solve([]):
            break  # everything enumerated
        probe = CdclSolver(num_vars=aggregate.hard.num_vars)
        for clause in aggregate.hard.clauses:
            probe.add_clause(clause)
        for diag in blocked:
            probe.add_clause([-ab_vars[i] for i in diag])
        encode_at_most(probe, ab_vars, bound)
        sat = probe.solve([])
        stats.sat_calls += probe.stats.solves
        if not sat:
            bound += 1
            continue
        indices = frozenset(i for i, v in enumerate(ab_vars) if probe.model_value(v))
        blocked.append(indices)
        feasibility.add_clause([-ab_vars[i] for i in indices])
        sink(frozenset(components[i] for i in indices))
        stats.diagnoses_emitted += 1
        if config.max_diagnoses is not None and stats.diagnoses_emitted >= config.max_diagnoses:
            stats.exhausted = False
            break
    stats.sat_calls += feasibility.stats.solves
    return stats
