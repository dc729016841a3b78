"""Model-based diagnosis of many failing observations at once.

The package diagnoses a component-structured CNF system that disagrees with
a set of observations: it computes subset-minimal or cardinality-minimal
component sets whose abnormality restores consistency with every
observation, via iterative hitting-set dualization over a single system
copy, alongside the two baseline strategies (per-observation enumeration
with posterior assemblage, and one aggregated multi-replica formula).
"""

from .benchgen import (
    EncoderParams,
    Netlist,
    encode_netlist,
    gen_buggy_encoder,
    gen_c17,
    gen_random_instance,
    per_observation_diagnosis_count,
)
from .engines import (
    AssembleResult,
    EngineConfig,
    RunStats,
    SeparateResult,
    aggregated_enumerate,
    assemble,
    ihsd_enumerate,
    separate_enumerate,
)
from .formula import Assignment, Clause, CnfFormula, WcnfInstance, eval_formula, normalize_clause
from .hitting import ExplanationStore, NoDiagnosisError
from .mcs import McsResult, McsSession, enumerate_mcs, extract_mcs
from .solver import CdclSolver, SatResult
from .system import (
    ConsistencyChecker,
    Diagnosis,
    Explanation,
    Observation,
    SystemDescription,
    brute_force_diagnoses,
    build_aggregate,
    make_system,
    observation_wcnf,
    verify_diagnosis,
)

__all__ = [
    "Assignment",
    "AssembleResult",
    "CdclSolver",
    "Clause",
    "CnfFormula",
    "ConsistencyChecker",
    "Diagnosis",
    "EncoderParams",
    "EngineConfig",
    "Explanation",
    "ExplanationStore",
    "McsResult",
    "McsSession",
    "Netlist",
    "NoDiagnosisError",
    "Observation",
    "RunStats",
    "SatResult",
    "SeparateResult",
    "SystemDescription",
    "WcnfInstance",
    "aggregated_enumerate",
    "assemble",
    "brute_force_diagnoses",
    "build_aggregate",
    "encode_netlist",
    "enumerate_mcs",
    "eval_formula",
    "extract_mcs",
    "gen_buggy_encoder",
    "gen_c17",
    "gen_random_instance",
    "ihsd_enumerate",
    "make_system",
    "normalize_clause",
    "observation_wcnf",
    "per_observation_diagnosis_count",
    "separate_enumerate",
    "verify_diagnosis",
]
