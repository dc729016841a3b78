"""Deterministic instance generators.

The flagship family is the buggy-encoder chain construction: r-1 hard
trigger clauses feed a shared head variable, k four-clause soft chains relay
it into one of two sink branches, and two final soft clauses tie the sinks
to observed outputs.  Each of the first r-1 tests admits
4^k + 4^(k//2) + 4^((k+1)//2) + 1 per-test repairs, while all r tests
together admit exactly one: the two final clauses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .system import (
    ConsistencyChecker,
    Observation,
    SystemDescription,
    make_system,
)


class CyclicNetlistError(ValueError):
    """The gate graph has no topological order; the cycle is reported."""


@dataclass(frozen=True)
class EncoderParams:
    """Shape of one buggy-encoder instance.

    Sizes before padding: variables r+3k+9, clauses r+4k+5, components 4k+2.
    """

    r: int
    k: int
    padding_hard: int = 0
    padding_soft: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("need at least two observations (r >= 2)")
        if self.k < 1:
            raise ValueError("need at least one clause group (k >= 1)")
        if self.padding_hard < 0 or self.padding_soft < 0:
            raise ValueError("padding counts must be non-negative")


def per_observation_diagnosis_count(k: int) -> int:
    """Closed-form repair count for each of the first r-1 tests."""
    return 4**k + 4 ** (k // 2) + 4 ** ((k + 1) // 2) + 1


def gen_buggy_encoder(params: EncoderParams) -> Tuple[SystemDescription, List[Observation]]:
    r, k = params.r, params.k
    # variable layout: triggers, head, chains group-major, then the tail block
    head = r

    def chain(p: int, off: int) -> int:
        return r + 3 * (p - 1) + off

    t21a = r + 3 * k + 1
    w41a = r + 3 * k + 2
    w42a = r + 3 * k + 3
    s31a = r + 3 * k + 4
    u41a = r + 3 * k + 5
    u42a = r + 3 * k + 6
    t41a = r + 3 * k + 7
    z41a = r + 3 * k + 8
    z42a = r + 3 * k + 9
    num_vars = r + 3 * k + 9

    grouped: List[Tuple[int, Sequence[int]]] = []
    for j in range(1, r):
        grouped.append((0, (-j, head)))
    for p in range(1, k + 1):
        sink = w41a if p % 2 == 1 else w42a
        comp = 4 * (p - 1)
        grouped.append((comp + 1, (-head, -t21a, chain(p, 1))))
        grouped.append((comp + 2, (-chain(p, 1), -t21a, chain(p, 2))))
        grouped.append((comp + 3, (-chain(p, 2), -t21a, chain(p, 3))))
        grouped.append((comp + 4, (-chain(p, 3), -t21a, sink)))
    grouped.append((0, (-s31a, w41a)))
    grouped.append((0, (-s31a, w42a)))
    grouped.append((0, (-w41a, u41a)))
    grouped.append((0, (-w42a, u42a)))
    grouped.append((4 * k + 1, (-u41a, -t41a, z41a)))
    grouped.append((4 * k + 2, (-u42a, -t41a, z42a)))

    num_components = 4 * k + 2
    rng = random.Random(params.seed)
    for _ in range(params.padding_hard):
        a, b = num_vars + 1, num_vars + 2
        num_vars += 2
        grouped.append((0, (a if rng.random() < 0.5 else -a, b if rng.random() < 0.5 else -b)))
    for _ in range(params.padding_soft):
        a, b = num_vars + 1, num_vars + 2
        num_vars += 2
        num_components += 1
        grouped.append(
            (num_components, (a if rng.random() < 0.5 else -a, b if rng.random() < 0.5 else -b))
        )

    sd = make_system(num_vars, grouped, num_components)

    tail = (t21a, t41a, -z41a, -z42a)
    observations = []
    for j in range(1, r):
        units = tuple(i if i == j else -i for i in range(1, r)) + (-s31a,) + tail
        observations.append(Observation(j, units))
    units = tuple(-i for i in range(1, r)) + (s31a,) + tail
    observations.append(Observation(r, units))
    return sd, observations


GATE_KINDS = ("AND", "NAND", "OR", "NOR", "NOT", "BUFF", "XOR", "XNOR")


@dataclass(frozen=True)
class Netlist:
    """Named combinational gate network."""

    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    gates: Tuple[Tuple[str, str, Tuple[str, ...]], ...]  # (output, kind, inputs)

    def check(self) -> None:
        for out, kind, _ in self.gates:
            if kind not in GATE_KINDS:
                raise ValueError(f"unknown gate kind {kind}")
            if out in self.inputs:
                raise ValueError(f"gate output {out} shadows an input")
        outs = [g[0] for g in self.gates]
        if len(outs) != len(set(outs)):
            raise ValueError("a signal is driven by more than one gate")
        for name in self.outputs:
            if name not in self.inputs and name not in outs:
                raise ValueError(f"output {name} is never driven")
        self.topological_order()

    def topological_order(self) -> List[str]:
        """Gate outputs in evaluation order; raises on combinational cycles."""
        producers = {out: (out, kind, ins) for out, kind, ins in self.gates}
        order: List[str] = []
        state: Dict[str, int] = {}  # 1 = visiting, 2 = done

        def visit(name: str, stack: List[str]) -> None:
            if name in self.inputs or name not in producers:
                return
            mark = state.get(name)
            if mark == 2:
                return
            if mark == 1:
                cycle = stack[stack.index(name):] + [name]
                raise CyclicNetlistError(" -> ".join(cycle))
            state[name] = 1
            stack.append(name)
            for dep in producers[name][2]:
                visit(dep, stack)
            stack.pop()
            state[name] = 2
            order.append(name)

        for out, _, _ in self.gates:
            visit(out, [])
        return order


def _gate_cnf(kind: str, out: int, ins: Sequence[int]) -> List[Tuple[int, ...]]:
    """CNF of out <-> kind(ins); n-ary for AND/NAND/OR/NOR."""
    if kind in ("NOT", "BUFF"):
        (a,) = ins
        src = -a if kind == "NOT" else a
        return [(out, -src), (-out, src)]
    if kind in ("XOR", "XNOR"):
        a, b = ins
        if kind == "XOR":
            return [(-out, a, b), (-out, -a, -b), (out, -a, b), (out, a, -b)]
        return [(-out, -a, b), (-out, a, -b), (out, a, b), (out, -a, -b)]
    if kind in ("AND", "NAND"):
        o = out if kind == "AND" else -out
        clauses = [(-o, a) for a in ins]
        clauses.append(tuple([o] + [-a for a in ins]))
        return clauses
    if kind in ("OR", "NOR"):
        o = out if kind == "OR" else -out
        clauses = []
        for a in ins:
            clauses.append((o, -a))
        clauses.append(tuple([-o] + list(ins)))
        return clauses
    raise ValueError(f"unknown gate kind {kind}")


def encode_netlist(netlist: Netlist) -> SystemDescription:
    """One component per gate; each gate function guarded by its selector."""
    netlist.check()
    var_of: Dict[str, int] = {}
    for name in netlist.inputs:
        var_of[name] = len(var_of) + 1
    for out, _, _ in netlist.gates:
        if out in var_of:
            raise ValueError(f"signal {out} defined twice")
        var_of[out] = len(var_of) + 1
    grouped: List[Tuple[int, Sequence[int]]] = []
    for comp, (out, kind, ins) in enumerate(netlist.gates, start=1):
        arity = 1 if kind in ("NOT", "BUFF") else (2 if kind in ("XOR", "XNOR") else None)
        if arity is not None and len(ins) != arity:
            raise ValueError(f"{kind} gate {out} needs {arity} input(s)")
        if arity is None and len(ins) < 2:
            raise ValueError(f"{kind} gate {out} needs at least two inputs")
        for name in ins:
            if name not in var_of:
                raise ValueError(f"gate {out} reads undeclared signal {name}")
        for clause in _gate_cnf(kind, var_of[out], [var_of[n] for n in ins]):
            grouped.append((comp, clause))
    return make_system(
        len(var_of), grouped, len(netlist.gates),
        component_names=[g[0] for g in netlist.gates],
    )


C17_NETLIST = Netlist(
    inputs=("i1", "i2", "i3", "i4", "i5"),
    outputs=("o1", "o2"),
    gates=(
        ("z1", "NAND", ("i1", "i3")),
        ("z2", "NAND", ("i3", "i4")),
        ("z3", "NAND", ("i2", "z2")),
        ("z4", "NAND", ("z2", "i5")),
        ("o1", "NAND", ("z1", "z3")),
        ("o2", "NAND", ("z3", "z4")),
    ),
)

# Failing input/output scenarios for the six-gate circuit, keyed by the
# conventional scenario numbers.
C17_SCENARIOS = (
    (15, (1, 0, 0, 0, 0), (1, 0)),
    (27, (0, 1, 0, 1, 0), (0, 1)),
    (34, (0, 0, 0, 1, 0), (0, 1)),
    (46, (0, 0, 1, 1, 0), (1, 1)),
    (52, (1, 1, 1, 0, 0), (0, 0)),
)


def gen_c17() -> Tuple[SystemDescription, List[Observation]]:
    """The six-NAND sample circuit with its five failing scenarios."""
    sd = encode_netlist(C17_NETLIST)
    o1_var, o2_var = 10, 11
    observations = []
    for obs_id, ins, outs in C17_SCENARIOS:
        units = tuple(v if bit else -v for v, bit in enumerate(ins, start=1))
        units += (o1_var if outs[0] else -o1_var, o2_var if outs[1] else -o2_var)
        observations.append(Observation(obs_id, units))
    return sd, observations


def gen_random_instance(
    components: int, num_vars: int, observations: int, seed: int = 0
) -> Tuple[SystemDescription, List[Observation]]:
    """Small seeded instance where every observation fails when all is healthy.

    Components get 1-2 random clauses of 2-3 literals; observations are
    consistent unit sets.  Instances are resampled until each observation is
    failing for the empty candidate; with no background clauses the
    all-abnormal candidate is trivially consistent, so a diagnosis exists.
    """
    if not 1 <= components <= 12:
        raise ValueError("component count must be within 1..12")
    if not 1 <= observations <= 4:
        raise ValueError("observation count must be within 1..4")
    if num_vars < 2:
        raise ValueError("need at least two variables")
    rng = random.Random(seed)
    for _ in range(100):
        grouped: List[Tuple[int, Sequence[int]]] = []
        for comp in range(1, components + 1):
            for _ in range(rng.randint(1, 2)):
                width = rng.randint(2, min(3, num_vars))
                vs = rng.sample(range(1, num_vars + 1), width)
                grouped.append((comp, tuple(v if rng.random() < 0.5 else -v for v in vs)))
        sd = make_system(num_vars, grouped, components)
        checker = ConsistencyChecker(sd)
        obs_list = []
        for i in range(1, observations + 1):
            # Propose observations biased toward contradicting some component
            # clause; the consistency check below remains the sole authority.
            for _ in range(50):
                units = {}
                if rng.random() < 0.8:
                    _, clause = grouped[rng.randrange(len(grouped))]
                    for lit in clause:
                        units[abs(lit)] = -lit
                extra = rng.sample(range(1, num_vars + 1), rng.randint(0, 2))
                for v in extra:
                    units.setdefault(v, v if rng.random() < 0.5 else -v)
                if not units:
                    v = rng.randint(1, num_vars)
                    units[v] = v if rng.random() < 0.5 else -v
                obs = Observation(i, tuple(units[v] for v in sorted(units)))
                if not checker.check(frozenset(), obs):
                    obs_list.append(obs)
                    break
            else:
                break
        if len(obs_list) == observations:
            return sd, obs_list
    raise RuntimeError("gave up generating a failing instance for this seed")
