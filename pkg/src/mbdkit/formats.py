"""File formats: grouped-CNF system files, observation files, DIMACS, netlists.

The system format is a grouped CNF: ``p mbd V C M`` followed by one clause
per line, ``g l1 ... ln 0``, where group 0 is background and groups 1..M tie
the clause to a component.  Selector variables are not written; the parser
allocates them as V+1..V+M and stores component clauses in relaxed form.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .benchgen import GATE_KINDS, Netlist
from .formula import CnfFormula
from .system import MalformedObservationError, Observation, SystemDescription, make_system


class ParseError(ValueError):
    """A format violation, carrying the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _int_fields(line_no: int, line: str) -> List[int]:
    fields = []
    for tok in line.split():
        try:
            fields.append(int(tok))
        except ValueError:
            raise ParseError(line_no, f"expected an integer, got {tok!r}") from None
    return fields


def parse_mbd(text: str) -> SystemDescription:
    header: Optional[Tuple[int, int, int]] = None
    grouped: List[Tuple[int, Tuple[int, ...]]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError(line_no, "duplicate header")
            fields = line.split()
            if len(fields) != 5 or fields[1] != "mbd":
                raise ParseError(line_no, "header must be 'p mbd V C M'")
            try:
                header = (int(fields[2]), int(fields[3]), int(fields[4]))
            except ValueError:
                raise ParseError(line_no, "header counts must be integers") from None
            continue
        if header is None:
            raise ParseError(line_no, "clause before header")
        fields = _int_fields(line_no, line)
        if not fields or fields[-1] != 0:
            raise ParseError(line_no, "clause line must end with 0")
        group, *lits = fields[:-1]
        if not 0 <= group <= header[2]:
            raise ParseError(line_no, f"group {group} out of range 0..{header[2]}")
        for lit in lits:
            if lit == 0:
                raise ParseError(line_no, "literal 0 inside a clause")
            if abs(lit) > header[0]:
                raise ParseError(line_no, f"variable {abs(lit)} exceeds declared {header[0]}")
        grouped.append((group, tuple(lits)))
    if header is None:
        raise ParseError(1, "missing 'p mbd' header")
    if len(grouped) != header[1]:
        raise ParseError(
            len(text.splitlines()) or 1,
            f"declared {header[1]} clauses but found {len(grouped)}",
        )
    return make_system(header[0], grouped, header[2])


def write_mbd(sd: SystemDescription) -> str:
    owner = sd.group_of()
    lines = [f"p mbd {sd.num_system_vars} {len(sd.clauses)} {len(sd.components)}"]
    for idx, clause in enumerate(sd.clauses):
        group = owner[idx]
        lits = clause[:-1] if group else clause  # strip the trailing selector
        lines.append(f"{group} {' '.join(str(l) for l in lits)} 0")
    return "\n".join(lines) + "\n"


def parse_obs(text: str, num_system_vars: int) -> List[Observation]:
    observations = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = _int_fields(line_no, line)
        if not fields or fields[-1] != 0:
            raise ParseError(line_no, "observation line must end with 0")
        units = tuple(fields[:-1])
        for lit in units:
            if lit == 0:
                raise ParseError(line_no, "literal 0 inside an observation")
            if abs(lit) > num_system_vars:
                raise ParseError(
                    line_no, f"variable {abs(lit)} exceeds declared {num_system_vars}"
                )
        try:
            observations.append(Observation(len(observations) + 1, units))
        except MalformedObservationError as exc:
            raise ParseError(line_no, str(exc)) from None
    return observations


def write_obs(observations) -> str:
    return "".join(
        " ".join(str(l) for l in obs.units) + " 0\n" for obs in observations
    )


def parse_dimacs(text: str) -> CnfFormula:
    """Plain 'p cnf V C' ingestion for standalone solver testing."""
    header = None
    clauses: List[Tuple[int, ...]] = []
    pending: List[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError(line_no, "header must be 'p cnf V C'")
            header = (int(fields[2]), int(fields[3]))
            continue
        if header is None:
            raise ParseError(line_no, "clause before header")
        for lit in _int_fields(line_no, line):
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise ParseError(1, "missing 'p cnf' header")
    if pending:
        raise ParseError(len(text.splitlines()), "unterminated clause at end of file")
    if len(clauses) != header[1]:
        raise ParseError(
            len(text.splitlines()) or 1,
            f"declared {header[1]} clauses but found {len(clauses)}",
        )
    formula = CnfFormula.from_clauses(clauses, num_vars=header[0])
    formula.check()
    return formula


_NET_INPUT = re.compile(r"^INPUT\((\w+)\)$")
_NET_OUTPUT = re.compile(r"^OUTPUT\((\w+)\)$")
_NET_GATE = re.compile(r"^(\w+)\s*=\s*(\w+)\(([\w\s,]*)\)$")


def parse_netlist(text: str) -> Netlist:
    inputs: List[str] = []
    outputs: List[str] = []
    gates: List[Tuple[str, str, Tuple[str, ...]]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _NET_INPUT.match(line)
        if m:
            inputs.append(m.group(1))
            continue
        m = _NET_OUTPUT.match(line)
        if m:
            outputs.append(m.group(1))
            continue
        m = _NET_GATE.match(line)
        if m:
            out, kind, ins = m.group(1), m.group(2).upper(), m.group(3)
            if kind not in GATE_KINDS:
                raise ParseError(line_no, f"unknown gate kind {kind}")
            names = tuple(s.strip() for s in ins.split(",") if s.strip())
            if not names:
                raise ParseError(line_no, f"gate {out} has no inputs")
            gates.append((out, kind, names))
            continue
        raise ParseError(line_no, f"unrecognized netlist line {line!r}")
    netlist = Netlist(inputs=tuple(inputs), outputs=tuple(outputs), gates=tuple(gates))
    netlist.check()
    return netlist
