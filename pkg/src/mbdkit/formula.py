"""Propositional building blocks shared by every engine.

Literals are DIMACS-style signed integers: variable ``v`` is the positive
literal ``v`` and its complement is ``-v``.  Variable indices are dense
positive integers; 0 is reserved as a clause terminator in the file formats
and is rejected everywhere else.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

log = logging.getLogger(__name__)

Clause = Tuple[int, ...]
Assignment = Dict[int, bool]


class MalformedLiteralError(ValueError):
    """Raised for literal 0 or otherwise unusable literals."""


class IncompleteAssignmentError(ValueError):
    """Raised when a formula is evaluated under a partial assignment."""


def neg(lit: int) -> int:
    """Complement a literal; an involution."""
    return -lit


def normalize_clause(lits: Iterable[int]) -> Optional[Clause]:
    """Deduplicate and sort a clause; return None if it is a tautology.

    Literals are sorted by variable, positive before negative within one
    variable.  A clause containing both ``l`` and ``-l`` is tautological.
    """
    seen = set()
    for lit in lits:
        if lit == 0:
            raise MalformedLiteralError("literal 0 is reserved as a terminator")
        if not isinstance(lit, int):
            raise MalformedLiteralError(f"literal {lit!r} is not an integer")
        if -lit in seen:
            return None
        seen.add(lit)
    return tuple(sorted(seen, key=lambda l: (abs(l), l < 0)))


def lit_value(lit: int, assignment: Assignment) -> bool:
    var = abs(lit)
    try:
        val = assignment[var]
    except KeyError:
        raise IncompleteAssignmentError(f"variable {var} is unassigned") from None
    return val if lit > 0 else not val


def eval_clause(clause: Sequence[int], assignment: Assignment) -> bool:
    return any(lit_value(lit, assignment) for lit in clause)


@dataclass
class CnfFormula:
    """A plain CNF formula: a variable count and a list of clauses."""

    num_vars: int = 0
    clauses: List[Clause] = field(default_factory=list)

    @classmethod
    def from_clauses(cls, clauses: Iterable[Iterable[int]], num_vars: int = 0) -> "CnfFormula":
        """Build a formula, normalizing clauses and dropping tautologies.

        Dropped tautologies are counted on the ``tautologies_dropped``
        attribute and logged; they never affect satisfiability.
        """
        formula = cls(num_vars=num_vars)
        dropped = 0
        for raw in clauses:
            clause = normalize_clause(raw)
            if clause is None:
                dropped += 1
                continue
            formula.add_clause(clause)
        formula.tautologies_dropped = dropped
        if dropped:
            log.warning("dropped %d tautological clause(s)", dropped)
        return formula

    def add_clause(self, clause: Sequence[int]) -> None:
        clause = tuple(clause)
        for lit in clause:
            if lit == 0:
                raise MalformedLiteralError("literal 0 is reserved as a terminator")
            if abs(lit) > self.num_vars:
                self.num_vars = abs(lit)
        self.clauses.append(clause)

    def check(self) -> None:
        """Validate the variable-bound invariant."""
        for clause in self.clauses:
            for lit in clause:
                if not 1 <= abs(lit) <= self.num_vars:
                    raise MalformedLiteralError(
                        f"literal {lit} outside declared range 1..{self.num_vars}"
                    )


def eval_formula(formula: CnfFormula, assignment: Assignment) -> bool:
    """True iff every clause has at least one literal assigned true."""
    return all(eval_clause(clause, assignment) for clause in formula.clauses)


@dataclass
class WcnfInstance:
    """A partial MaxSAT instance: hard clauses plus unit-weight soft clauses.

    Every soft clause has weight 1; the hard-clause sentinel weight therefore
    only needs to exceed the soft count.
    """

    hard: CnfFormula
    soft: List[Clause] = field(default_factory=list)

    @property
    def top_weight(self) -> int:
        return len(self.soft) + 1

    @property
    def num_vars(self) -> int:
        n = self.hard.num_vars
        for clause in self.soft:
            for lit in clause:
                n = max(n, abs(lit))
        return n
