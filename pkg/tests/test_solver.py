import random

from mbdkit.formula import CnfFormula, eval_formula
from mbdkit.solver import CdclSolver

from oracles import dpll_satisfiable


def random_cnf(rng, num_vars, num_clauses, width=3):
    clauses = []
    for _ in range(num_clauses):
        k = rng.randint(1, width)
        vs = rng.sample(range(1, num_vars + 1), min(k, num_vars))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return clauses


def test_unit_clause_sat():
    s = CdclSolver()
    s.add_clause([1])
    assert s.solve([]) is True
    assert s.model_value(1) is True


def test_contradiction_gives_empty_core():
    s = CdclSolver()
    s.add_clause([1])
    s.add_clause([-1])
    assert s.solve([]) is False
    assert s.get_core() == frozenset()


def test_unit_propagation_under_assumption():
    s = CdclSolver()
    s.add_clause([-1, 2])
    assert s.solve([1]) is True
    assert s.model_value(2) is True


def test_assumption_core_is_exact_on_forced_conflict():
    # (-a or x) and (-b or -x): both assumptions together are contradictory,
    # and brute force over assumption subsets shows {a, b} is the unique
    # minimal core.
    s = CdclSolver()
    s.add_clause([-1, 3])
    s.add_clause([-2, -3])
    assert s.solve([1, 2]) is False
    core = s.get_core()
    assert core <= {1, 2}
    assert core == frozenset({1, 2})
    for subset in ([], [1], [2]):
        assert dpll_satisfiable([[-1, 3], [-2, -3]], subset)


def test_assumption_without_clauses():
    s = CdclSolver()
    assert s.solve([5]) is True
    assert s.model_value(5) is True


def test_negative_assumption():
    s = CdclSolver()
    s.add_clause([1, 2])
    assert s.solve([-1]) is True
    assert s.model_value(2) is True


def test_conflicting_assumptions():
    s = CdclSolver()
    assert s.solve([4, -4]) is False
    assert s.get_core() == frozenset({4, -4})


def test_model_is_total_and_satisfying():
    rng = random.Random(3)
    for _ in range(100):
        nv = rng.randint(1, 12)
        clauses = random_cnf(rng, nv, rng.randint(1, 40))
        formula = CnfFormula.from_clauses(clauses, num_vars=nv)
        s = CdclSolver(clauses)
        if s.solve([]):
            model = s.get_model(nv)
            assert set(model) == set(range(1, nv + 1))
            assert eval_formula(formula, model)
        else:
            assert not dpll_satisfiable(clauses)


def test_agrees_with_dpll_on_random_instances():
    rng = random.Random(17)
    for _ in range(300):
        nv = rng.randint(2, 10)
        clauses = random_cnf(rng, nv, rng.randint(1, 35))
        expected = dpll_satisfiable(clauses)
        got = CdclSolver(clauses).solve([])
        assert got == expected


def test_agrees_with_dpll_under_assumptions():
    rng = random.Random(23)
    for _ in range(300):
        nv = rng.randint(2, 9)
        clauses = random_cnf(rng, nv, rng.randint(1, 25))
        k = rng.randint(0, nv)
        assumed_vars = rng.sample(range(1, nv + 1), k)
        assumptions = [v if rng.random() < 0.5 else -v for v in assumed_vars]
        expected = dpll_satisfiable(clauses, assumptions)
        s = CdclSolver(clauses)
        got = s.solve(assumptions)
        assert got == expected
        if not got:
            core = s.get_core()
            assert core <= set(assumptions)
            # Core soundness: re-solving with exactly the core stays UNSAT.
            assert s.solve(sorted(core)) is False
            assert not dpll_satisfiable(clauses, sorted(core))


def test_incremental_sequence_matches_oracle():
    rng = random.Random(31)
    for _ in range(40):
        nv = rng.randint(3, 8)
        s = CdclSolver()
        clauses = []
        for _ in range(rng.randint(3, 25)):
            clause = random_cnf(rng, nv, 1)[0]
            clauses.append(clause)
            s.add_clause(clause)
            k = rng.randint(0, 3)
            assumed_vars = rng.sample(range(1, nv + 1), min(k, nv))
            assumptions = [v if rng.random() < 0.5 else -v for v in assumed_vars]
            assert s.solve(assumptions) == dpll_satisfiable(clauses, assumptions)


def test_assumption_prefix_reuse_keeps_answers_correct():
    rng = random.Random(41)
    for _ in range(20):
        nv = 10
        clauses = random_cnf(rng, nv, 25)
        s = CdclSolver(clauses)
        base = [v if rng.random() < 0.5 else -v for v in range(1, 6)]
        for _ in range(30):
            tail_vars = rng.sample(range(6, nv + 1), rng.randint(0, 4))
            tail = [v if rng.random() < 0.5 else -v for v in tail_vars]
            assumptions = base + tail
            assert s.solve(assumptions) == dpll_satisfiable(clauses, assumptions)


def test_deterministic_repeated_runs():
    rng = random.Random(57)
    clauses = random_cnf(rng, 12, 40)

    def run():
        s = CdclSolver(clauses)
        outcomes = []
        for v in range(1, 13):
            if s.solve([v]):
                outcomes.append(tuple(sorted(s.get_model(12).items())))
            else:
                outcomes.append(tuple(sorted(s.get_core())))
        return outcomes

    assert run() == run()


def test_stats_are_counted():
    s = CdclSolver([[1, 2], [-1, 2]])
    s.solve([])
    assert s.stats.solves == 1


def test_solve_result_wrapper():
    s = CdclSolver([[1, 2]])
    result = s.solve_result([-1])
    assert result.satisfiable and result.model[2] is True and result.core is None
    result = s.solve_result([-1, -2])
    assert not result.satisfiable and result.model is None
    assert result.core <= {-1, -2}


def test_result_accessors_guard_state():
    import pytest

    s = CdclSolver([[1]])
    with pytest.raises(RuntimeError):
        s.get_core()
    assert s.solve([])
    with pytest.raises(RuntimeError):
        s.get_core()
    assert not s.solve([-1])
    with pytest.raises(RuntimeError):
        s.get_model()
