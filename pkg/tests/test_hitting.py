import random

import pytest

from mbdkit.hitting import ExplanationStore, NoDiagnosisError, encode_at_most
from mbdkit.solver import CdclSolver

from oracles import brute_force_hitting_sets, min_hitting_set_size


def test_single_explanation_forces_its_component():
    store = ExplanationStore([1, 2, 3])
    store.add_explanation({1})
    store.add_explanation({2, 3})
    for mode in ("subset", "cardinality"):
        hs = store.next_min_hs(mode)
        assert 1 in hs


def test_binary_explanation_two_minimum_sets():
    store = ExplanationStore([1, 2])
    store.add_explanation({1, 2})
    assert store.next_min_hs("subset") in ({1}, {2})
    assert store.next_min_hs("cardinality") in ({1}, {2})


def test_empty_explanation_is_fatal():
    store = ExplanationStore([1])
    with pytest.raises(NoDiagnosisError):
        store.add_explanation(set())


def test_block_unique_hitting_set_exhausts():
    store = ExplanationStore([1])
    store.add_explanation({1})
    store.block_diagnosis({1})
    assert store.next_min_hs("subset") is None
    assert store.next_min_hs("cardinality") is None


def test_block_redirects_to_other_component():
    store = ExplanationStore([1, 2])
    store.add_explanation({1, 2})
    store.block_diagnosis({1})
    assert store.next_min_hs("subset") == {2}


def test_blocking_superset_closes_two_singletons():
    store = ExplanationStore([1, 2])
    store.add_explanation({1})
    store.add_explanation({2})
    store.block_diagnosis({1, 2})
    assert store.next_min_hs("subset") is None


def test_two_singletons_force_both():
    store = ExplanationStore([1, 2])
    store.add_explanation({1})
    store.add_explanation({2})
    assert store.next_min_hs("subset") == {1, 2}
    assert store.next_min_hs("cardinality") == {1, 2}


def test_shared_component_is_cardinality_minimum():
    store = ExplanationStore([1, 2, 3])
    store.add_explanation({1, 2})
    store.add_explanation({2, 3})
    assert store.next_min_hs("cardinality") == {2}


def test_blocked_minimum_moves_to_two_elements():
    store = ExplanationStore([1, 2, 3])
    store.add_explanation({1, 2})
    store.add_explanation({2, 3})
    store.block_diagnosis({2})
    hs = store.next_min_hs("cardinality")
    assert len(hs) == 2
    assert hs in ({1, 3}, {1, 2}, {2, 3})
    # brute force confirms the minimum unblocked size is 2
    assert min_hitting_set_size([1, 2, 3], [{1, 2}, {2, 3}], [{2}]) == 2


def random_family(rng, n_comps, n_sets):
    universe = list(range(1, n_comps + 1))
    sets = []
    for _ in range(n_sets):
        size = rng.randint(1, min(3, n_comps))
        sets.append(frozenset(rng.sample(universe, size)))
    return universe, sets


def test_subset_mode_deletion_check_and_oracle():
    rng = random.Random(13)
    for _ in range(60):
        universe, sets = random_family(rng, rng.randint(2, 8), rng.randint(1, 6))
        store = ExplanationStore(universe)
        for s in sets:
            store.add_explanation(s)
        hs = store.next_min_hs("subset")
        assert hs is not None
        assert all(hs & s for s in sets)
        for c in hs:
            reduced = hs - {c}
            assert any(not (reduced & s) for s in sets), "deletion check failed"


def test_enumeration_with_blocking_yields_all_minimal_hitting_sets():
    rng = random.Random(29)
    for _ in range(40):
        universe, sets = random_family(rng, rng.randint(2, 7), rng.randint(1, 5))
        store = ExplanationStore(universe)
        for s in sets:
            store.add_explanation(s)
        emitted = []
        while True:
            hs = store.next_min_hs("subset")
            if hs is None:
                break
            assert hs not in emitted
            emitted.append(hs)
            store.block_diagnosis(hs)
        assert set(emitted) == brute_force_hitting_sets(universe, sets)


def test_cardinality_mode_matches_brute_force_minimum():
    rng = random.Random(37)
    for _ in range(40):
        universe, sets = random_family(rng, rng.randint(2, 9), rng.randint(1, 6))
        store = ExplanationStore(universe)
        for s in sets:
            store.add_explanation(s)
        blocked = []
        last_size = 0
        while True:
            hs = store.next_min_hs("cardinality")
            expected = min_hitting_set_size(universe, sets, blocked)
            if hs is None:
                assert expected is None
                break
            assert len(hs) == expected
            assert len(hs) >= last_size, "emission sizes must be non-decreasing"
            last_size = len(hs)
            blocked.append(hs)
            store.block_diagnosis(hs)


def test_cardinality_monotone_under_new_explanations():
    rng = random.Random(41)
    universe = list(range(1, 9))
    store = ExplanationStore(universe)
    previous = 0
    for _ in range(10):
        size = rng.randint(1, 3)
        store.add_explanation(frozenset(rng.sample(universe, size)))
        hs = store.next_min_hs("cardinality")
        assert len(hs) >= previous
        previous = len(hs)


def test_duplicate_explanations_are_stored_once():
    store = ExplanationStore([1, 2])
    store.add_explanation({1, 2})
    store.add_explanation({2, 1})
    assert len(store.sets) == 1


def test_encode_at_most_is_exact():
    rng = random.Random(43)
    for _ in range(40):
        n = rng.randint(1, 6)
        bound = rng.randint(0, n)
        for want in range(n + 1):
            solver = CdclSolver(num_vars=n)
            lits = list(range(1, n + 1))
            encode_at_most(solver, lits, bound)
            # force exactly `want` variables true
            assumptions = [v if v <= want else -v for v in lits]
            assert solver.solve(assumptions) == (want <= bound)
