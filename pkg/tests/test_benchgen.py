import pytest

from mbdkit.benchgen import (
    C17_NETLIST,
    CyclicNetlistError,
    EncoderParams,
    Netlist,
    encode_netlist,
    gen_buggy_encoder,
    gen_c17,
    gen_random_instance,
    per_observation_diagnosis_count,
)
from mbdkit.mcs import enumerate_mcs, extract_mcs
from mbdkit.system import (
    ConsistencyChecker,
    brute_force_diagnoses,
    observation_wcnf,
)

from oracles import brute_force_mcses, simulate_gates


def sizes(r, k):
    sd, observations = gen_buggy_encoder(EncoderParams(r=r, k=k))
    return sd.num_system_vars, len(sd.clauses), len(sd.components), len(observations)


def test_encoder_size_examples():
    assert sizes(10, 10) == (49, 55, 42, 10)
    assert sizes(100, 100) == (409, 505, 402, 100)


def test_encoder_size_formulas_on_grid_sample():
    for r in (10, 50, 150, 300):
        for k in (2, 5, 9, 10, 150, 300):
            v, c, m, nobs = sizes(r, k)
            assert v == r + 3 * k + 9
            assert c == r + 4 * k + 5
            assert m == 4 * k + 2
            assert nobs == r


def test_encoder_rejects_degenerate_parameters():
    with pytest.raises(ValueError):
        EncoderParams(r=1, k=2)
    with pytest.raises(ValueError):
        EncoderParams(r=2, k=0)


def test_every_observation_is_failing():
    sd, observations = gen_buggy_encoder(EncoderParams(r=4, k=2))
    checker = ConsistencyChecker(sd)
    for obs in observations:
        assert not checker.check(frozenset(), obs)


def test_per_observation_counts_match_brute_force():
    # The closed form needs both sink branches populated, hence k >= 2
    # (matching the smallest k in the evaluation grid).
    for k in (2, 3):
        sd, observations = gen_buggy_encoder(EncoderParams(r=3, k=k))
        cap = len(sd.components)
        for obs in observations[:-1]:
            got = brute_force_diagnoses(sd, [obs], cap=cap)
            assert len(got) == per_observation_diagnosis_count(k)
        last = brute_force_diagnoses(sd, [observations[-1]], cap=cap)
        assert last == {frozenset({4 * k + 1, 4 * k + 2})}


def test_k1_degenerates_to_single_chain_conflict():
    # With one chain there are no even-branch repairs: the five singletons
    # from the lone conflict are the only minimal diagnoses.
    sd, observations = gen_buggy_encoder(EncoderParams(r=3, k=1))
    got = brute_force_diagnoses(sd, [observations[0]], cap=len(sd.components))
    assert got == {frozenset({c}) for c in (1, 2, 3, 4, 5)}


def test_combined_diagnosis_is_the_two_final_components():
    sd, observations = gen_buggy_encoder(EncoderParams(r=3, k=2))
    assert brute_force_diagnoses(sd, observations) == {frozenset({9, 10})}


def test_final_observation_mcs_is_the_two_final_soft_clauses():
    sd, observations = gen_buggy_encoder(EncoderParams(r=3, k=2))
    instance = observation_wcnf(sd, observations[-1])
    result = extract_mcs(instance)
    assert result.mcs == {8, 9}  # 0-based soft indices of components 9 and 10
    oracle = brute_force_mcses(instance.hard.clauses, instance.soft)
    assert oracle == {frozenset({8, 9})}


def test_first_observation_mcs_count_k2():
    sd, observations = gen_buggy_encoder(EncoderParams(r=3, k=2))
    instance = observation_wcnf(sd, observations[0])
    count, exhausted = enumerate_mcs(instance)
    assert exhausted
    assert count == 25


def test_padding_changes_sizes_but_not_diagnoses():
    plain_sd, observations = gen_buggy_encoder(EncoderParams(r=3, k=1))
    padded_sd, padded_obs = gen_buggy_encoder(
        EncoderParams(r=3, k=1, padding_hard=3, padding_soft=2, seed=5)
    )
    assert [o.units for o in observations] == [p.units for p in padded_obs]
    assert padded_sd.num_system_vars == plain_sd.num_system_vars + 10
    assert len(padded_sd.clauses) == len(plain_sd.clauses) + 5
    assert len(padded_sd.components) == len(plain_sd.components) + 2
    plain = brute_force_diagnoses(plain_sd, observations)
    padded = brute_force_diagnoses(padded_sd, padded_obs, cap=len(padded_sd.components))
    assert plain == padded


def test_padding_is_seed_deterministic():
    a = gen_buggy_encoder(EncoderParams(r=3, k=1, padding_hard=2, seed=9))
    b = gen_buggy_encoder(EncoderParams(r=3, k=1, padding_hard=2, seed=9))
    assert a[0] == b[0]


def test_c17_shape_and_observation_15():
    sd, observations = gen_c17()
    assert len(sd.components) == 6
    assert len(observations) == 5
    assert sd.component_names == ("z1", "z2", "z3", "z4", "o1", "o2")
    by_id = {o.id: o for o in observations}
    assert by_id[15].units == (1, -2, -3, -4, -5, 10, -11)


def test_c17_observations_fail_against_simulation():
    sd, observations = gen_c17()
    gates = list(C17_NETLIST.gates)
    for obs in observations:
        inputs = {f"i{n}": (n in {abs(u) for u in obs.units if u > 0 and abs(u) <= 5})
                  for n in range(1, 6)}
        values = simulate_gates(inputs, gates)
        observed_o1 = 10 in {u for u in obs.units}
        observed_o2 = 11 in {u for u in obs.units}
        assert (values["o1"], values["o2"]) != (observed_o1, observed_o2)


def test_buff_gate_encodes_two_guarded_clauses():
    nl = Netlist(inputs=("i",), outputs=("o",), gates=(("o", "BUFF", ("i",)),))
    sd = encode_netlist(nl)
    assert len(sd.clauses) == 2
    ab = sd.ab_literal[1]
    for clause in sd.clauses:
        assert clause[-1] == ab


def test_nand_gate_encodes_three_clauses():
    nl = Netlist(inputs=("a", "b"), outputs=("o",), gates=(("o", "NAND", ("a", "b")),))
    sd = encode_netlist(nl)
    assert len(sd.clauses) == 3


def test_c17_netlist_reencodes_identically():
    rebuilt = Netlist(
        inputs=tuple(C17_NETLIST.inputs),
        outputs=tuple(C17_NETLIST.outputs),
        gates=tuple(C17_NETLIST.gates),
    )
    assert encode_netlist(rebuilt) == gen_c17()[0]


def test_cyclic_netlist_is_rejected_with_cycle():
    nl = Netlist(
        inputs=("i",),
        outputs=("a",),
        gates=(("a", "AND", ("i", "b")), ("b", "BUFF", ("a",))),
    )
    with pytest.raises(CyclicNetlistError) as err:
        encode_netlist(nl)
    assert "a" in str(err.value) and "b" in str(err.value)


def test_gate_semantics_against_simulation():
    import itertools

    for kind in ("AND", "NAND", "OR", "NOR", "XOR", "XNOR"):
        nl = Netlist(inputs=("a", "b"), outputs=("o",), gates=(("o", kind, ("a", "b")),))
        sd = encode_netlist(nl)
        checker = ConsistencyChecker(sd)
        from mbdkit.system import Observation

        for a, b in itertools.product((0, 1), repeat=2):
            values = simulate_gates({"a": bool(a), "b": bool(b)}, list(nl.gates))
            want = values["o"]
            units = (1 if a else -1, 2 if b else -2, 3 if want else -3)
            assert checker.check(frozenset(), Observation(1, units))
            bad = (1 if a else -1, 2 if b else -2, -3 if want else 3)
            assert not checker.check(frozenset(), Observation(2, bad))


def test_random_instance_is_seed_deterministic():
    a = gen_random_instance(5, 6, 2, seed=77)
    b = gen_random_instance(5, 6, 2, seed=77)
    assert a[0] == b[0]
    assert [o.units for o in a[1]] == [o.units for o in b[1]]


def test_random_instance_guarantees():
    for seed in range(30):
        sd, observations = gen_random_instance(6, 7, 3, seed=seed)
        checker = ConsistencyChecker(sd)
        everything = frozenset(sd.components)
        for obs in observations:
            assert not checker.check(frozenset(), obs)
            assert checker.check(everything, obs)


def test_random_instance_bounds():
    with pytest.raises(ValueError):
        gen_random_instance(13, 6, 2)
    with pytest.raises(ValueError):
        gen_random_instance(5, 6, 5)
