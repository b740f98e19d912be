import numpy as np
import pytest

from qamnet import (
    CapacityError,
    InputPattern,
    MemorySet,
    Pattern,
    ValidationError,
    gamma_bound_coupling,
    gamma_bound_projector,
    perturbation_report,
    similarity_ranking,
    verify_bound_brute_force,
)
from qamnet.analysis import bound_grid, exact_ground_state, exact_pattern_probabilities
from qamnet.patterns import hamming_distance

import oracles

FIG3_MEM = MemorySet(tuple(Pattern(p) for p in oracles.FIG3_MEMORY))
FIG3_INP = InputPattern(oracles.FIG3_INPUT)


def test_coupling_bound_examples():
    assert gamma_bound_coupling(2, 1) == 0.75
    assert gamma_bound_coupling(7, 7) == 0.5
    assert gamma_bound_coupling(100, 1) == pytest.approx(0.995)
    with pytest.raises(ValidationError):
        gamma_bound_coupling(3, 4)


def test_projector_bound_examples():
    assert gamma_bound_projector(5) == pytest.approx(0.1)
    assert gamma_bound_projector(1) == 0.5
    assert gamma_bound_projector(10) == pytest.approx(0.05)
    with pytest.raises(ValidationError):
        gamma_bound_projector(0)


def test_bound_grid_strictly_inside():
    g = bound_grid(0.75)
    assert len(g) == 10
    assert 0 < min(g) and max(g) < 0.75


def test_brute_force_two_qubit_example():
    mem = MemorySet((Pattern((-1, 1)),))
    rep = verify_bound_brute_force(mem, InputPattern((-1, 0)), "coupling",
                                   [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7])
    assert rep.ok
    assert rep.gamma_upper == 0.75
    assert len(rep.checked) == 7


def test_brute_force_projector_fig3_example():
    rep = verify_bound_brute_force(FIG3_MEM, FIG3_INP, "projector_a", [0.05])
    assert rep.ok


def test_brute_force_finds_witness_above_bound():
    mem = MemorySet((Pattern((1, 1)),))
    inp = InputPattern((1, -1))  # equidistant from the pattern and its reversal
    assert verify_bound_brute_force(mem, inp, "coupling").ok
    rep = verify_bound_brute_force(mem, inp, "coupling", [0.2, 0.9])
    assert not rep.ok
    assert rep.witness_gamma == 0.9
    assert rep.witness.values == (1, -1)
    assert rep.checked == (0.2, 0.9)
    with pytest.raises(ValidationError):
        verify_bound_brute_force(mem, inp, "coupling", [-0.1])


def test_brute_force_refusals():
    two = MemorySet((Pattern((1, 1)), Pattern((-1, 1))))
    with pytest.raises(ValidationError):
        verify_bound_brute_force(two, InputPattern((1, 0)), "coupling")
    with pytest.raises(ValidationError):
        verify_bound_brute_force(two, InputPattern((1, 0)), "projector_b")
    big = MemorySet((Pattern((1,) * 13),))
    with pytest.raises(CapacityError):
        verify_bound_brute_force(big, InputPattern((1,) * 13), "projector_a")


def test_perturbation_report_fig3():
    rep = perturbation_report(FIG3_MEM, FIG3_INP, 0.1)
    assert rep.hamming == (0, 1, 2)
    assert rep.mean_hamming == 1.0
    assert rep.deviations == (-1.0, 0.0, 1.0)
    assert rep.variance == pytest.approx(2 / 3)
    assert rep.e0_second == pytest.approx(-8 / 3)
    assert rep.e0_first == -3.0
    assert rep.first_order_probabilities == pytest.approx(oracles.FIG3_FIRST_ORDER_FROZEN, abs=1e-12)
    assert "normalization" in rep.to_json()


def test_equidistant_patterns_get_equal_amplitudes():
    mem = MemorySet((Pattern((1, -1, -1)), Pattern((-1, 1, -1)), Pattern((-1, -1, 1))))
    rep = perturbation_report(mem, InputPattern((-1, -1, -1)), 0.1)
    assert len(set(rep.first_order_amplitudes)) == 1


def test_similarity_ranking_examples():
    ranked = similarity_ranking(FIG3_MEM, FIG3_INP, 0.1)
    assert [p for p, _ in ranked] == list(FIG3_MEM.patterns)
    assert [q for _, q in ranked] == pytest.approx(oracles.FIG3_EXACT_FROZEN, abs=1e-9)
    flat = similarity_ranking(FIG3_MEM, FIG3_INP, 0.0)
    assert [q for _, q in flat] == pytest.approx([1 / 3] * 3)
    one = MemorySet((Pattern((1, -1, 1, 1)),))
    assert similarity_ranking(one, InputPattern((1, 1, 1, 0)), 0.1)[0][1] == pytest.approx(1.0)
    first = similarity_ranking(FIG3_MEM, FIG3_INP, 0.1, method="first_order")
    assert [q for _, q in first] == pytest.approx(oracles.FIG3_FIRST_ORDER_FROZEN)
    with pytest.raises(ValidationError):
        similarity_ranking(FIG3_MEM, FIG3_INP, 0.1, method="bogus")


def test_exact_ground_state_matches_oracle():
    energy, psi = exact_ground_state(FIG3_MEM, FIG3_INP, 0.1)
    assert energy == pytest.approx(oracles.FIG3_ENERGY_FROZEN, abs=1e-12)
    assert np.sum(np.abs(psi) ** 2) == pytest.approx(1.0)
    assert exact_pattern_probabilities(FIG3_MEM, FIG3_INP, 0.1) == pytest.approx(
        oracles.fig3_reference()[1], abs=1e-12)


def test_ranking_monotone_in_hamming_distance():
    rng = np.random.default_rng(17)
    checked = 0
    while checked < 40:
        N = int(rng.integers(2, 9))
        p = int(rng.integers(2, 5))
        rows = {tuple(int(v) for v in rng.choice((-1, 1), N)) for _ in range(p)}
        mem = MemorySet(tuple(Pattern(r) for r in sorted(rows)))
        inp = InputPattern(tuple(int(v) for v in rng.choice((-1, 0, 1), N)))
        if inp.n == 0:
            continue
        gamma = 0.5 * gamma_bound_projector(inp.n) * rng.uniform(0.2, 1.0)
        probs = exact_pattern_probabilities(mem, inp, gamma)
        h = [hamming_distance(inp, x, restrict_to_known=True) for x in mem]
        for a in range(mem.p):
            for b in range(mem.p):
                if h[a] < h[b]:
                    assert probs[a] > probs[b]
        checked += 1
