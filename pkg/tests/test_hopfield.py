import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qamnet import (
    MemorySet,
    NonTerminationError,
    Pattern,
    ValidationError,
    WeightMatrix,
    hebbian_weights,
    hopfield_energy,
    recall,
    update_async,
    update_sync,
)
from qamnet.hopfield import HopfieldState
from qamnet.patterns import basis_patterns

W_NEG = WeightMatrix.two_qubit(-1.0)


def random_pattern(rng, N):
    return Pattern(tuple(int(v) for v in rng.choice((-1, 1), N)))


def test_async_hand_simulation():
    out = update_async(HopfieldState(Pattern((1, 1))), W_NEG, (0, 1))
    assert out.spins.values == (-1, 1)
    assert out.time_step == 1


def test_async_zero_weights_keep_state():
    s = HopfieldState(Pattern((1, -1, 1)))
    assert update_async(s, WeightMatrix(np.zeros((3, 3))), (2, 0, 1)).spins == s.spins
    assert update_sync(s, WeightMatrix(np.zeros((3, 3)))).spins == s.spins


def test_async_rejects_bad_order():
    with pytest.raises(ValidationError):
        update_async(HopfieldState(Pattern((1, 1))), W_NEG, (0, 0))


def test_sync_hand_simulation_and_two_cycle():
    s = HopfieldState(Pattern((1, 1)))
    once = update_sync(s, W_NEG)
    assert once.spins.values == (-1, -1)
    assert update_sync(once, W_NEG).spins.values == (1, 1)


@pytest.mark.parametrize("N", range(1, 11))
def test_stored_pattern_is_fixed_point(N):
    rng = np.random.default_rng(100 + N)
    x = random_pattern(rng, N)
    w = hebbian_weights(MemorySet((x,)))
    for _ in range(5):
        assert update_async(HopfieldState(x), w, rng.permutation(N)).spins == x
    assert update_sync(HopfieldState(x), w).spins == x


@pytest.mark.parametrize("seed", range(8))
def test_recall_two_neuron_async(seed):
    out = recall(Pattern((1, 1)), W_NEG, "async", seed=seed)
    assert out.kind == "fixed_point"
    assert out.final.values in {(-1, 1), (1, -1)}


def test_recall_stored_input_is_immediate():
    x = Pattern((1, -1, -1, 1))
    out = recall(x, hebbian_weights(MemorySet((x,))))
    assert out.kind == "fixed_point"
    assert len(out.trajectory) == 1
    assert out.final == x


def test_recall_sync_cycle():
    out = recall(Pattern((1, 1)), W_NEG, "sync")
    assert out.kind == "cycle"
    assert out.period == 2
    assert out.to_json()["trajectory"] == [[1, 1], [-1, -1]]


def test_recall_nontermination_carries_trajectory():
    with pytest.raises(NonTerminationError) as exc:
        recall(Pattern((1, 1)), W_NEG, "sync", max_iters=1)
    assert len(exc.value.trajectory) == 2


def _random_weights(rng, N):
    mem = set()
    while len(mem) < rng.integers(1, 4):
        mem.add(random_pattern(rng, N))
    return hebbian_weights(MemorySet(tuple(sorted(mem, key=lambda p: p.values))))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**31 - 1))
def test_async_energy_non_increasing(N, seed):
    rng = np.random.default_rng(seed)
    w = _random_weights(rng, N)
    out = recall(random_pattern(rng, N), w, "async", seed=seed)
    energies = [hopfield_energy(s.spins, w) for s in out.trajectory]
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))
    assert out.kind == "fixed_point"
    assert len(out.trajectory) <= 2**N


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**31 - 1))
def test_recall_spin_flip_symmetry(N, seed):
    rng = np.random.default_rng(seed)
    w = _random_weights(rng, N)
    x = random_pattern(rng, N)
    for mode in ("async", "sync"):
        a = recall(x, w, mode, seed=seed)
        b = recall(-x, w, mode, seed=seed)
        assert [(-s.spins) for s in a.trajectory] == [s.spins for s in b.trajectory]
        assert a.kind == b.kind and a.period == b.period


def test_async_exhaustive_termination_small():
    rng = np.random.default_rng(7)
    for N in (2, 3, 4, 5):
        w = _random_weights(rng, N)
        for s in basis_patterns(N):
            out = recall(Pattern(tuple(int(v) for v in s)), w, "async", max_iters=2**N, seed=1)
            assert out.kind == "fixed_point"
