import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qamnet import (
    CapacityError,
    HamiltonianSpec,
    MeasurementDistribution,
    OperatorTerm,
    StateVector,
    ValidationError,
    apply_term_exponential,
    build_standard_driver,
    dense_oracle,
    measurement_distribution,
    overlap,
    sample_outcomes,
    trotter_step,
    uniform_state,
)
from qamnet.quantum import basis_state, dense_matrix, dense_propagator

import helpers
import oracles


def test_uniform_state_examples():
    assert np.allclose(uniform_state(2).amplitudes, [0.5] * 4)
    assert np.allclose(uniform_state(1).amplitudes, [1 / math.sqrt(2)] * 2)


def test_state_vector_never_renormalizes():
    with pytest.raises(ValidationError):
        StateVector(np.array([1.0, 1.0]))
    s = StateVector.from_json(uniform_state(3).to_json())
    assert np.array_equal(s.amplitudes, uniform_state(3).amplitudes)


def test_apply_exponential_examples():
    s = uniform_state(2)
    for t in (OperatorTerm.diagonal([1, 2, 3, 4]), OperatorTerm.transverse([1, 0.5]),
              OperatorTerm.projector(np.array([0, 1, 0, 0]))):
        assert np.allclose(apply_term_exponential(s, t, 0.0).amplitudes, s.amplitudes)
    out = apply_term_exponential(basis_state(0, 1), OperatorTerm.transverse([1.0]), math.pi / 2)
    assert np.allclose(out.amplitudes, [0, -1j])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(-3, 3))
def test_term_exponentials_match_dense(seed, theta):
    rng = np.random.default_rng(seed)
    spec, _ = helpers.random_spec(rng)
    psi = StateVector(helpers.random_unit(rng, 2**spec.n_qubits))
    for term in spec.driver + spec.problem:
        got = apply_term_exponential(psi, term, theta)
        U = oracles.expm_hermitian(dense_matrix(HamiltonianSpec(spec.n_qubits, (), (term,)), 0.0), theta)
        assert np.allclose(got.amplitudes, U @ psi.amplitudes, atol=1e-12)
        assert abs(got.norm - 1.0) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 4))
def test_trotter_step_unit_norm(seed, substeps):
    rng = np.random.default_rng(seed)
    spec, lam = helpers.random_spec(rng)
    psi = StateVector(helpers.random_unit(rng, 2**spec.n_qubits))
    out = trotter_step(psi, spec, lam, 0.3, substeps)
    assert abs(out.norm - 1.0) < 1e-10
    assert abs(measurement_distribution(out).probabilities.sum() - 1.0) < 1e-10


def test_diagonal_only_evolution_is_exact():
    rng = np.random.default_rng(0)
    d = rng.normal(size=8)
    spec = HamiltonianSpec(3, (), (OperatorTerm.diagonal(d),))
    psi = StateVector(helpers.random_unit(rng, 8))
    out = trotter_step(psi, spec, 0.0, 0.7)
    assert np.allclose(out.amplitudes, np.exp(-0.7j * d) * psi.amplitudes, atol=1e-15)
    assert np.allclose(measurement_distribution(out).probabilities,
                       measurement_distribution(psi).probabilities, atol=1e-15)


def test_substeps_equal_repeated_steps():
    rng = np.random.default_rng(5)
    spec, lam = helpers.random_spec(rng)
    psi = StateVector(helpers.random_unit(rng, 2**spec.n_qubits))
    a = trotter_step(psi, spec, lam, 0.4, substeps=4)
    b = helpers.evolve(psi, spec, lam, 0.4, 4)
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-13)


def test_trotter_converges_to_dense_propagator():
    rng = np.random.default_rng(11)
    spec, lam = helpers.random_spec(rng)
    U = dense_propagator(spec, lam, 1.0)
    errs = [np.linalg.norm(helpers.trotter_propagator(spec, lam, 1.0, n) - U, 2) for n in (8, 16, 32, 64)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert helpers.fitted_order([1 / 8, 1 / 16, 1 / 32, 1 / 64], errs) == pytest.approx(2.0, abs=0.2)


def test_measurement_distribution_examples():
    assert np.allclose(measurement_distribution(uniform_state(2)).probabilities, 0.25)
    s = StateVector(np.array([0, 1, 1, 0]) / math.sqrt(2))
    d = measurement_distribution(s)
    assert d.probability(d.labels[1]) == pytest.approx(0.5)
    assert d.labels[1].values == (-1, 1) and d.labels[2].values == (1, -1)
    assert measurement_distribution(basis_state(3, 2)).probabilities.tolist() == [0, 0, 0, 1]


def test_sample_outcomes():
    certain = measurement_distribution(basis_state(2, 2))
    assert sample_outcomes(certain, 500, seed=3) == {2: 500}
    half = MeasurementDistribution(np.array([0, 0.5, 0.5, 0]))
    hist = sample_outcomes(half, 10**5, seed=42)
    assert set(hist) == {1, 2}
    for k in (1, 2):
        assert abs(hist[k] / 10**5 - 0.5) <= 0.01
    assert sample_outcomes(half, 1000, seed=9) == sample_outcomes(half, 1000, seed=9)
    with pytest.raises(ValidationError):
        sample_outcomes(half, 0)


def test_overlap_examples():
    assert overlap(basis_state(0, 2), basis_state(3, 2)) == 0
    assert overlap(uniform_state(2), basis_state(1, 2)) == pytest.approx(0.25)


def test_dense_oracle_examples():
    d = np.array([3.0, -1.0, 2.0, 0.5])
    s = dense_oracle(HamiltonianSpec(2, (), (OperatorTerm.diagonal(d),)), 0.0)
    assert np.allclose(s.eigenvalues, np.sort(d))
    s = dense_oracle(HamiltonianSpec(2, build_standard_driver(2), ()), 1.0)
    assert np.allclose(s.eigenvalues, [0, 1, 1, 2])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_dense_matrix_is_hermitian(seed):
    rng = np.random.default_rng(seed)
    spec, lam = helpers.random_spec(rng)
    H = dense_oracle(spec, lam).matrix
    assert np.max(np.abs(H - H.conj().T)) <= 1e-12


def test_dense_capacity_guard():
    n = 13
    spec = HamiltonianSpec(n, (OperatorTerm.transverse(np.ones(n)),), ())
    with pytest.raises(CapacityError):
        dense_oracle(spec, 1.0)
