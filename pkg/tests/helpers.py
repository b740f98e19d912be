"""Random spec generators and engine-side propagators shared by several tests."""

import numpy as np

from qamnet import HamiltonianSpec, OperatorTerm, StateVector, trotter_step
from qamnet.quantum import basis_state

TROTTER_TIME = 1.0
TROTTER_STEPS = (8, 16, 32, 64, 128, 256)


def random_unit(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_spec(rng, max_qubits=3):
    """Spec mixing all three term kinds in both driver and problem."""
    N = int(rng.integers(1, max_qubits + 1))
    dim = 2**N
    driver = [OperatorTerm.transverse(rng.uniform(-1, 1, N))]
    if rng.random() < 0.5:
        driver.append(OperatorTerm.diagonal(rng.uniform(-1, 1, dim)))
    if rng.random() < 0.5:
        driver.append(OperatorTerm.projector(random_unit(rng, dim), rng.uniform(0.2, 1.0)))
    problem = [OperatorTerm.diagonal(rng.uniform(-1, 1, dim))]
    if rng.random() < 0.7:
        problem.append(OperatorTerm.projector(random_unit(rng, dim), rng.uniform(0.2, 1.0)))
    if rng.random() < 0.3:
        problem.append(OperatorTerm.transverse(rng.uniform(-0.5, 0.5, N)))
    return HamiltonianSpec(N, tuple(driver), tuple(problem)), float(rng.uniform(0.2, 2.0))


def trotter_propagator(spec, lam, t, steps):
    """Columns of the engine's product formula applied to every basis state."""
    dim = 2**spec.n_qubits
    U = np.zeros((dim, dim), dtype=complex)
    dt = t / steps
    for k in range(dim):
        psi = basis_state(k, spec.n_qubits)
        for _ in range(steps):
            psi = trotter_step(psi, spec, lam, dt)
        U[:, k] = psi.amplitudes
    return U


def evolve(state: StateVector, spec, lam, t, steps):
    dt = t / steps
    for _ in range(steps):
        state = trotter_step(state, spec, lam, dt)
    return state


def fitted_order(dts, errors):
    slope, _ = np.polyfit(np.log(dts), np.log(errors), 1)
    return float(slope)
