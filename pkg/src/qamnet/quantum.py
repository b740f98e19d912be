"""State-vector engine with exact per-term exponentials and Strang splitting.

The dense oracle at the bottom of this module is an independent code path
(explicit Kronecker products plus ``numpy.linalg.eigh``) used to check the
structured engine; no engine code calls into it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import CapacityError, DimensionError, ValidationError
from .hamiltonian import DIAGONAL, PROJECTOR, TRANSVERSE, HamiltonianSpec, OperatorTerm
from .patterns import Pattern, index_to_pattern, pattern_to_index

__all__ = [
    "NORM_TOL",
    "MAX_DENSE_QUBITS",
    "StateVector",
    "MeasurementDistribution",
    "DenseSpectrum",
    "uniform_state",
    "basis_state",
    "apply_term_exponential",
    "trotter_step",
    "measurement_distribution",
    "sample_outcomes",
    "overlap",
    "dense_matrix",
    "dense_oracle",
    "dense_propagator",
]

NORM_TOL = 1e-10
MAX_DENSE_QUBITS = 12


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm vector of 2^N complex amplitudes. Never renormalized silently."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).ravel()
        N = int(round(math.log2(a.size))) if a.size else 0
        if N < 1 or 2**N != a.size:
            raise DimensionError(f"{a.size} amplitudes is not 2^N for N >= 1")
        norm = float(np.vdot(a, a).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm^2 {norm!r} deviates from 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.amplitudes.size)))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def to_json(self) -> list:
        return [[z.real, z.imag] for z in self.amplitudes.tolist()]

    @classmethod
    def from_json(cls, pairs) -> "StateVector":
        return cls(np.array([complex(re, im) for re, im in pairs]))


@dataclass(frozen=True, eq=False)
class MeasurementDistribution:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float).ravel()
        if np.any(p < -NORM_TOL):
            raise ValidationError("negative probability")
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.probabilities.size)))

    @property
    def labels(self) -> list:
        return [index_to_pattern(k, self.n_qubits) for k in range(self.probabilities.size)]

    def probability(self, pattern: Pattern) -> float:
        return float(self.probabilities[pattern_to_index(pattern)])

    def to_json(self) -> dict:
        return {
            "probabilities": self.probabilities.tolist(),
            "labels": [lab.to_json() for lab in self.labels],
        }


def uniform_state(N: int) -> StateVector:
    """The empty-memory state 2^{-N/2} sum_k |k>."""
    if N < 1:
        raise ValidationError("N must be positive")
    return StateVector(np.full(2**N, 2.0 ** (-N / 2), dtype=complex))


def basis_state(index: int, N: int) -> StateVector:
    if not 0 <= index < 2**N:
        raise DimensionError(f"index {index} out of range for {N} qubits")
    a = np.zeros(2**N, dtype=complex)
    a[index] = 1.0
    return StateVector(a)


# -- array kernels ---------------------------------------------------------

class _Factor(NamedTuple):
    kind: str
    values: np.ndarray
    coefficient: float = 1.0


def _merge(terms) -> list:
    """Collapse commuting diagonal and transverse pieces into single factors."""
    diag = None
    trans = None
    projectors = []
    for t in terms:
        if t.kind == DIAGONAL:
            diag = t.values if diag is None else diag + t.values
        elif t.kind == TRANSVERSE:
            trans = t.values if trans is None else trans + t.values
        else:
            projectors.append(_Factor(PROJECTOR, t.values, t.coefficient))
    out = []
    if trans is not None:
        out.append(_Factor(TRANSVERSE, trans))
    out.extend(projectors)
    if diag is not None:
        out.append(_Factor(DIAGONAL, diag))
    return out


class _Splitter:
    """Precomputed factor layout of a spec; ``factors(lam)`` is cheap per step.

    Order: driver pieces, non-diagonal problem pieces, then one diagonal that
    folds the diagonal driver part into the diagonal problem (they commute),
    so a transverse driver over a diagonal problem gives the plain
    driver/2 - problem - driver/2 product.
    """

    def __init__(self, spec: HamiltonianSpec):
        self.driver = _merge([t for t in spec.driver if t.kind != DIAGONAL])
        self.problem = _merge([t for t in spec.problem if t.kind != DIAGONAL])
        dim = 2**spec.n_qubits
        self.diag_driver = sum((t.values for t in spec.driver if t.kind == DIAGONAL), np.zeros(dim))
        self.diag_problem = sum((t.values for t in spec.problem if t.kind == DIAGONAL), np.zeros(dim))
        self.has_diag = any(t.kind == DIAGONAL for t in spec.driver + spec.problem)

    def factors(self, lam: float) -> list:
        out = []
        if lam != 0.0:
            for f in self.driver:
                if f.kind == PROJECTOR:
                    out.append(_Factor(PROJECTOR, f.values, f.coefficient * lam))
                else:
                    out.append(_Factor(f.kind, f.values * lam))
        out.extend(self.problem)
        if self.has_diag:
            out.append(_Factor(DIAGONAL, self.diag_problem + lam * self.diag_driver))
        return out


def _split_factors(spec: HamiltonianSpec, lambda_val: float) -> list:
    return _Splitter(spec).factors(lambda_val)


@lru_cache(maxsize=32)
def _flip_indices(N: int) -> tuple:
    """Index permutations applying sigma^x on each qubit (qubit 0 is the MSB)."""
    k = np.arange(2**N)
    return tuple(k ^ (1 << (N - 1 - q)) for q in range(N))


def _kernel(f, theta: float):
    """Precompute exp(-i theta f) as a callable on amplitude arrays."""
    if f.kind == DIAGONAL:
        phase = np.exp(-1j * theta * f.values)
        return lambda psi: psi * phase
    if f.kind == TRANSVERSE:
        flips = _flip_indices(f.values.size)
        rot = [(flips[q], math.cos(theta * a), -1j * math.sin(theta * a))
               for q, a in enumerate(f.values) if a != 0.0]

        def apply(psi):
            for idx, c, s in rot:
                psi = c * psi + s * psi[idx]
            return psi
        return apply
    v = f.values
    phase = complex(np.exp(-1j * theta * f.coefficient))

    def apply(psi):
        amp = np.vdot(v, psi)
        return phase * (psi - amp * v) + amp * v
    return apply


def _strang(psi: np.ndarray, factors: list, dt: float, substeps: int) -> np.ndarray:
    if not factors:
        return psi
    h = dt / substeps
    half = [_kernel(f, h / 2) for f in factors[:-1]]
    full = _kernel(factors[-1], h)
    for _ in range(substeps):
        for k in half:
            psi = k(psi)
        psi = full(psi)
        for k in reversed(half):
            psi = k(psi)
    return psi


# -- public engine ---------------------------------------------------------

def apply_term_exponential(state: StateVector, term: OperatorTerm, theta: float) -> StateVector:
    """Return exp(-i theta term)|state> computed exactly for the term kind."""
    if term.n_qubits != state.n_qubits:
        raise DimensionError(f"term on {term.n_qubits} qubits vs state on {state.n_qubits}")
    return StateVector(_kernel(term, theta)(state.amplitudes))


def trotter_step(state: StateVector, spec: HamiltonianSpec, lambda_val: float, dt: float,
                 substeps: int = 1) -> StateVector:
    """Advance by ``dt`` under the frozen H = lambda_val * driver + problem.

    Uses the second-order symmetric product, optionally subdivided into
    ``substeps`` equal pieces (each still symmetric).
    """
    if not dt > 0:
        raise ValidationError("dt must be positive")
    if substeps < 1:
        raise ValidationError("substeps must be positive")
    if spec.n_qubits != state.n_qubits:
        raise DimensionError(f"spec on {spec.n_qubits} qubits vs state on {state.n_qubits}")
    factors = _split_factors(spec, lambda_val)
    return StateVector(_strang(state.amplitudes, factors, dt, substeps))


def measurement_distribution(state: StateVector) -> MeasurementDistribution:
    return MeasurementDistribution(np.abs(state.amplitudes) ** 2)


def sample_outcomes(dist: MeasurementDistribution, shots: int, seed: int = 0) -> dict:
    """Histogram ``{basis index: count}`` of ``shots`` seeded projective readouts."""
    if shots < 1:
        raise ValidationError("shots must be positive", field="shots")
    p = np.clip(dist.probabilities, 0.0, None)
    counts = np.random.default_rng(seed).multinomial(shots, p / p.sum())
    return {int(k): int(c) for k, c in enumerate(counts) if c}


def overlap(a: StateVector, b: StateVector) -> float:
    """Pure-state fidelity |<a|b>|^2."""
    if a.amplitudes.size != b.amplitudes.size:
        raise DimensionError("states of different dimension")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2))


# -- dense oracle ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DenseSpectrum:
    matrix: np.ndarray
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns

    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    def top_state(self) -> np.ndarray:
        return self.eigenvectors[:, -1]


_SX = np.array([[0.0, 1.0], [1.0, 0.0]])


def _dense_term(term: OperatorTerm) -> np.ndarray:
    if term.kind == DIAGONAL:
        return np.diag(term.values).astype(complex)
    if term.kind == TRANSVERSE:
        N = term.values.size
        out = np.zeros((2**N, 2**N), dtype=complex)
        for q, a in enumerate(term.values):
            op = np.array([[1.0]])
            for j in range(N):
                op = np.kron(op, _SX if j == q else np.eye(2))
            out += a * op
        return out
    v = term.values.reshape(-1, 1)
    return term.coefficient * (np.eye(v.size) - v @ v.conj().T)


def _guard(N: int):
    if N > MAX_DENSE_QUBITS:
        raise CapacityError(f"dense oracle limited to {MAX_DENSE_QUBITS} qubits, got {N}")


def dense_matrix(spec: HamiltonianSpec, lambda_val: float) -> np.ndarray:
    _guard(spec.n_qubits)
    dim = 2**spec.n_qubits
    H = np.zeros((dim, dim), dtype=complex)
    for t in spec.driver:
        H += lambda_val * _dense_term(t)
    for t in spec.problem:
        H += _dense_term(t)
    return H


def dense_oracle(spec: HamiltonianSpec, lambda_val: float) -> DenseSpectrum:
    """Materialize H = lambda * driver + problem and fully diagonalize it."""
    H = dense_matrix(spec, lambda_val)
    evals, evecs = np.linalg.eigh(H)
    return DenseSpectrum(H, evals, evecs)


def dense_propagator(spec: HamiltonianSpec, lambda_val: float, t: float) -> np.ndarray:
    """exp(-i t H) from the eigendecomposition of the dense matrix."""
    s = dense_oracle(spec, lambda_val)
    V = s.eigenvectors
    return (V * np.exp(-1j * t * s.eigenvalues)) @ V.conj().T
