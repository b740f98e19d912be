"""Structured Hamiltonians built from exactly exponentiable terms.

A Hamiltonian is kept as lists of :class:`OperatorTerm` rather than a dense
matrix. Three term kinds exist:

* ``diagonal``: real energies, one per computational basis state
* ``transverse_field``: sum_i a_i sigma^x_i
* ``rank_one_projector``: c (1 - |v><v|)

The instantaneous Hamiltonian of an annealing run is
``H(s) = Lambda(s) * sum(driver) + sum(problem)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError
from .patterns import InputPattern, MemorySet, WeightMatrix, z_eigenvalues

__all__ = [
    "DIAGONAL",
    "TRANSVERSE",
    "PROJECTOR",
    "OperatorTerm",
    "HamiltonianSpec",
    "NmrConfig",
    "build_memory_coupling",
    "build_input_hamiltonian",
    "build_projector_memory_a",
    "build_memory_state",
    "build_projector_memory_b",
    "build_problem",
    "build_standard_driver",
    "build_projector_driver",
    "nmr_two_qubit_mapping",
    "nmr_offsets",
    "two_qubit_problem",
]

DIAGONAL = "diagonal"
TRANSVERSE = "transverse_field"
PROJECTOR = "rank_one_projector"
_KINDS = (DIAGONAL, TRANSVERSE, PROJECTOR)


def _n_qubits_from_dim(dim: int) -> int:
    N = int(round(math.log2(dim))) if dim > 0 else 0
    if N < 1 or 2**N != dim:
        raise DimensionError(f"length {dim} is not a power of two >= 2")
    return N


@dataclass(frozen=True, eq=False)
class OperatorTerm:
    """One exactly exponentiable Hamiltonian term.

    ``values`` holds the diagonal energies, the per-qubit sigma_x
    coefficients, or the projector direction, depending on ``kind``.
    ``coefficient`` is only meaningful for projectors.
    """

    kind: str
    values: np.ndarray
    coefficient: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown term kind {self.kind!r}")
        dtype = complex if self.kind == PROJECTOR else float
        v = np.array(self.values, dtype=dtype).ravel()
        if self.kind == PROJECTOR:
            _n_qubits_from_dim(v.size)
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise ValidationError("projector direction must have unit norm")
        elif self.kind == DIAGONAL:
            _n_qubits_from_dim(v.size)
        elif v.size < 1:
            raise DimensionError("transverse field needs at least one qubit")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "coefficient", float(self.coefficient))

    @classmethod
    def diagonal(cls, energies) -> "OperatorTerm":
        return cls(DIAGONAL, energies)

    @classmethod
    def transverse(cls, coefficients) -> "OperatorTerm":
        return cls(TRANSVERSE, coefficients)

    @classmethod
    def projector(cls, direction, coefficient=1.0) -> "OperatorTerm":
        return cls(PROJECTOR, direction, coefficient)

    @property
    def n_qubits(self) -> int:
        if self.kind == TRANSVERSE:
            return self.values.size
        return _n_qubits_from_dim(self.values.size)

    def scaled(self, c: float) -> "OperatorTerm":
        if self.kind == PROJECTOR:
            return OperatorTerm(PROJECTOR, self.values, self.coefficient * c)
        return OperatorTerm(self.kind, self.values * c)

    def __eq__(self, other):
        return (isinstance(other, OperatorTerm) and self.kind == other.kind
                and self.coefficient == other.coefficient
                and np.array_equal(self.values, other.values))

    def to_json(self) -> dict:
        if self.kind == PROJECTOR:
            return {
                "kind": self.kind,
                "coefficient": self.coefficient,
                "direction": [[z.real, z.imag] for z in self.values.tolist()],
            }
        return {"kind": self.kind, "values": self.values.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> "OperatorTerm":
        if d["kind"] == PROJECTOR:
            v = [complex(re, im) for re, im in d["direction"]]
            return cls(PROJECTOR, v, d.get("coefficient", 1.0))
        return cls(d["kind"], d["values"])


@dataclass(frozen=True)
class HamiltonianSpec:
    """H(s) = Lambda(s) * sum(driver) + sum(problem)."""

    n_qubits: int
    driver: tuple = ()
    problem: tuple = ()
    units: str = "dimensionless"
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "driver", tuple(self.driver))
        object.__setattr__(self, "problem", tuple(self.problem))
        if self.units not in ("dimensionless", "angular_frequency"):
            raise ValidationError(f"unknown units {self.units!r}")
        for t in self.driver + self.problem:
            if t.n_qubits != self.n_qubits:
                raise DimensionError(f"{t.kind} term acts on {t.n_qubits} qubits, spec has {self.n_qubits}")

    def negated(self) -> "HamiltonianSpec":
        return HamiltonianSpec(
            self.n_qubits,
            tuple(t.scaled(-1.0) for t in self.driver),
            tuple(t.scaled(-1.0) for t in self.problem),
            self.units,
            dict(self.metadata, negated=not self.metadata.get("negated", False)),
        )

    def problem_diagonal(self) -> np.ndarray:
        """Summed problem energies; only defined for an all-diagonal problem."""
        out = np.zeros(2**self.n_qubits)
        for t in self.problem:
            if t.kind != DIAGONAL:
                raise ValidationError("problem contains non-diagonal terms")
            out = out + t.values
        return out

    def to_json(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "units": self.units,
            "driver": [t.to_json() for t in self.driver],
            "problem": [t.to_json() for t in self.problem],
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, d: dict) -> "HamiltonianSpec":
        return cls(
            d["n_qubits"],
            tuple(OperatorTerm.from_json(t) for t in d["driver"]),
            tuple(OperatorTerm.from_json(t) for t in d["problem"]),
            d.get("units", "dimensionless"),
            d.get("metadata", {}),
        )


@dataclass(frozen=True)
class NmrConfig:
    """Two-spin heteronuclear NMR parameters; frequencies in Hz, times in s.

    Relaxation times are carried along as metadata and never enter the dynamics.
    """

    J: float = 195.0
    nu_H: float = 0.0
    nu_C: float = 0.0
    A_max: float = 600.0
    T1_H: float = 1.6
    T1_C: float = 2.7
    T2_H: float = 0.130
    T2_C: float = 0.060
    operator_normalization: str = "spin_half"
    offset_override: float | None = None

    def __post_init__(self):
        if not self.J > 0:
            raise ValidationError("J must be positive", field="nmr.J")
        if self.operator_normalization not in ("spin_half", "pauli"):
            raise ValidationError(
                f"unknown normalization {self.operator_normalization!r}",
                field="nmr.operator_normalization")

    @property
    def operator_scale(self) -> float:
        return 0.5 if self.operator_normalization == "spin_half" else 1.0

    def to_json(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_json(cls, d: dict) -> "NmrConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValidationError(f"unknown keys {sorted(extra)}", field="nmr")
        return cls(**d)


def build_memory_coupling(w: WeightMatrix) -> OperatorTerm:
    """H_mem = -1/2 sum_{i != j} w_ij sigma^z_i sigma^z_j as a diagonal."""
    z = z_eigenvalues(w.N).astype(float)
    return OperatorTerm.diagonal(-0.5 * np.einsum("ki,ij,kj->k", z, w.entries, z))


def build_input_hamiltonian(inp: InputPattern) -> OperatorTerm:
    """H_inp = sum_i xi^inp_i sigma^z_i as a diagonal."""
    z = z_eigenvalues(inp.N).astype(float)
    return OperatorTerm.diagonal(z @ inp.array().astype(float))


def build_projector_memory_a(mem: MemorySet) -> OperatorTerm:
    """1 - sum_mu |xi^mu><xi^mu|: zero on stored patterns, one elsewhere."""
    d = np.ones(2**mem.N)
    d[mem.indices()] = 0.0
    return OperatorTerm.diagonal(d)


def build_memory_state(mem: MemorySet) -> np.ndarray:
    """Equal-weight superposition of the stored pattern states."""
    psi = np.zeros(2**mem.N, dtype=complex)
    psi[mem.indices()] = 1.0 / math.sqrt(mem.p)
    return psi


def build_projector_memory_b(mem: MemorySet) -> OperatorTerm:
    """1 - |xi^mem><xi^mem| for the memory superposition state."""
    return OperatorTerm.projector(build_memory_state(mem), 1.0)


def build_problem(memory_term: OperatorTerm, input_term: OperatorTerm, gamma: float) -> tuple:
    if gamma < 0:
        raise ValidationError(f"gamma must be nonnegative, got {gamma}", field="gamma")
    if memory_term.n_qubits != input_term.n_qubits:
        raise DimensionError("memory and input terms act on different qubit counts")
    return (memory_term, input_term.scaled(gamma))


def build_standard_driver(N: int) -> tuple:
    """H_i = 1/2 sum_i (1 - sigma^x_i), ground state |psi_un> at energy 0."""
    if N < 1:
        raise ValidationError("N must be positive")
    return (
        OperatorTerm.transverse(np.full(N, -0.5)),
        OperatorTerm.diagonal(np.full(2**N, N / 2.0)),
    )


def build_projector_driver(N: int) -> OperatorTerm:
    """H_i = 1 - |psi_un><psi_un|."""
    if N < 1:
        raise ValidationError("N must be positive")
    return OperatorTerm.projector(np.full(2**N, 2.0 ** (-N / 2), dtype=complex), 1.0)


def two_qubit_problem(w: float, inp: InputPattern, gamma: float) -> tuple:
    """Dimensionless two-neuron problem -w s1 s2 + gamma (x1 s1 + x2 s2) as terms."""
    if inp.N != 2:
        raise DimensionError("two-qubit problem needs an input of length 2")
    return build_problem(build_memory_coupling(WeightMatrix.two_qubit(w)),
                         build_input_hamiltonian(inp), gamma)


def nmr_offsets(w: int, inp: InputPattern, gamma: float, J: float) -> tuple:
    """Offset frequencies nu = -w * gamma * J * xi (Hz)."""
    return tuple(-w * gamma * J * x for x in inp.values)


def nmr_two_qubit_mapping(w: int, inp: InputPattern, gamma: float, cfg: NmrConfig):
    """Map the two-neuron problem onto the fixed-coupling 1H-13C spin pair.

    The problem is 2 pi [J I_z1 I_z2 + nu_H I_z1 + nu_C I_z2] and the driver
    2 pi w (I_x1 + I_x2), scheduled by an rf amplitude in Hz. I = sigma/2
    under the ``spin_half`` normalization and I = sigma under ``pauli``.

    Returns:
        ``(spec, (nu_H, nu_C))`` with the spec in rad/s and offsets in Hz.
    """
    if int(w) != w or abs(w) != 1:
        raise ValidationError(f"w must be +-1, got {w}", field="w")
    if inp.N != 2:
        raise DimensionError("NMR mapping needs an input of length 2")
    nu_H, nu_C = nmr_offsets(int(w), inp, gamma, cfg.J)
    if cfg.offset_override is not None:
        nu_H = math.copysign(cfg.offset_override, nu_H) if nu_H else 0.0
        nu_C = math.copysign(cfg.offset_override, nu_C) if nu_C else 0.0
    c = cfg.operator_scale
    z = z_eigenvalues(2).astype(float)
    two_pi = 2.0 * math.pi
    diag = two_pi * (cfg.J * c * c * z[:, 0] * z[:, 1] + nu_H * c * z[:, 0] + nu_C * c * z[:, 1])
    spec = HamiltonianSpec(
        2,
        driver=(OperatorTerm.transverse(np.full(2, two_pi * w * c)),),
        problem=(OperatorTerm.diagonal(diag),),
        units="angular_frequency",
        metadata={
            "w": int(w),
            "gamma": gamma,
            "nu_H": nu_H,
            "nu_C": nu_C,
            "operator_normalization": cfg.operator_normalization,
        },
    )
    return spec, (nu_H, nu_C)
