"""Bipolar patterns, Hamming metrics, Hebbian weights and classical energies.

Spin/bit convention used throughout the package::

    pattern value -1  <->  bit 0  <->  sigma_z eigenvalue +1
    pattern value +1  <->  bit 1  <->  sigma_z eigenvalue -1

Qubit / neuron 0 is the most significant bit of a basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, ValidationError

__all__ = [
    "Pattern",
    "InputPattern",
    "MemorySet",
    "WeightMatrix",
    "EnergyBreakdown",
    "hamming_distance",
    "hebbian_weights",
    "hopfield_energy",
    "input_energy",
    "energy_breakdown",
    "pattern_to_index",
    "index_to_pattern",
    "basis_patterns",
    "z_eigenvalues",
]


def _as_int_tuple(values, allowed, what):
    try:
        items = tuple(values)
    except TypeError:
        raise ValidationError(f"{what} must be a sequence, got {values!r}") from None
    out = []
    for v in items:
        if isinstance(v, bool) or float(v) != int(v) or int(v) not in allowed:
            raise ValidationError(f"{what} entries must be in {sorted(allowed)}, got {v!r}")
        out.append(int(v))
    if not out:
        raise ValidationError(f"{what} must have at least one entry")
    return tuple(out)


@dataclass(frozen=True)
class Pattern:
    """A bipolar vector with entries in {-1, +1}."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", _as_int_tuple(self.values, {-1, 1}, "Pattern"))

    @property
    def N(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    def __neg__(self) -> "Pattern":
        return Pattern(tuple(-v for v in self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def to_json(self) -> list:
        return list(self.values)


@dataclass(frozen=True)
class InputPattern:
    """A possibly partial input; zero marks an unknown position."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", _as_int_tuple(self.values, {-1, 0, 1}, "InputPattern"))

    @classmethod
    def from_pattern(cls, pattern: Pattern) -> "InputPattern":
        return cls(pattern.values)

    @classmethod
    def blank(cls, N: int) -> "InputPattern":
        return cls((0,) * N)

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def n(self) -> int:
        """Number of known (nonzero) entries."""
        return sum(1 for v in self.values if v != 0)

    @property
    def known(self) -> np.ndarray:
        return np.flatnonzero(self.array())

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    def __len__(self):
        return len(self.values)

    def to_json(self) -> list:
        return list(self.values)


@dataclass(frozen=True)
class MemorySet:
    """A set of p distinct patterns of common length N."""

    patterns: tuple

    def __post_init__(self):
        pats = tuple(p if isinstance(p, Pattern) else Pattern(p) for p in self.patterns)
        if not pats:
            raise ValidationError("MemorySet needs at least one pattern")
        lengths = {p.N for p in pats}
        if len(lengths) != 1:
            raise DimensionError(f"patterns have differing lengths {sorted(lengths)}")
        if len(set(pats)) != len(pats):
            raise ValidationError("MemorySet contains duplicate patterns")
        object.__setattr__(self, "patterns", pats)

    @property
    def p(self) -> int:
        return len(self.patterns)

    @property
    def N(self) -> int:
        return self.patterns[0].N

    def array(self) -> np.ndarray:
        """Patterns stacked as a (p, N) integer array."""
        return np.array([p.values for p in self.patterns], dtype=np.int64)

    def indices(self) -> list:
        return [pattern_to_index(p) for p in self.patterns]

    def __iter__(self):
        return iter(self.patterns)

    def __len__(self):
        return len(self.patterns)

    def to_json(self) -> list:
        return [p.to_json() for p in self.patterns]


@dataclass(frozen=True)
class WeightMatrix:
    """Symmetric, zero-diagonal synaptic weights."""

    entries: np.ndarray

    def __post_init__(self):
        w = np.array(self.entries, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise DimensionError(f"weight matrix must be square, got shape {w.shape}")
        if not np.array_equal(w, w.T):
            raise ValidationError("weight matrix must be symmetric")
        if np.any(np.diag(w) != 0):
            raise ValidationError("weight matrix must have zero diagonal")
        w.setflags(write=False)
        object.__setattr__(self, "entries", w)

    @classmethod
    def two_qubit(cls, w: float) -> "WeightMatrix":
        """The single-connection network with w_12 = w_21 = w."""
        return cls(np.array([[0.0, w], [w, 0.0]]))

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        return isinstance(other, WeightMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())


@dataclass(frozen=True)
class EnergyBreakdown:
    e_mem: float
    e_inp: float
    e_total: float
    gamma: float


Spins = Union[Pattern, InputPattern, Sequence[int], np.ndarray]


def _vec(x: Spins) -> np.ndarray:
    if isinstance(x, (Pattern, InputPattern)):
        return x.array()
    return np.asarray(x)


def hamming_distance(a: Spins, b: Spins, restrict_to_known: bool = False) -> int:
    """Count positions where ``a`` and ``b`` differ.

    With ``restrict_to_known`` only the nonzero positions of ``a`` are compared.
    """
    va, vb = _vec(a), _vec(b)
    if va.shape != vb.shape:
        raise DimensionError(f"length mismatch: {va.shape[0]} vs {vb.shape[0]}")
    diff = va != vb
    if restrict_to_known:
        diff &= va != 0
    return int(np.count_nonzero(diff))


def hebbian_weights(mem: MemorySet) -> WeightMatrix:
    """One-shot Hebbian rule w_ij = (sum_mu xi_i xi_j - p delta_ij) / N."""
    x = mem.array().astype(float)
    w = (x.T @ x - mem.p * np.eye(mem.N)) / mem.N
    return WeightMatrix(w)


def hopfield_energy(state: Spins, w: WeightMatrix) -> float:
    s = _vec(state).astype(float)
    if s.shape != (w.N,):
        raise DimensionError(f"state of length {s.shape[0]} vs {w.N} neurons")
    return float(-0.5 * s @ w.entries @ s)


def input_energy(state: Spins, inp: InputPattern) -> float:
    """Energy sum_i inp_i z_i of a classical state under the input field.

    Equals -n + 2h where h is the Hamming distance over the known positions.
    """
    s = _vec(state)
    x = inp.array()
    if s.shape != x.shape:
        raise DimensionError(f"state of length {s.shape[0]} vs input of length {x.shape[0]}")
    return float(-(x @ s))


def energy_breakdown(state: Spins, w: WeightMatrix, inp: InputPattern, gamma: float) -> EnergyBreakdown:
    e_mem = hopfield_energy(state, w)
    e_inp = input_energy(state, inp)
    return EnergyBreakdown(e_mem=e_mem, e_inp=e_inp, e_total=e_mem + gamma * e_inp, gamma=gamma)


def pattern_to_index(pattern: Spins) -> int:
    """Basis index of a bipolar pattern (+1 -> bit 1, neuron 0 is the MSB)."""
    k = 0
    for v in _vec(pattern):
        if v not in (-1, 1):
            raise ValidationError(f"pattern entries must be +-1, got {v!r}")
        k = (k << 1) | (1 if v > 0 else 0)
    return k


def index_to_pattern(k: int, N: int) -> Pattern:
    if not 0 <= k < 2**N:
        raise DimensionError(f"index {k} out of range for {N} qubits")
    return Pattern(tuple(1 if (k >> (N - 1 - i)) & 1 else -1 for i in range(N)))


@lru_cache(maxsize=32)
def _basis_patterns(N: int) -> np.ndarray:
    k = np.arange(2**N)[:, None]
    bits = (k >> np.arange(N - 1, -1, -1)[None, :]) & 1
    out = 2 * bits - 1
    out.setflags(write=False)
    return out


def basis_patterns(N: int) -> np.ndarray:
    """All 2^N patterns as a (2^N, N) array, row k being the pattern of index k."""
    if N < 1:
        raise ValidationError("N must be positive")
    return _basis_patterns(N)


def z_eigenvalues(N: int) -> np.ndarray:
    """sigma_z eigenvalue of each qubit for each basis index, shape (2^N, N)."""
    return -basis_patterns(N)


def as_memory(patterns: Iterable) -> MemorySet:
    if isinstance(patterns, MemorySet):
        return patterns
    return MemorySet(tuple(patterns))
