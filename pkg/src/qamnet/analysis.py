"""Input-weight bounds, perturbative similarity predictions and their brute-force checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DimensionError, ValidationError
from .hamiltonian import (
    HamiltonianSpec,
    build_input_hamiltonian,
    build_memory_coupling,
    build_projector_memory_a,
    build_projector_memory_b,
)
from .patterns import (
    InputPattern,
    MemorySet,
    Pattern,
    hamming_distance,
    hebbian_weights,
    index_to_pattern,
)
from .quantum import MAX_DENSE_QUBITS, dense_oracle

__all__ = [
    "PerturbationReport",
    "BoundReport",
    "gamma_bound_coupling",
    "gamma_bound_projector",
    "bound_grid",
    "verify_bound_brute_force",
    "perturbation_report",
    "similarity_spec",
    "exact_ground_state",
    "exact_pattern_probabilities",
    "similarity_ranking",
]


@dataclass(frozen=True)
class PerturbationReport:
    """Perturbative ground state of (1 - |mem><mem|) + gamma H_inp.

    ``first_order_probabilities`` are the squared first-order amplitudes
    renormalized to sum to one over the stored patterns.
    """

    hamming: tuple
    mean_hamming: float
    deviations: tuple
    scalar_products: tuple
    mean_scalar: float
    variance: float
    e0_first: float
    e0_second: float
    gamma: float
    first_order_amplitudes: tuple
    first_order_probabilities: tuple

    def predicted_energy(self, gamma: float | None = None) -> float:
        g = self.gamma if gamma is None else gamma
        return g * self.e0_first + g * g * self.e0_second

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["normalization"] = "first-order amplitudes squared, renormalized over stored patterns"
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


@dataclass(frozen=True)
class BoundReport:
    bound_kind: str
    gamma_upper: float
    witness: Pattern | None = None
    witness_gamma: float | None = None
    checked: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return self.witness is None

    def to_json(self) -> dict:
        return {
            "bound_kind": self.bound_kind,
            "gamma_upper": self.gamma_upper,
            "witness": None if self.witness is None else self.witness.to_json(),
            "witness_gamma": self.witness_gamma,
            "checked": list(self.checked),
        }


def gamma_bound_coupling(N: int, n: int) -> float:
    """Upper input weight 1 - n/(2N) for a single pattern in the coupling memory."""
    if N < 1 or not 1 <= n <= N:
        raise ValidationError(f"need 1 <= n <= N, got n={n}, N={N}", field="n")
    return 1.0 - n / (2.0 * N)


def gamma_bound_projector(n: int) -> float:
    """Upper input weight 1/(2n) for the diagonal projector memory."""
    if n < 1:
        raise ValidationError("a blank input (n = 0) has no input-weight bound", field="n")
    return 1.0 / (2.0 * n)


def bound_grid(upper: float, points: int = 10) -> list:
    """``points`` values evenly spaced strictly inside (0, upper)."""
    return [upper * k / (points + 1) for k in range(1, points + 1)]


def _expected_ground(mem: MemorySet, inp: InputPattern, memory_kind: str) -> set:
    if memory_kind == "coupling":
        # the coupling memory cannot tell a pattern from its reversal
        cands = [mem.patterns[0], -mem.patterns[0]]
    else:
        cands = list(mem.patterns)
    d = [hamming_distance(inp, c, restrict_to_known=True) for c in cands]
    return {c for c, h in zip(cands, d) if h == min(d)}


def verify_bound_brute_force(mem: MemorySet, inp: InputPattern, memory_kind: str,
                             gamma_grid=None, atol: float = 1e-9) -> BoundReport:
    """Enumerate all basis energies for each gamma on the grid.

    The default grid lies strictly below the analytic bound; an explicit grid
    is checked as given, so points above the bound can produce witnesses.

    The ground level must consist exactly of the expected patterns: the
    stored pattern (or its reversal, whichever is closer to the input; both
    on a tie) for ``coupling``, the minimal-distance subset for
    ``projector_a``. The first violation found is returned as the witness.
    """
    if mem.N != inp.N:
        raise DimensionError(f"memory on {mem.N} neurons vs input of length {inp.N}")
    if mem.N > MAX_DENSE_QUBITS:
        raise CapacityError(f"brute force limited to {MAX_DENSE_QUBITS} qubits")
    if memory_kind == "coupling":
        if mem.p != 1:
            raise ValidationError("the coupling-memory bound is only established for p = 1",
                                  field="memory")
        upper = gamma_bound_coupling(mem.N, inp.n)
        e_mem = build_memory_coupling(hebbian_weights(mem)).values
    elif memory_kind == "projector_a":
        upper = gamma_bound_projector(inp.n)
        e_mem = build_projector_memory_a(mem).values
    else:
        raise ValidationError(f"unknown memory kind {memory_kind!r}", field="memory_kind")
    e_inp = build_input_hamiltonian(inp).values
    grid = bound_grid(upper) if gamma_grid is None else list(gamma_grid)
    want = _expected_ground(mem, inp, memory_kind)
    checked = []
    if any(g < 0 for g in grid):
        raise ValidationError("gamma values must be nonnegative", field="gamma_grid")
    for g in grid:
        e = e_mem + g * e_inp
        ground = np.flatnonzero(e <= e.min() + atol)
        got = {index_to_pattern(int(k), mem.N) for k in ground}
        checked.append(g)
        if got != want:
            # prefer an unexpected ground state over a missing expected one
            witness = sorted((got - want) or (want - got), key=lambda x: x.values)[0]
            return BoundReport(memory_kind, upper, witness, g, tuple(checked))
    return BoundReport(memory_kind, upper, None, None, tuple(checked))


def perturbation_report(mem: MemorySet, inp: InputPattern, gamma: float = 0.1) -> PerturbationReport:
    if mem.N != inp.N:
        raise DimensionError(f"memory on {mem.N} neurons vs input of length {inp.N}")
    h = np.array([hamming_distance(inp, x, restrict_to_known=True) for x in mem], dtype=float)
    n = inp.n
    mean_h = float(h.mean())
    dev = h - mean_h
    s = n - 2.0 * h
    var = float(np.mean(h**2) - mean_h**2)
    amps = (1.0 - 2.0 * gamma * dev) / math.sqrt(mem.p)
    probs = amps**2 / np.sum(amps**2)
    return PerturbationReport(
        hamming=tuple(int(x) for x in h),
        mean_hamming=mean_h,
        deviations=tuple(dev.tolist()),
        scalar_products=tuple(s.tolist()),
        mean_scalar=float(s.mean()),
        variance=max(var, 0.0),
        e0_first=-n + 2.0 * mean_h,
        e0_second=-4.0 * max(var, 0.0),
        gamma=gamma,
        first_order_amplitudes=tuple(amps.tolist()),
        first_order_probabilities=tuple(probs.tolist()),
    )


def similarity_spec(mem: MemorySet, inp: InputPattern, gamma: float) -> HamiltonianSpec:
    """Static spec with problem (1 - |mem><mem|) + gamma H_inp and no driver."""
    if mem.N != inp.N:
        raise DimensionError(f"memory on {mem.N} neurons vs input of length {inp.N}")
    if gamma < 0:
        raise ValidationError("gamma must be nonnegative", field="gamma")
    return HamiltonianSpec(mem.N, (), (build_projector_memory_b(mem),
                                       build_input_hamiltonian(inp).scaled(gamma)))


def exact_ground_state(mem: MemorySet, inp: InputPattern, gamma: float):
    """(energy, state) of the lowest level from the dense oracle."""
    spec = dense_oracle(similarity_spec(mem, inp, gamma), 0.0)
    return float(spec.eigenvalues[0]), spec.ground_state()


def exact_pattern_probabilities(mem: MemorySet, inp: InputPattern, gamma: float) -> np.ndarray:
    _, psi = exact_ground_state(mem, inp, gamma)
    return np.abs(psi[mem.indices()]) ** 2


def similarity_ranking(mem: MemorySet, inp: InputPattern, gamma: float,
                       method: str = "exact") -> list:
    """Stored patterns with their measurement probabilities, most probable first."""
    if method == "exact":
        probs = exact_pattern_probabilities(mem, inp, gamma)
    elif method == "first_order":
        probs = np.array(perturbation_report(mem, inp, gamma).first_order_probabilities)
    else:
        raise ValidationError(f"unknown method {method!r}", field="method")
    order = sorted(range(mem.p), key=lambda k: (-probs[k], k))
    return [(mem.patterns[k], float(probs[k])) for k in order]
