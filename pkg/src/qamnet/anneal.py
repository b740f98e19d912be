"""Quantum annealing runs, outcome recognition and spectral-gap scans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionError, ValidationError
from .hamiltonian import (
    HamiltonianSpec,
    NmrConfig,
    build_standard_driver,
    nmr_two_qubit_mapping,
    two_qubit_problem,
)
from .patterns import InputPattern, index_to_pattern
from .quantum import (
    MeasurementDistribution,
    StateVector,
    _Splitter,
    _strang,
    dense_oracle,
    measurement_distribution,
    overlap,
    uniform_state,
)

__all__ = [
    "AnnealSchedule",
    "AnnealResult",
    "GapScan",
    "DEFAULT_SCHEDULE",
    "NMR_SCHEDULE",
    "DEFAULT_TAU",
    "run_anneal",
    "run_nmr_experiment",
    "two_qubit_spec",
    "expected_outcome_state",
    "gap_scan",
]

DEFAULT_TAU = 0.1
_SAMPLINGS = {"left": 0.0, "midpoint": 0.5}


@dataclass(frozen=True)
class AnnealSchedule:
    """Linear ramp Lambda(s) = lambda_max (1 - s), s = t / T, over ``steps`` intervals.

    ``sampling`` selects where Lambda is frozen inside each interval;
    ``substeps`` subdivides every frozen interval for the split-operator
    integrator without changing the schedule itself.
    """

    total_time: float
    steps: int
    lambda_max: float
    shape: str = "linear"
    sampling: str = "midpoint"
    substeps: int = 1

    def __post_init__(self):
        if not self.total_time > 0:
            raise ValidationError("total_time must be positive", field="schedule.total_time")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValidationError("steps must be a positive integer", field="schedule.steps")
        if self.lambda_max < 0:
            raise ValidationError("lambda_max must be nonnegative", field="schedule.lambda_max")
        if self.shape != "linear":
            raise ValidationError(f"unsupported shape {self.shape!r}", field="schedule.shape")
        if self.sampling not in _SAMPLINGS:
            raise ValidationError(f"sampling must be one of {sorted(_SAMPLINGS)}",
                                  field="schedule.sampling")
        if int(self.substeps) != self.substeps or self.substeps < 1:
            raise ValidationError("substeps must be a positive integer", field="schedule.substeps")

    @property
    def dt(self) -> float:
        return self.total_time / self.steps

    def lambda_at(self, s):
        return self.lambda_max * (1.0 - np.asarray(s, dtype=float))

    def interval_lambdas(self) -> np.ndarray:
        s = (np.arange(self.steps) + _SAMPLINGS[self.sampling]) / self.steps
        return self.lambda_at(s)

    def to_json(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_json(cls, d: dict) -> "AnnealSchedule":
        extra = set(d) - set(cls.__dataclass_fields__)
        if extra:
            raise ValidationError(f"unknown keys {sorted(extra)}", field="schedule")
        return cls(**d)


DEFAULT_SCHEDULE = AnnealSchedule(total_time=50.0, steps=500, lambda_max=5.0)
NMR_SCHEDULE = AnnealSchedule(total_time=0.05, steps=100, lambda_max=600.0, substeps=16)


@dataclass(frozen=True)
class GapScan:
    trace: list  # (s, gap) pairs
    min_gap: float
    s_at_min: float
    tracked_level: str = "ground"

    def to_json(self) -> dict:
        return {
            "tracked_level": self.tracked_level,
            "min_gap": _finite_or_none(self.min_gap),
            "s_at_min": self.s_at_min,
            "trace": [[s, _finite_or_none(g)] for s, g in self.trace],
        }


def _finite_or_none(x):
    return float(x) if math.isfinite(x) else None


@dataclass(frozen=True, eq=False)
class AnnealResult:
    final_state: StateVector
    distribution: MeasurementDistribution
    fidelity_vs_expected: float | None
    recognized: list  # (Pattern, probability), descending
    gap_trace: GapScan | None = None
    tracked_level: str = "ground"
    metadata: dict = field(default_factory=dict)

    def dominant(self):
        return self.recognized[0] if self.recognized else None

    def to_json(self) -> dict:
        return {
            "tracked_level": self.tracked_level,
            "fidelity_vs_expected": self.fidelity_vs_expected,
            "recognized": [{"pattern": p.to_json(), "probability": q} for p, q in self.recognized],
            "distribution": self.distribution.to_json(),
            "final_state": self.final_state.to_json(),
            "gap": None if self.gap_trace is None else self.gap_trace.to_json(),
            "metadata": self.metadata,
        }


def _recognize(dist: MeasurementDistribution, tau: float) -> list:
    p = dist.probabilities
    order = sorted(np.flatnonzero(p >= tau), key=lambda k: (-p[k], k))
    return [(index_to_pattern(int(k), dist.n_qubits), float(p[k])) for k in order]


def run_anneal(spec: HamiltonianSpec, sched: AnnealSchedule, initial: StateVector | None = None,
               expected: StateVector | None = None, tau: float = DEFAULT_TAU,
               gap_points: int | None = None, tracked_level: str = "ground") -> AnnealResult:
    """Evolve ``initial`` (default |psi_un>) through the schedule.

    Each of the ``sched.steps`` intervals holds Lambda constant and is
    propagated with the symmetric split-operator product.
    """
    if not 0 < tau < 1:
        raise ValidationError("tau must lie in (0, 1)", field="tau")
    if initial is None:
        initial = uniform_state(spec.n_qubits)
    if initial.n_qubits != spec.n_qubits:
        raise DimensionError(f"initial state on {initial.n_qubits} qubits vs spec on {spec.n_qubits}")
    psi = initial.amplitudes
    dt = sched.dt
    splitter = _Splitter(spec)
    for lam in sched.interval_lambdas():
        psi = _strang(psi, splitter.factors(float(lam)), dt, sched.substeps)
    final = StateVector(psi)
    dist = measurement_distribution(final)
    fidelity = None if expected is None else overlap(final, expected)
    gaps = None
    if gap_points is not None:
        gaps = gap_scan(spec, sched, gap_points, tracked_level)
    return AnnealResult(final, dist, fidelity, _recognize(dist, tau), gaps, tracked_level,
                        {"units": spec.units})


def two_qubit_spec(w: float, inp: InputPattern, gamma: float) -> HamiltonianSpec:
    """Dimensionless two-neuron spec with the standard transverse driver."""
    return HamiltonianSpec(2, build_standard_driver(2), two_qubit_problem(w, inp, gamma),
                           metadata={"w": w, "gamma": gamma})


def expected_outcome_state(problem_diagonal, atol: float = 1e-9) -> StateVector:
    """Projection of |psi_un> onto the ground space of a diagonal problem, normalized.

    For a nondegenerate problem this is the ground basis state; for a
    degenerate one it is the equal superposition the adiabatic run reaches
    from the symmetric start state.
    """
    d = np.asarray(problem_diagonal, dtype=float)
    mask = d <= d.min() + atol
    a = mask.astype(complex) / math.sqrt(mask.sum())
    return StateVector(a)


def run_nmr_experiment(w: int, inp: InputPattern, gamma: float = 0.5, cfg: NmrConfig | None = None,
                       sched: AnnealSchedule | None = None, tau: float = DEFAULT_TAU,
                       negate: bool = False) -> AnnealResult:
    """Anneal the two-spin NMR mapping from |psi_un>.

    For w = -1 |psi_un> is the driver ground state; for w = +1 it is the top
    eigenstate, and the run follows the top of the spectrum. ``negate``
    evolves under -H instead, the ground-state formulation of the same run.
    """
    cfg = cfg or NmrConfig()
    sched = sched or replace(NMR_SCHEDULE, lambda_max=cfg.A_max)
    spec, offsets = nmr_two_qubit_mapping(w, inp, gamma, cfg)
    if negate:
        spec = spec.negated()
    tracked = "top" if (w == 1) != negate else "ground"
    expected = expected_outcome_state(two_qubit_spec(w, inp, gamma).problem_diagonal())
    result = run_anneal(spec, sched, uniform_state(2), expected, tau, tracked_level=tracked)
    meta = dict(result.metadata, nu_H=offsets[0], nu_C=offsets[1],
                operator_normalization=cfg.operator_normalization, negated=negate)
    return replace(result, metadata=meta)


def gap_scan(spec: HamiltonianSpec, sched: AnnealSchedule, grid_points: int = 101,
             tracked_level: str = "ground", degeneracy_tol: float | None = None) -> GapScan:
    """Distance from the tracked level to the nearest distinct level along s in [0, 1].

    Levels closer than ``degeneracy_tol`` to the tracked one count as the same
    level. The default tolerance is 1e-9 times the spectral range at each s.
    """
    if grid_points < 2:
        raise ValidationError("grid_points must be >= 2", field="grid_points")
    if tracked_level not in ("ground", "top"):
        raise ValidationError(f"unknown tracked level {tracked_level!r}", field="tracked_level")
    trace = []
    for s in np.linspace(0.0, 1.0, grid_points):
        ev = dense_oracle(spec, float(sched.lambda_at(s))).eigenvalues
        ref = ev[0] if tracked_level == "ground" else ev[-1]
        tol = degeneracy_tol
        if tol is None:
            tol = max(1e-9 * (ev[-1] - ev[0]), 1e-14)
        dist = np.abs(ev - ref)
        distinct = dist[dist > tol]
        gap = float(distinct.min()) if distinct.size else math.inf
        trace.append((float(s), gap))
    k = int(np.argmin([g for _, g in trace]))
    return GapScan(trace, trace[k][1], trace[k][0], tracked_level)
