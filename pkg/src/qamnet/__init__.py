"""Adiabatic quantum pattern recognition with Hopfield-style memories.

Exact small-system simulation: Hamiltonian builders, a split-operator
state-vector engine, annealing runs, analytic input-weight bounds and
perturbative similarity predictions, plus a classical Hopfield baseline.
"""

__version__ = "0.1.0"

from .errors import CapacityError, DimensionError, NonTerminationError, QamnetError, ValidationError
from .patterns import (
    EnergyBreakdown,
    InputPattern,
    MemorySet,
    Pattern,
    WeightMatrix,
    energy_breakdown,
    hamming_distance,
    hebbian_weights,
    hopfield_energy,
    index_to_pattern,
    input_energy,
    pattern_to_index,
)
from .hopfield import HopfieldState, RecallOutcome, recall, update_async, update_sync
from .hamiltonian import (
    HamiltonianSpec,
    NmrConfig,
    OperatorTerm,
    build_input_hamiltonian,
    build_memory_coupling,
    build_memory_state,
    build_problem,
    build_projector_driver,
    build_projector_memory_a,
    build_projector_memory_b,
    build_standard_driver,
    nmr_two_qubit_mapping,
)
from .quantum import (
    MeasurementDistribution,
    StateVector,
    apply_term_exponential,
    dense_oracle,
    measurement_distribution,
    overlap,
    sample_outcomes,
    trotter_step,
    uniform_state,
)
from .anneal import AnnealResult, AnnealSchedule, gap_scan, run_anneal, run_nmr_experiment
from .analysis import (
    gamma_bound_coupling,
    gamma_bound_projector,
    perturbation_report,
    similarity_ranking,
    verify_bound_brute_force,
)
