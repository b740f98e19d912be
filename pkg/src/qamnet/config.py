"""Experiment configuration, mode dispatch and JSON run records."""

from __future__ import annotations

import copy
import hashlib
import itertools
import json
import os
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    exact_ground_state,
    gamma_bound_coupling,
    gamma_bound_projector,
    perturbation_report,
    similarity_ranking,
    verify_bound_brute_force,
)
from .anneal import (
    DEFAULT_SCHEDULE,
    DEFAULT_TAU,
    NMR_SCHEDULE,
    AnnealSchedule,
    gap_scan,
    run_anneal,
    run_nmr_experiment,
)
from .errors import ValidationError
from .hamiltonian import (
    HamiltonianSpec,
    NmrConfig,
    build_input_hamiltonian,
    build_memory_coupling,
    build_problem,
    build_projector_driver,
    build_projector_memory_a,
    build_projector_memory_b,
    build_standard_driver,
)
from .hopfield import recall
from .patterns import (
    InputPattern,
    MemorySet,
    Pattern,
    WeightMatrix,
    hebbian_weights,
    index_to_pattern,
    pattern_to_index,
)
from .quantum import dense_oracle, sample_outcomes, uniform_state

SCHEMA_VERSION = 1
MODES = ("classical", "anneal", "anneal_nmr", "ground_state", "bounds", "similarity", "gap")
MEMORY_KINDS = ("coupling", "projector_a", "projector_b")
DEFAULT_OUT = "qamnet_out"

_TWO_QUBIT_MEMORY = {
    -1: ((-1, 1), (1, -1)),
    1: ((-1, -1), (1, 1)),
}

# mode -> fields that must be present
_REQUIRED = {
    "classical": ("memory|w", "input"),
    "anneal": ("memory|w", "input"),
    "anneal_nmr": ("w", "input"),
    "ground_state": ("memory|w", "input"),
    "bounds": ("N|memory", "n|input"),
    "similarity": ("memory|w", "input"),
    "gap": ("memory|w", "input"),
}


_NUMERIC = ("w", "gamma", "tau")
_INTEGER = ("seed", "max_iters", "shots", "grid_points", "N", "n")


def default_output_dir() -> str:
    return os.environ.get("QAMNET_OUT", DEFAULT_OUT)


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    memory: MemorySet | None = None
    w: float | None = None
    memory_kind: str = "coupling"
    input: InputPattern | None = None
    gamma: float = 0.5
    schedule: AnnealSchedule | None = None
    driver: str = "standard"
    nmr: NmrConfig | None = None
    seed: int = 0
    output_dir: str = field(default_factory=default_output_dir)
    tau: float = DEFAULT_TAU
    # mode-specific knobs
    update: str = "async"
    max_iters: int = 1000
    shots: int | None = None
    grid_points: int = 101
    tracked_level: str = "ground"
    method: str = "exact"
    N: int | None = None
    n: int | None = None
    gamma_grid: tuple | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        d.pop("sweep", None)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown keys {sorted(unknown)}", field="config")
        mode = d.get("mode")
        if mode not in MODES:
            raise ValidationError(f"mode must be one of {list(MODES)}, got {mode!r}", field="mode")
        for req in _REQUIRED[mode]:
            if not any(d.get(k) is not None for k in req.split("|")):
                raise ValidationError(f"required for mode {mode!r}", field=req.replace("|", " or "))
        try:
            return cls._build(mode, d)
        except ValidationError:
            raise
        except (TypeError, ValueError, KeyError) as e:
            raise ValidationError(f"malformed value ({e})", field="config") from None

    @classmethod
    def _build(cls, mode: str, d: dict) -> "ExperimentConfig":
        for key in _NUMERIC:
            v = d.get(key)
            if v is not None and (isinstance(v, bool) or not isinstance(v, (int, float))):
                raise ValidationError(f"expected a number, got {v!r}", field=key)
        for key in _INTEGER:
            v = d.get(key)
            if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
                raise ValidationError(f"expected an integer, got {v!r}", field=key)
        kw = {"mode": mode}
        try:
            if d.get("memory") is not None:
                kw["memory"] = MemorySet(tuple(Pattern(p) for p in d["memory"]))
        except ValidationError as e:
            raise ValidationError(str(e), field="memory") from None
        try:
            if d.get("input") is not None:
                kw["input"] = InputPattern(d["input"])
        except ValidationError as e:
            raise ValidationError(str(e), field="input") from None
        if d.get("schedule") is not None:
            kw["schedule"] = AnnealSchedule.from_json(d["schedule"])
        if d.get("nmr") is not None:
            kw["nmr"] = NmrConfig.from_json(d["nmr"])
        if d.get("gamma_grid") is not None:
            kw["gamma_grid"] = tuple(float(g) for g in d["gamma_grid"])
        for k, v in d.items():
            if k not in kw:
                kw[k] = v
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    def validate(self):
        if self.memory_kind not in MEMORY_KINDS:
            raise ValidationError(f"must be one of {list(MEMORY_KINDS)}", field="memory_kind")
        if self.driver not in ("standard", "projector"):
            raise ValidationError("must be 'standard' or 'projector'", field="driver")
        if self.gamma < 0:
            raise ValidationError("must be nonnegative", field="gamma")
        if self.w is not None and self.w not in (-1, 1) and self.memory_kind != "coupling":
            raise ValidationError("shorthand w must be +-1 for projector memories", field="w")
        if self.mode == "anneal_nmr" and self.w not in (-1, 1):
            raise ValidationError("must be +-1 for the NMR mapping", field="w")
        n_mem = self.memory.N if self.memory is not None else (2 if self.w is not None else None)
        if self.input is not None and n_mem is not None and self.input.N != n_mem:
            raise ValidationError(f"length {self.input.N} does not match memory size {n_mem}",
                                  field="input")
        if self.mode == "classical" and self.input is not None and self.input.n != self.input.N:
            raise ValidationError("classical recall needs a full bipolar input", field="input")
        if self.update not in ("async", "sync"):
            raise ValidationError("must be 'async' or 'sync'", field="update")
        if self.tracked_level not in ("ground", "top"):
            raise ValidationError("must be 'ground' or 'top'", field="tracked_level")
        if self.method not in ("exact", "first_order"):
            raise ValidationError("must be 'exact' or 'first_order'", field="method")
        if not 0 < self.tau < 1:
            raise ValidationError("must lie in (0, 1)", field="tau")
        if self.shots is not None and self.shots < 1:
            raise ValidationError("must be positive", field="shots")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "memory": None if self.memory is None else self.memory.to_json(),
            "w": self.w,
            "memory_kind": self.memory_kind,
            "input": None if self.input is None else self.input.to_json(),
            "gamma": self.gamma,
            "schedule": self.resolved_schedule().to_json(),
            "driver": self.driver,
            "nmr": self._resolved_nmr(),
            "seed": self.seed,
            "output_dir": self.output_dir,
            "tau": self.tau,
            "update": self.update,
            "max_iters": self.max_iters,
            "shots": self.shots,
            "grid_points": self.grid_points,
            "tracked_level": self.tracked_level,
            "method": self.method,
            "N": self.N,
            "n": self.n,
            "gamma_grid": None if self.gamma_grid is None else list(self.gamma_grid),
        }

    def _resolved_nmr(self):
        if self.nmr is not None:
            return self.nmr.to_json()
        return NmrConfig().to_json() if self.mode == "anneal_nmr" else None

    def resolved_schedule(self) -> AnnealSchedule:
        if self.schedule is not None:
            return self.schedule
        if self.mode == "anneal_nmr":
            return replace(NMR_SCHEDULE, lambda_max=(self.nmr or NmrConfig()).A_max)
        return DEFAULT_SCHEDULE

    def memory_set(self) -> MemorySet:
        if self.memory is not None:
            return self.memory
        if self.w in _TWO_QUBIT_MEMORY:
            return MemorySet(_TWO_QUBIT_MEMORY[int(self.w)])
        raise ValidationError("a pattern list is needed for this memory kind", field="memory")

    def weights(self) -> WeightMatrix:
        if self.memory is not None:
            return hebbian_weights(self.memory)
        return WeightMatrix.two_qubit(float(self.w))


@dataclass
class RunRecord:
    config: dict
    results: dict
    mode: str
    tool_version: str = __version__
    timestamp: str = ""
    wall_time: float = 0.0
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool": "qamnet",
            "tool_version": self.tool_version,
            "mode": self.mode,
            "timestamp": self.timestamp,
            "wall_time": self.wall_time,
            "config": self.config,
            "results": self.results,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(config=d["config"], results=d["results"], mode=d["mode"],
                   tool_version=d["tool_version"], timestamp=d["timestamp"],
                   wall_time=d["wall_time"], schema_version=d["schema_version"])

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))

    def results_bytes(self) -> bytes:
        return json.dumps(self.results, sort_keys=True).encode()

    def write(self, out_dir, name: str | None = None) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if name is None:
            digest = hashlib.sha256(json.dumps(self.config, sort_keys=True).encode()).hexdigest()[:10]
            name = f"{self.mode}-{digest}.json"
        path = out / name
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path


def expand_sweep(raw: dict) -> list:
    """Cartesian product over ``raw["sweep"]``; dotted keys reach nested objects."""
    sweep = raw.get("sweep") or {}
    if not isinstance(sweep, dict):
        raise ValidationError("must map keys to value lists", field="sweep")
    base = {k: v for k, v in raw.items() if k != "sweep"}
    if not sweep:
        return [base]
    keys = sorted(sweep)
    out = []
    for combo in itertools.product(*(sweep[k] for k in keys)):
        d = copy.deepcopy(base)
        for key, val in zip(keys, combo):
            set_dotted(d, key, val)
        out.append(d)
    return out


def set_dotted(d: dict, key: str, value):
    parts = key.split(".")
    for p in parts[:-1]:
        if d.get(p) is None:
            d[p] = {}
        d = d[p]
    d[parts[-1]] = value


# -- dispatch --------------------------------------------------------------

def _memory_term(cfg: ExperimentConfig):
    if cfg.memory_kind == "coupling":
        return build_memory_coupling(cfg.weights())
    if cfg.memory_kind == "projector_a":
        return build_projector_memory_a(cfg.memory_set())
    return build_projector_memory_b(cfg.memory_set())


def build_spec(cfg: ExperimentConfig) -> HamiltonianSpec:
    memory = _memory_term(cfg)
    problem = build_problem(memory, build_input_hamiltonian(cfg.input), cfg.gamma)
    N = cfg.input.N
    driver = build_standard_driver(N) if cfg.driver == "standard" else (build_projector_driver(N),)
    return HamiltonianSpec(N, driver, problem, metadata={"memory_kind": cfg.memory_kind})


def _probabilities_on(patterns, probs) -> list:
    return [{"pattern": p.to_json(), "probability": float(probs[pattern_to_index(p)])}
            for p in patterns]


def _run_classical(cfg):
    out = recall(Pattern(cfg.input.values), cfg.weights(), cfg.update, cfg.max_iters, cfg.seed)
    return out.to_json()


def _run_anneal(cfg):
    spec = build_spec(cfg)
    sched = cfg.resolved_schedule()
    res = run_anneal(spec, sched, uniform_state(spec.n_qubits), tau=cfg.tau)
    payload = res.to_json()
    gaps = gap_scan(spec, sched, cfg.grid_points, cfg.tracked_level)
    payload["gap"] = {"min_gap": gaps.to_json()["min_gap"], "s_at_min": gaps.s_at_min}
    if cfg.shots:
        payload["samples"] = {str(k): v for k, v in sample_outcomes(res.distribution, cfg.shots, cfg.seed).items()}
    return payload


def _run_anneal_nmr(cfg):
    nmr = cfg.nmr or NmrConfig()
    res = run_nmr_experiment(int(cfg.w), cfg.input, cfg.gamma, nmr, cfg.resolved_schedule(), cfg.tau)
    payload = res.to_json()
    payload["operator_normalization"] = nmr.operator_normalization
    if cfg.shots:
        payload["samples"] = {str(k): v for k, v in sample_outcomes(res.distribution, cfg.shots, cfg.seed).items()}
    return payload


def _run_ground_state(cfg):
    spec = build_spec(cfg)
    s = dense_oracle(HamiltonianSpec(spec.n_qubits, (), spec.problem), 0.0)
    psi = s.ground_state()
    probs = np.abs(psi) ** 2
    has_patterns = cfg.memory is not None or cfg.w in _TWO_QUBIT_MEMORY
    pats = cfg.memory_set().patterns if has_patterns else ()
    top = sorted(np.flatnonzero(probs >= cfg.tau), key=lambda k: (-probs[k], k))
    return {
        "ground_energy": float(s.eigenvalues[0]),
        "pattern_probabilities": _probabilities_on(pats, probs),
        "recognized": [{"pattern": index_to_pattern(int(k), spec.n_qubits).to_json(),
                        "probability": float(probs[k])} for k in top],
        "probabilities": probs.tolist(),
    }


def _run_bounds(cfg):
    payload = {}
    N = cfg.N if cfg.N is not None else cfg.input.N
    n = cfg.n if cfg.n is not None else cfg.input.n
    payload["coupling_p1"] = gamma_bound_coupling(N, n)
    payload["projector_a"] = gamma_bound_projector(n) if n >= 1 else None
    payload["gamma_upper"] = payload["coupling_p1"] if cfg.memory_kind == "coupling" else payload["projector_a"]
    if cfg.memory is not None and cfg.input is not None:
        kind = cfg.memory_kind if cfg.memory_kind != "projector_b" else "projector_a"
        rep = verify_bound_brute_force(cfg.memory, cfg.input, kind, cfg.gamma_grid)
        payload["brute_force"] = rep.to_json()
    return payload


def _run_similarity(cfg):
    mem = cfg.memory_set()
    ranking = similarity_ranking(mem, cfg.input, cfg.gamma, cfg.method)
    report = perturbation_report(mem, cfg.input, cfg.gamma)
    energy, _ = exact_ground_state(mem, cfg.input, cfg.gamma)
    return {
        "method": cfg.method,
        "ranking": [{"pattern": p.to_json(), "probability": q} for p, q in ranking],
        "perturbation": report.to_json(),
        "exact_ground_energy": energy,
    }


def _run_gap(cfg):
    spec = build_spec(cfg)
    return gap_scan(spec, cfg.resolved_schedule(), cfg.grid_points, cfg.tracked_level).to_json()


_DISPATCH = {
    "classical": _run_classical,
    "anneal": _run_anneal,
    "anneal_nmr": _run_anneal_nmr,
    "ground_state": _run_ground_state,
    "bounds": _run_bounds,
    "similarity": _run_similarity,
    "gap": _run_gap,
}


def run_config(cfg: ExperimentConfig, write: bool = True) -> RunRecord:
    """Run one configuration and optionally persist its record in ``cfg.output_dir``."""
    t0 = time.perf_counter()
    results = _DISPATCH[cfg.mode](cfg)
    record = RunRecord(
        config=cfg.to_dict(),
        results=results,
        mode=cfg.mode,
        timestamp=datetime.now(timezone.utc).isoformat(),
        wall_time=time.perf_counter() - t0,
    )
    if write:
        record.write(cfg.output_dir)
    return record
