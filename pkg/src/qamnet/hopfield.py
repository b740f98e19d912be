"""Classical Hopfield network baseline.

Neurons take values +-1 and follow S_i <- sgn(r_i) with the response
r_i = sum_{j != i} w_ij S_j. A zero response keeps the current spin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NonTerminationError, ValidationError
from .patterns import Pattern, WeightMatrix

__all__ = ["HopfieldState", "RecallOutcome", "update_async", "update_sync", "recall"]


@dataclass(frozen=True)
class HopfieldState:
    spins: Pattern
    time_step: int = 0

    def __post_init__(self):
        if not isinstance(self.spins, Pattern):
            object.__setattr__(self, "spins", Pattern(self.spins))
        if self.time_step < 0:
            raise ValidationError("time_step must be nonnegative")


@dataclass(frozen=True)
class RecallOutcome:
    kind: str  # "fixed_point" or "cycle"
    trajectory: list = field(default_factory=list)
    period: int = 1

    @property
    def final(self) -> Pattern:
        return self.trajectory[-1].spins

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "period": self.period,
            "trajectory": [s.spins.to_json() for s in self.trajectory],
        }


def _check(state: HopfieldState, w: WeightMatrix):
    if state.spins.N != w.N:
        raise DimensionError(f"{state.spins.N} spins vs {w.N}x{w.N} weights")


def _sgn_keep(x: float, current: int) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return current


def update_async(state: HopfieldState, w: WeightMatrix, order) -> HopfieldState:
    """One sweep updating neurons one at a time in ``order`` (0-based indices)."""
    _check(state, w)
    order = [int(i) for i in order]
    if sorted(order) != list(range(w.N)):
        raise ValidationError(f"order {order} is not a permutation of 0..{w.N - 1}")
    s = state.spins.array()
    W = w.entries
    for i in order:
        # W has zero diagonal, so the full dot product equals the j != i sum
        s[i] = _sgn_keep(float(W[i] @ s), int(s[i]))
    return HopfieldState(Pattern(tuple(s)), state.time_step + 1)


def update_sync(state: HopfieldState, w: WeightMatrix) -> HopfieldState:
    _check(state, w)
    s = state.spins.array()
    r = w.entries @ s
    new = np.where(r > 0, 1, np.where(r < 0, -1, s))
    return HopfieldState(Pattern(tuple(new)), state.time_step + 1)


def recall(inp: Pattern, w: WeightMatrix, mode: str = "async", max_iters: int = 1000,
           seed: int = 0) -> RecallOutcome:
    """Iterate sweeps from ``inp`` until a fixed point or a revisited state.

    Async mode draws a fresh uniformly random update order for every sweep
    from a generator seeded with ``seed``.

    Raises:
        NonTerminationError: ``max_iters`` sweeps passed without convergence.
    """
    if mode not in ("async", "sync"):
        raise ValidationError(f"unknown mode {mode!r}", field="mode")
    if max_iters < 1:
        raise ValidationError("max_iters must be positive", field="max_iters")
    if not isinstance(inp, Pattern):
        inp = Pattern(inp)
    rng = np.random.default_rng(seed)
    current = HopfieldState(inp, 0)
    _check(current, w)
    trajectory = [current]
    seen = {current.spins: 0}
    for _ in range(max_iters):
        if mode == "async":
            nxt = update_async(current, w, rng.permutation(w.N))
        else:
            nxt = update_sync(current, w)
        if nxt.spins == current.spins:
            return RecallOutcome("fixed_point", trajectory, 1)
        if nxt.spins in seen:
            return RecallOutcome("cycle", trajectory, len(trajectory) - seen[nxt.spins])
        seen[nxt.spins] = len(trajectory)
        trajectory.append(nxt)
        current = nxt
    raise NonTerminationError(f"no fixed point or cycle within {max_iters} sweeps", trajectory)
