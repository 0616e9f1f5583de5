"""Exact event-driven simulation of the walk and its first exit from [0, b].

Two independent exponential clocks (jump intensity and reset intensity) race;
the path is advanced event to event with no time discretization.  Between
events the position is the last event's value plus drift, so boundary
crossings are solved exactly from the linear motion.

All entry points are pure functions of ``(params, seed, path_index)`` and may
be fanned out across workers freely; see :mod:`resetwalk._kernels` for the
stream/reproducibility contract.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .errors import DomainError, NoExitBudget, OutOfHorizon, UnsupportedRegime
from .model import ExponentialJumps, ModelParams

DEFAULT_MAX_EVENTS = 10**9

JUMP = 0
RESET = 1


@dataclass(frozen=True)
class EventLog:
    """Ordered jump/reset events of one path on (0, horizon].

    ``kinds`` holds 0 for a jump, 1 for a reset; ``sizes`` is NaN on reset
    rows.  Event times are strictly increasing with probability one (the
    clocks are continuous), and simultaneous events would resolve reset-first.
    """

    times: np.ndarray
    kinds: np.ndarray
    sizes: np.ndarray
    horizon: float
    seed: int
    path_index: int = 0

    def __len__(self) -> int:
        return len(self.times)

    def events(self):
        """Yield (time, "jump"|"reset", size-or-None) tuples."""
        for t, k, z in zip(self.times, self.kinds, self.sizes):
            yield (float(t), "jump" if k == JUMP else "reset", float(z) if k == JUMP else None)


class ExitCause(enum.Enum):
    DRIFT_HIT = "drift_hit"
    JUMP_OVERSHOOT = "jump_overshoot"


@dataclass(frozen=True)
class ExitRecord:
    exit_time: float
    exit_cause: ExitCause
    n_jumps: int
    n_resets: int
    seed: int
    path_index: int = 0


def _require_exponential(params: ModelParams) -> float:
    if not isinstance(params.jump_law, ExponentialJumps):
        raise UnsupportedRegime(
            "event simulation draws jump sizes natively only for the exponential law"
        )
    return params.jump_law.rate


def simulate_events(params: ModelParams, horizon: float, seed: int, path_index: int = 0) -> EventLog:
    """Simulate all events of one path on (0, horizon]."""
    if horizon <= 0:
        raise DomainError(f"horizon must be > 0, got {horizon!r}")
    rate = _require_exponential(params)
    times, kinds, sizes = _k.simulate_events_arrays(
        params.lambda_jump, params.lambda_reset, rate, horizon, seed, path_index
    )
    return EventLog(times=times, kinds=kinds, sizes=sizes, horizon=horizon,
                    seed=seed, path_index=path_index)


def state_at(log: EventLog, params: ModelParams, t: float) -> float:
    """X(t) reconstructed from the log: drift since the last reset plus the
    jumps after it; the starting point survives only until the first reset.

    Jumps at exactly ``t`` count (the step function is closed on the left);
    at a reset instant the state is exactly zero.
    """
    if t < 0 or t > log.horizon:
        raise OutOfHorizon(f"t={t!r} outside [0, {log.horizon}]")
    upto = np.searchsorted(log.times, t, side="right")
    kinds = log.kinds[:upto]
    reset_positions = np.nonzero(kinds == RESET)[0]
    if reset_positions.size:
        last_reset = reset_positions[-1]
        t_star = float(log.times[last_reset])
        base = 0.0
        start = last_reset + 1
    else:
        t_star = 0.0
        base = params.x0
        start = 0
    jump_rows = np.nonzero(kinds[start:upto] == JUMP)[0] + start
    return base + params.gamma_drift * (t - t_star) + float(np.sum(log.sizes[jump_rows]))


def first_exit(params: ModelParams, b: float, seed: int, path_index: int = 0,
               max_events: int = DEFAULT_MAX_EVENTS) -> ExitRecord:
    """First time the path leaves [0, b], sampled exactly.

    A drift crossing is located by solving the linear motion between events,
    so the exit time carries no discretization bias.  Exit happens the
    instant X >= b: by drift exactly at b, or by a jump overshooting it.
    """
    if not (0 <= params.x0 < b):
        raise DomainError(f"need 0 <= x0 < b, got x0={params.x0!r}, b={b!r}")
    rate = _require_exponential(params)
    s = np.empty(4, dtype=np.uint64)
    _k._stream_init(seed, path_index, s)
    t, cause, n_jumps, n_resets = _k._path_first_exit(
        params.lambda_jump, params.lambda_reset, rate, params.gamma_drift,
        params.x0, b, max_events, s
    )
    if cause == _k.CAUSE_CENSORED:
        raise NoExitBudget(
            f"no exit within {max_events} events (gamma_drift={params.gamma_drift}, "
            f"lambda_jump={params.lambda_jump}, lambda_reset={params.lambda_reset}, b={b})"
        )
    return ExitRecord(
        exit_time=float(t),
        exit_cause=ExitCause.DRIFT_HIT if cause == _k.CAUSE_DRIFT else ExitCause.JUMP_OVERSHOOT,
        n_jumps=int(n_jumps),
        n_resets=int(n_resets),
        seed=seed,
        path_index=path_index,
    )


def map_to_observable(x, params: ModelParams):
    """Observable value y = y0 * exp(sign * x); accepts scalars or arrays."""
    return params.y0 * np.exp(params.observable_sign * np.asarray(x, dtype=float))


def dump_csv(log: EventLog, params: ModelParams, path) -> None:
    """Write one trajectory as (time, kind, size, x_after) rows for debugging."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "kind", "size", "x_after"])
        for t, kind, size in log.events():
            w.writerow([f"{t:.17g}", kind,
                        "" if size is None else f"{size:.17g}",
                        f"{state_at(log, params, t):.17g}"])
