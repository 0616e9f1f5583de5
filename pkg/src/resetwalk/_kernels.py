"""Numba kernels: per-path RNG streams and event-driven samplers.

Reproducibility contract: path ``i`` under master seed ``s`` always consumes
the same random stream, no matter how many threads execute the batch.  Each
path owns an xoshiro256++ generator whose state is derived from ``(s, i)``
through splitmix64, the initialization recommended by the xoshiro authors.
Batch kernels only ever write to their own path's slot, so ``prange``
scheduling cannot change results; all reductions happen afterwards in fixed
order on the caller's side.

Draw order per path is part of the contract: the jump clock is primed first,
then the reset clock; a jump consumes (size, next gap), a reset consumes
(next gap).  Ties between simultaneous events resolve reset-first, and a
drift boundary hit at the exact instant of a reset loses to the reset (the
walk is already back at the origin at that instant).
"""

import numpy as np
from numba import njit, prange

U64 = np.uint64

# X(tau) sample classification
TAG_CONTINUOUS = 0
TAG_FRONT_ATOM = 1   # no event at all: X(tau) = x0 + drift * tau exactly
TAG_ORIGIN_ATOM = 2  # driftless, last event a reset, no jump since: X(tau) = 0

# first-exit causes
CAUSE_DRIFT = 0
CAUSE_JUMP = 1
CAUSE_CENSORED = -1


@njit(cache=True, inline="always")
def _sm64(x):
    """One splitmix64 step: returns (advanced state, mixed output)."""
    x = x + U64(0x9E3779B97F4A7C15)
    z = x
    z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
    return x, z ^ (z >> U64(31))


@njit(cache=True)
def _stream_init(seed, path, s):
    """Fill ``s`` (uint64[4]) with the xoshiro256++ state for (seed, path)."""
    x = (U64(seed) * U64(0x9E3779B97F4A7C15)) ^ (U64(path) * U64(0xC2B2AE3D27D4EB4F))
    nonzero = U64(0)
    for i in range(4):
        x, out = _sm64(x)
        s[i] = out
        nonzero |= out
    if nonzero == U64(0):
        s[0] = U64(1)


@njit(cache=True, inline="always")
def _rotl(x, k):
    return (x << U64(k)) | (x >> U64(64 - k))


@njit(cache=True, inline="always")
def _next_u64(s):
    out = _rotl(s[0] + s[3], 23) + s[0]
    t = s[1] << U64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return out


@njit(cache=True, inline="always")
def _next_exp(s):
    # uniform strictly inside (0,1) so the exponential draw is finite and > 0
    u = (float(_next_u64(s) >> U64(11)) + 0.5) * 1.1102230246251565e-16
    return -np.log(u)


# --- X(tau) sampling ---------------------------------------------------------


@njit(cache=True)
def _path_state(lam, big_lam, jump_rate, drift, x0, tau, s):
    """Run one path to time ``tau``; return (X(tau), atom tag).

    The final value is assembled exactly as ``base + drift*(tau - t_reset) +
    sum(jumps since reset)`` so that atom membership is decided by event
    counting, never by floating-point equality.
    """
    nj = _next_exp(s) / lam if lam > 0.0 else np.inf
    nr = _next_exp(s) / big_lam if big_lam > 0.0 else np.inf
    t_reset = 0.0
    had_reset = False
    any_event = False
    jump_sum = 0.0
    jumps_since_reset = 0
    while True:
        if nr <= nj:
            if nr > tau:
                break
            t_reset = nr
            had_reset = True
            any_event = True
            jump_sum = 0.0
            jumps_since_reset = 0
            nr = t_reset + _next_exp(s) / big_lam
        else:
            if nj > tau:
                break
            jump_sum += _next_exp(s) / jump_rate
            jumps_since_reset += 1
            any_event = True
            nj = nj + _next_exp(s) / lam
    base = 0.0 if had_reset else x0
    x = base + drift * (tau - t_reset) + jump_sum
    if not any_event:
        tag = TAG_FRONT_ATOM
    elif drift == 0.0 and had_reset and jumps_since_reset == 0:
        tag = TAG_ORIGIN_ATOM
    else:
        tag = TAG_CONTINUOUS
    return x, tag


@njit(cache=True, parallel=True)
def sample_states(lam, big_lam, jump_rate, drift, x0, tau, n, seed, xs, tags):
    for i in prange(n):
        s = np.empty(4, dtype=np.uint64)
        _stream_init(seed, i, s)
        x, tag = _path_state(lam, big_lam, jump_rate, drift, x0, tau, s)
        xs[i] = x
        tags[i] = tag


# --- first exit from [0, b] --------------------------------------------------


@njit(cache=True)
def _path_first_exit(lam, big_lam, jump_rate, drift, x0, b, max_events, s):
    """Exact event-to-event first-exit sample.

    Between events the drift crossing is solved linearly, never stepped.
    Returns (exit_time, cause, n_jumps, n_resets); a censored path (event
    budget exhausted) reports cause CAUSE_CENSORED and time NaN.
    """
    nj = _next_exp(s) / lam if lam > 0.0 else np.inf
    nr = _next_exp(s) / big_lam if big_lam > 0.0 else np.inf
    t_last = 0.0
    x = x0
    n_jumps = 0
    n_resets = 0
    events = 0
    while True:
        t_hit = t_last + (b - x) / drift if drift > 0.0 else np.inf
        if t_hit <= nj and t_hit < nr:
            return t_hit, CAUSE_DRIFT, n_jumps, n_resets
        if events >= max_events:
            return np.nan, CAUSE_CENSORED, n_jumps, n_resets
        if nr <= nj:
            x = 0.0
            t_last = nr
            n_resets += 1
            nr = t_last + _next_exp(s) / big_lam
        else:
            x = x + drift * (nj - t_last)
            t_last = nj
            x += _next_exp(s) / jump_rate
            n_jumps += 1
            if x >= b:
                return t_last, CAUSE_JUMP, n_jumps, n_resets
            nj = t_last + _next_exp(s) / lam
        events += 1


@njit(cache=True, parallel=True)
def sample_exits(lam, big_lam, jump_rate, drift, x0, b, n, seed, max_events,
                 times, causes, n_jumps, n_resets):
    for i in prange(n):
        s = np.empty(4, dtype=np.uint64)
        _stream_init(seed, i, s)
        t, c, kj, kr = _path_first_exit(lam, big_lam, jump_rate, drift, x0, b, max_events, s)
        times[i] = t
        causes[i] = c
        n_jumps[i] = kj
        n_resets[i] = kr


# --- full event log (single path) --------------------------------------------


@njit(cache=True)
def simulate_events_arrays(lam, big_lam, jump_rate, horizon, seed, path):
    """All jump/reset events in (0, horizon] for one path.

    Returns (times, kinds, sizes) with kind 0 = jump, 1 = reset; sizes are
    NaN on reset rows.  Consumes the stream exactly like ``_path_state``.
    """
    s = np.empty(4, dtype=np.uint64)
    _stream_init(seed, path, s)
    cap = 64 + int((lam + big_lam) * horizon * 1.5)
    times = np.empty(cap, dtype=np.float64)
    kinds = np.empty(cap, dtype=np.int8)
    sizes = np.empty(cap, dtype=np.float64)
    n = 0
    nj = _next_exp(s) / lam if lam > 0.0 else np.inf
    nr = _next_exp(s) / big_lam if big_lam > 0.0 else np.inf
    while True:
        take_reset = nr <= nj
        tn = nr if take_reset else nj
        if tn > horizon:
            break
        if n == cap:
            cap2 = 2 * cap
            t2 = np.empty(cap2, dtype=np.float64)
            k2 = np.empty(cap2, dtype=np.int8)
            z2 = np.empty(cap2, dtype=np.float64)
            t2[:n] = times[:n]
            k2[:n] = kinds[:n]
            z2[:n] = sizes[:n]
            times, kinds, sizes, cap = t2, k2, z2, cap2
        if take_reset:
            times[n] = tn
            kinds[n] = 1
            sizes[n] = np.nan
            nr = tn + _next_exp(s) / big_lam
        else:
            size = _next_exp(s) / jump_rate
            times[n] = tn
            kinds[n] = 0
            sizes[n] = size
            nj = tn + _next_exp(s) / lam
        n += 1
    return times[:n].copy(), kinds[:n].copy(), sizes[:n].copy()


# --- interval visits (irreducibility, driftless case) -------------------------


@njit(cache=True)
def _path_visits(lam, big_lam, jump_rate, x0, lo, hi, tau, s):
    """Driftless path: did X enter [lo, hi] at any time in [0, tau]?"""
    x = x0
    if lo <= x <= hi:
        return True
    nj = _next_exp(s) / lam if lam > 0.0 else np.inf
    nr = _next_exp(s) / big_lam if big_lam > 0.0 else np.inf
    while True:
        if nr <= nj:
            if nr > tau:
                return False
            x = 0.0
            nr = nr + _next_exp(s) / big_lam
        else:
            if nj > tau:
                return False
            x += _next_exp(s) / jump_rate
            nj = nj + _next_exp(s) / lam
        if lo <= x <= hi:
            return True


@njit(cache=True, parallel=True)
def sample_visits(lam, big_lam, jump_rate, x0, lo, hi, tau, n, seed, hits):
    for i in prange(n):
        s = np.empty(4, dtype=np.uint64)
        _stream_init(seed, i, s)
        hits[i] = _path_visits(lam, big_lam, jump_rate, x0, lo, hi, tau, s)
