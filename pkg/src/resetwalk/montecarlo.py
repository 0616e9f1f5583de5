"""Monte Carlo estimators and the statistical validation harness.

Estimators pair each closed form with an independent sampled counterpart:
empirical densities with exact atom detection, exit-time and survival
estimates with standard errors, tail-slope fits on log-binned histograms,
and the semigroup/invariance/irreducibility checks.

Atom membership is decided by event counting inside the simulation kernels
(a path with no events sits on the drift front; a driftless path whose last
event was a reset sits at the origin), never by floating-point comparison of
positions.  All estimators are bit-reproducible for a fixed (params, n,
seed) regardless of the number of worker threads.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from . import _kernels as _k
from .analytics import (
    MixedDensity,
    atom_masses,
    propagator_closed_form,
    propagator_time_integral,
    reset_free_density,
    stationary_density,
)
from .errors import (
    DomainError,
    InsufficientTail,
    NoExitBudget,
    UnsupportedRegime,
)
from .model import CustomJumps, ExponentialJumps, ModelParams
from .paths import map_to_observable

DEFAULT_MAX_EVENTS = 10**9


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    std_error: float
    n: int

    def within(self, target: float, n_sigma: float = 3.0) -> bool:
        return abs(self.value - target) <= n_sigma * self.std_error


@dataclass(frozen=True)
class AtomEstimate:
    location: float
    mass: float
    std_error: float
    count: int


@dataclass(frozen=True)
class BinSpec:
    """Histogram request: linear bins for the walk, logarithmic for the
    observable.  Unset edges stretch to cover the sampled range."""

    domain: str = "X"  # "X" | "Y"
    n_bins: int = 120
    lo: Optional[float] = None
    hi: Optional[float] = None


@dataclass(frozen=True)
class EmpiricalSummary:
    """Histogram plus atom masses estimated from one batch of paths."""

    domain: str
    edges: np.ndarray
    counts: np.ndarray
    atoms: Tuple[AtomEstimate, ...]
    n_paths: int
    seed: int
    n_below: int = 0
    n_above: int = 0
    elapsed_s: float = 0.0

    def centers(self) -> np.ndarray:
        if self.domain == "Y":
            return np.sqrt(self.edges[:-1] * self.edges[1:])
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def density(self):
        """(centers, density, standard error of the density) per bin."""
        w = self.widths()
        p = self.counts / self.n_paths
        dens = p / w
        se = np.sqrt(p * (1.0 - p) / self.n_paths) / w
        return self.centers(), dens, se

    def total_accounted(self) -> int:
        return int(self.counts.sum()) + sum(a.count for a in self.atoms) \
            + self.n_below + self.n_above

    def to_csv(self, path) -> None:
        """Write the histogram and a companion ``<path>.atoms.csv`` table."""
        centers, dens, se = self.density()
        with open(path, "w") as fh:
            fh.write(f"# resetwalk-csv v1 summary domain={self.domain} "
                     f"n={self.n_paths} seed={self.seed}\n")
            fh.write("bin_lo,bin_hi,count,density,density_se\n")
            for i, c in enumerate(centers):
                fh.write(f"{self.edges[i]:.10g},{self.edges[i + 1]:.10g},"
                         f"{self.counts[i]},{dens[i]:.10g},{se[i]:.10g}\n")
        with open(f"{path}.atoms.csv", "w") as fh:
            fh.write("location,mass,std_error,count\n")
            for a in self.atoms:
                fh.write(f"{a.location:.10g},{a.mass:.10g},{a.std_error:.10g},{a.count}\n")


# --- sampling front ends -----------------------------------------------------


def _require_simulable(params: ModelParams) -> None:
    if isinstance(params.jump_law, ExponentialJumps):
        return
    if isinstance(params.jump_law, CustomJumps) and params.jump_law.sampler is not None:
        return
    raise UnsupportedRegime(
        "Monte Carlo needs a sampleable jump law: exponential, or a custom law with a sampler"
    )


def _sample_states(params: ModelParams, tau: float, n: int, seed: int):
    """(values of X(tau), atom tags) for n paths."""
    _require_simulable(params)
    xs = np.empty(n, dtype=np.float64)
    tags = np.empty(n, dtype=np.int8)
    if isinstance(params.jump_law, ExponentialJumps):
        _k.sample_states(
            params.lambda_jump, params.lambda_reset, params.jump_law.rate,
            params.gamma_drift, params.x0, tau, n, seed, xs, tags,
        )
        return xs, tags
    # custom law with a sampler: slower pure-python event loop, still
    # deterministic per (seed, path) through spawned bit generators
    draw = params.jump_law.sampler
    lam, big_lam, drift, x0 = (
        params.lambda_jump, params.lambda_reset, params.gamma_drift, params.x0,
    )
    root = np.random.SeedSequence(seed)
    for i, child in enumerate(root.spawn(n)):
        rng = np.random.Generator(np.random.Philox(child))
        nj = rng.exponential(1.0 / lam) if lam > 0 else math.inf
        nr = rng.exponential(1.0 / big_lam) if big_lam > 0 else math.inf
        t_reset, had_reset, any_event = 0.0, False, False
        jump_sum, since_reset = 0.0, 0
        while True:
            if nr <= nj:
                if nr > tau:
                    break
                t_reset, had_reset, any_event = nr, True, True
                jump_sum, since_reset = 0.0, 0
                nr += rng.exponential(1.0 / big_lam)
            else:
                if nj > tau:
                    break
                jump_sum += draw(rng)
                since_reset += 1
                any_event = True
                nj += rng.exponential(1.0 / lam)
        base = 0.0 if had_reset else x0
        xs[i] = base + drift * (tau - t_reset) + jump_sum
        if not any_event:
            tags[i] = _k.TAG_FRONT_ATOM
        elif drift == 0.0 and had_reset and since_reset == 0:
            tags[i] = _k.TAG_ORIGIN_ATOM
        else:
            tags[i] = _k.TAG_CONTINUOUS
    return xs, tags


def summarize_states(xs: np.ndarray, tags: np.ndarray, params: ModelParams, tau: float,
                     bin_spec: BinSpec, seed: int, elapsed_s: float = 0.0) -> EmpiricalSummary:
    """Histogram a batch of (X(tau), tag) samples into an EmpiricalSummary."""
    n = len(xs)
    front_loc = params.x0 + params.gamma_drift * tau
    atom_list = []
    front_mask = tags == _k.TAG_FRONT_ATOM
    origin_mask = tags == _k.TAG_ORIGIN_ATOM

    def estimate(loc, count):
        p = count / n
        return AtomEstimate(loc, p, math.sqrt(p * (1.0 - p) / n), count)

    # coinciding locations merge (driftless start at the origin piles both
    # the no-event and the post-reset mass onto x = 0)
    atom_counts: dict = {}
    if params.gamma_drift == 0.0 and params.lambda_reset > 0.0:
        atom_counts[0.0] = int(origin_mask.sum())
    atom_counts[front_loc] = atom_counts.get(front_loc, 0) + int(front_mask.sum())
    for loc in sorted(atom_counts):
        atom_list.append(estimate(loc, atom_counts[loc]))

    cont = xs[tags == _k.TAG_CONTINUOUS]
    if bin_spec.domain == "Y":
        cont_v = np.asarray(map_to_observable(cont, params))
        atom_list = [
            AtomEstimate(float(map_to_observable(a.location, params)), a.mass, a.std_error, a.count)
            for a in atom_list
        ]
        lo = bin_spec.lo if bin_spec.lo is not None else float(params.y0)
        hi = bin_spec.hi if bin_spec.hi is not None else \
            (float(cont_v.max()) * 1.0001 if cont_v.size else lo * 10.0)
        lo = max(lo, 1e-300)
        edges = np.geomspace(lo, hi, bin_spec.n_bins + 1)
    else:
        cont_v = cont
        lo = bin_spec.lo if bin_spec.lo is not None else 0.0
        hi = bin_spec.hi if bin_spec.hi is not None else \
            (float(cont_v.max()) * 1.0001 + 1e-12 if cont_v.size else lo + 1.0)
        edges = np.linspace(lo, hi, bin_spec.n_bins + 1)
    counts, _ = np.histogram(cont_v, bins=edges)
    n_below = int((cont_v < edges[0]).sum())
    n_above = int((cont_v > edges[-1]).sum())
    return EmpiricalSummary(
        domain=bin_spec.domain, edges=edges, counts=counts, atoms=tuple(atom_list),
        n_paths=n, seed=seed, n_below=n_below, n_above=n_above, elapsed_s=elapsed_s,
    )


def empirical_density(params: ModelParams, tau: float, n_paths: int,
                      bin_spec: BinSpec = BinSpec(), seed: int = 0) -> EmpiricalSummary:
    """Simulate ``n_paths`` to time ``tau`` and histogram the endpoint.

    Every path is simulated event by event; nothing is drawn from the
    distributional identities this estimator exists to verify.
    """
    if n_paths < 1:
        raise DomainError("n_paths must be >= 1")
    if tau <= 0:
        raise DomainError("tau must be > 0")
    t0 = time.perf_counter()
    xs, tags = _sample_states(params, tau, n_paths, seed)
    return summarize_states(xs, tags, params, tau, bin_spec, seed,
                            elapsed_s=time.perf_counter() - t0)


def exit_samples(params: ModelParams, b: float, x0: Optional[float], n_paths: int, seed: int,
                 max_events: int = DEFAULT_MAX_EVENTS):
    """Raw first-exit samples: (times, causes, n_jumps, n_resets)."""
    if not isinstance(params.jump_law, ExponentialJumps):
        raise UnsupportedRegime("exit sampling is implemented for the exponential law")
    start = params.x0 if x0 is None else x0
    if not (0 <= start < b):
        raise DomainError(f"need 0 <= x0 < b, got x0={start!r}, b={b!r}")
    if params.gamma_drift == 0.0 and params.lambda_jump == 0.0:
        raise UnsupportedRegime("the frozen process never exits [0, b]")
    times = np.empty(n_paths, dtype=np.float64)
    causes = np.empty(n_paths, dtype=np.int8)
    n_jumps = np.empty(n_paths, dtype=np.int64)
    n_resets = np.empty(n_paths, dtype=np.int64)
    _k.sample_exits(
        params.lambda_jump, params.lambda_reset, params.jump_law.rate, params.gamma_drift,
        start, b, n_paths, seed, max_events, times, causes, n_jumps, n_resets,
    )
    return times, causes, n_jumps, n_resets


def met_estimate(params: ModelParams, b: float, x0: Optional[float] = None,
                 n_paths: int = 10**5, seed: int = 0,
                 max_events: int = DEFAULT_MAX_EVENTS) -> EstimateWithError:
    """Sample mean of the first-exit time; exact sampling, no horizon cutoff."""
    times, causes, _, _ = exit_samples(params, b, x0, n_paths, seed, max_events)
    censored = int((causes == _k.CAUSE_CENSORED).sum())
    if censored:
        raise NoExitBudget(
            f"{censored} of {n_paths} paths exhausted the {max_events}-event budget",
            n_censored=censored,
        )
    return EstimateWithError(float(times.mean()),
                             float(times.std(ddof=1) / math.sqrt(n_paths)), n_paths)


def survival_estimate(params: ModelParams, b: float, x0: Optional[float],
                      tau_grid: Sequence[float], n_paths: int = 10**5, seed: int = 0,
                      max_events: int = DEFAULT_MAX_EVENTS):
    """Empirical survival curve: fraction of paths still inside [0, b] at
    each grid time.  Returns one EstimateWithError per grid point."""
    grid = np.asarray(tau_grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("tau_grid must be strictly increasing and positive")
    times, causes, _, _ = exit_samples(params, b, x0, n_paths, seed, max_events)
    censored = int((causes == _k.CAUSE_CENSORED).sum())
    if censored:
        raise NoExitBudget(f"{censored} paths censored", n_censored=censored)
    out = []
    for tau in grid:
        p = float((times > tau).mean())
        out.append(EstimateWithError(p, math.sqrt(p * (1.0 - p) / n_paths), n_paths))
    return out


# --- tail-slope fit ------------------------------------------------------------


@dataclass(frozen=True)
class TailFitResult:
    """Weighted least-squares fit of log density against log y.

    The fitted ``slope`` estimates ``-(1 + exponent)``; ``exponent`` is the
    implied power-law tail exponent (same standard error).
    """

    slope: float
    slope_se: float
    n_bins: int

    @property
    def exponent(self) -> float:
        return -self.slope - 1.0

    @property
    def exponent_se(self) -> float:
        return self.slope_se


def tail_fit(summary: EmpiricalSummary, y_range: Tuple[float, float],
             min_count: int = 100, min_bins: int = 10) -> TailFitResult:
    """Fit the histogram's power-law decay over ``y_range``.

    Weights are the Poisson bin counts, the natural inverse variance of a
    log count; bins with fewer than ``min_count`` entries are dropped.
    """
    if summary.domain != "Y":
        raise DomainError("tail fits need a logarithmic observable histogram (domain 'Y')")
    lo, hi = y_range
    inside = (summary.edges[:-1] >= lo) & (summary.edges[1:] <= hi)
    counts = summary.counts[inside]
    if int((counts >= min_count).sum()) < min_bins:
        raise InsufficientTail(
            f"need at least {min_bins} bins with {min_count}+ samples in [{lo}, {hi}]"
        )
    keep = counts >= min_count
    counts = counts[keep].astype(float)
    centers = summary.centers()[inside][keep]
    widths = summary.widths()[inside][keep]
    dens = counts / (summary.n_paths * widths)
    x = np.log(centers)
    y = np.log(dens)
    w = counts
    wsum = w.sum()
    xbar = float((w * x).sum() / wsum)
    ybar = float((w * y).sum() / wsum)
    sxx = float((w * (x - xbar) ** 2).sum())
    slope = float((w * (x - xbar) * (y - ybar)).sum() / sxx)
    return TailFitResult(slope=slope, slope_se=1.0 / math.sqrt(sxx), n_bins=len(counts))


# --- semigroup and invariance checks ---------------------------------------------


def _continuous_at(params: ModelParams, x: float, tau: float, start: float) -> float:
    """Continuous propagator density (driftless exponential closed form)."""
    out = propagator_time_integral(params, x, tau)
    if x >= start:
        out += reset_free_density(params, x - start, tau)
    return out


def ck_check(params: ModelParams, tau1: float, tau2: float,
             grid: Sequence[float], x0: Optional[float] = None,
             epsabs: float = 1e-9) -> float:
    """Largest violation of the two-step composition of the propagator.

    Composes the closed form over an intermediate position by quadrature,
    handling the four atom cross-products analytically, and compares against
    the closed form for the total elapsed time on the given grid of
    positions (atoms compared alongside).
    """
    start = params.x0 if x0 is None else x0
    if tau1 <= 0 or tau2 <= 0:
        raise DomainError("both time steps must be > 0")
    rate = params.total_rate
    mf1, mf2 = math.exp(-rate * tau1), math.exp(-rate * tau2)
    w = params.lambda_reset / rate
    m01 = w * (-math.expm1(-rate * tau1))
    m02 = w * (-math.expm1(-rate * tau2))

    worst = 0.0
    # atom bookkeeping: origin and front of the composed kernel
    lhs_atoms = dict(atom_masses(params, tau1 + tau2, start))
    rhs_atoms: dict = {}
    rhs_atoms[0.0] = m01 + mf1 * m02
    rhs_atoms[start] = rhs_atoms.get(start, 0.0) + mf1 * mf2
    for loc in set(lhs_atoms) | set(rhs_atoms):
        worst = max(worst, abs(lhs_atoms.get(loc, 0.0) - rhs_atoms.get(loc, 0.0)))

    upper = None
    for x in grid:
        x = float(x)
        lhs = _continuous_at(params, x, tau1 + tau2, start)
        rhs = (
            mf1 * _continuous_at(params, x, tau2, start)
            + m02 * _continuous_at(params, x, tau1, 0.0)
            + mf2 * _continuous_at(params, x, tau1, start)
        )
        # the post-reset part of the tau1 kernel does not depend on the
        # intermediate point, so it couples to the total continuous mass
        c2_mass = 1.0 - m02 - mf2
        rhs += propagator_time_integral(params, x, tau1) * c2_mass
        if x > 0:
            pts = [p for p in (start,) if 0.0 < p < x]
            val, _ = quad(
                lambda xb: reset_free_density(params, x - xb, tau1)
                * _continuous_at(params, xb, tau2, start),
                0.0, x, points=pts or None, epsabs=epsabs, limit=300,
            )
            rhs += val
        worst = max(worst, abs(lhs - rhs))
    return worst


def stationary_invariance_residual(params: ModelParams, tau: float,
                                   grid: Sequence[float], epsabs: float = 1e-9) -> float:
    """Propagating the stationary law for any time must reproduce it."""
    stat = stationary_density(params, "X")
    w0 = stat.atom_mass()
    cs = stat.density
    rate = params.total_rate
    mf = math.exp(-rate * tau)
    m0 = params.lambda_reset / rate * (-math.expm1(-rate * tau))

    worst = abs((m0 + w0 * mf) - w0)  # origin atom must close on itself
    for x in grid:
        x = float(x)
        lhs = float(cs(x))
        rhs = w0 * _continuous_at(params, x, tau, 0.0) + mf * float(cs(x))
        rhs += propagator_time_integral(params, x, tau) * (1.0 - w0)
        if x > 0:
            val, _ = quad(
                lambda xb: reset_free_density(params, x - xb, tau) * float(cs(xb)),
                0.0, x, epsabs=epsabs, limit=300,
            )
            rhs += val
        worst = max(worst, abs(lhs - rhs))
    return worst


# --- irreducibility ---------------------------------------------------------------


@dataclass(frozen=True)
class IrreducibilityResult:
    estimate: float
    std_error: float
    lower_bound: float
    passed: bool
    n: int


def irreducibility_check(params: ModelParams, interval: Tuple[float, float],
                         x0: Optional[float] = None, tau: float = 1.0,
                         n_paths: int = 10**5, seed: int = 0) -> IrreducibilityResult:
    """Monte Carlo visit probability of ``interval`` against the analytic
    lower bounds (single jump when starting below, reset-then-jump when
    starting above).  The bounds are derived for the driftless walk."""
    if params.gamma_drift != 0.0:
        raise UnsupportedRegime("the visit bounds are driftless statements")
    if not isinstance(params.jump_law, ExponentialJumps):
        raise UnsupportedRegime("visit bounds use the exponential jump integral")
    lo, hi = interval
    if not (0 <= lo < hi):
        raise DomainError(f"need 0 <= lo < hi, got {interval!r}")
    start = params.x0 if x0 is None else x0
    lam, big_lam, g = params.lambda_jump, params.lambda_reset, params.jump_law.rate

    hits = np.empty(n_paths, dtype=np.bool_)
    _k.sample_visits(lam, big_lam, g, start, lo, hi, tau, n_paths, seed, hits)
    p = float(hits.mean())
    se = math.sqrt(p * (1.0 - p) / n_paths)

    jump_mass = math.exp(-g * lo) - math.exp(-g * hi)
    if lo <= start <= hi:
        bound = 1.0
    elif start < lo:
        window = math.exp(-g * (lo - start)) - math.exp(-g * (hi - start))
        bound = math.exp(-big_lam * tau) * (-math.expm1(-lam * tau)) * window
    else:
        if abs(lam - big_lam) > 1e-12 * (lam + big_lam):
            bracket = (
                big_lam / (big_lam - lam) * (-math.expm1(-lam * tau))
                + lam / (lam - big_lam) * (-math.expm1(-big_lam * tau))
            )
        else:
            bracket = 1.0 - (1.0 + big_lam * tau) * math.exp(-big_lam * tau)
        bound = bracket * jump_mass
    return IrreducibilityResult(p, se, bound, p + 3.0 * se >= bound, n_paths)


# --- mixture oracle for the reset decomposition -----------------------------------


def mixture_states(params: ModelParams, tau: float, n: int, seed: int = 0) -> np.ndarray:
    """Sample X(tau) from the reset decomposition instead of the event loop.

    With probability exp(-Lambda tau) the walk never reset and evolves
    reset-free from x0 for the whole window; otherwise it evolves reset-free
    from the origin for the age of the most recent reset, truncated-
    exponentially distributed.  Distribution-identical to direct simulation,
    and deliberately sampled with an unrelated generator so the comparison
    is a real two-sample test.
    """
    if not isinstance(params.jump_law, ExponentialJumps):
        raise UnsupportedRegime("the mixture oracle draws exponential jumps")
    rng = np.random.default_rng(seed)
    lam, big_lam, drift, x0 = (
        params.lambda_jump, params.lambda_reset, params.gamma_drift, params.x0,
    )
    g = params.jump_law.rate
    if big_lam > 0:
        no_reset = rng.random(n) < math.exp(-big_lam * tau)
        v = rng.random(n)
        ages = -np.log1p(v * math.expm1(-big_lam * tau)) / big_lam
        ages = np.where(no_reset, tau, ages)
        starts = np.where(no_reset, x0, 0.0)
    else:
        ages = np.full(n, tau)
        starts = np.full(n, x0)
    counts = rng.poisson(lam * ages) if lam > 0 else np.zeros(n, dtype=int)
    jumps = np.zeros(n)
    mask = counts > 0
    if mask.any():
        jumps[mask] = rng.gamma(shape=counts[mask], scale=1.0 / g)
    return starts + drift * ages + jumps
