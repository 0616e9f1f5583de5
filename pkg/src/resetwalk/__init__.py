"""Monotone drift-jump walks under Poissonian resetting.

A library and CLI for the process that climbs by constant drift and random
positive jumps and is knocked back to the origin by independent Poissonian
resets: exact event-driven simulation, the closed-form propagator and
stationary laws (power-law observable tails included), a Laplace-domain
engine with numerical inversion, exit-time statistics, and Monte Carlo
estimators that cross-validate every closed form.
"""

from .analytics import (
    MixedDensity,
    TailExponents,
    alpha_roots,
    atom_masses,
    mean_exit_time,
    met_limit,
    propagator_closed_form,
    stationary_density,
    stationary_moments,
    tail_exponents,
)
from .errors import ResetWalkError
from .model import (
    CustomJumps,
    ExponentialJumps,
    ModelParams,
    exponential_params,
    jump_laplace,
    jump_moment,
    validate,
)
from .montecarlo import (
    BinSpec,
    EmpiricalSummary,
    EstimateWithError,
    empirical_density,
    met_estimate,
    survival_estimate,
    tail_fit,
)
from .paths import EventLog, ExitCause, ExitRecord, first_exit, map_to_observable, simulate_events, state_at
from .transform import (
    InversionConfig,
    LaplaceFn,
    bessel_i1,
    bessel_i1_scaled,
    decomposition_check,
    invert_laplace,
    propagator_double_laplace,
    propagator_numeric,
    propagator_omega_time,
    survival_hat,
    survival_time_domain,
)

__version__ = "0.1.0"

__all__ = [
    "BinSpec",
    "CustomJumps",
    "EmpiricalSummary",
    "EstimateWithError",
    "EventLog",
    "ExitCause",
    "ExitRecord",
    "ExponentialJumps",
    "InversionConfig",
    "LaplaceFn",
    "MixedDensity",
    "ModelParams",
    "ResetWalkError",
    "TailExponents",
    "alpha_roots",
    "atom_masses",
    "bessel_i1",
    "bessel_i1_scaled",
    "decomposition_check",
    "empirical_density",
    "exponential_params",
    "first_exit",
    "invert_laplace",
    "jump_laplace",
    "jump_moment",
    "map_to_observable",
    "mean_exit_time",
    "met_estimate",
    "met_limit",
    "propagator_closed_form",
    "propagator_double_laplace",
    "propagator_numeric",
    "propagator_omega_time",
    "simulate_events",
    "state_at",
    "stationary_density",
    "stationary_moments",
    "survival_estimate",
    "survival_hat",
    "survival_time_domain",
    "tail_exponents",
    "tail_fit",
    "validate",
]
