"""Process parameters and jump-size laws.

The model is a monotone random walk in continuous time: a constant drift
``gamma_drift`` plus positive jumps arriving with Poisson intensity
``lambda_jump``, interrupted by Poissonian resets (intensity ``lambda_reset``)
that instantly return the walk to the origin.  The physical observable is the
exponential of the walk, ``Y = y0 * exp(sign * X)``.

Everything downstream (closed forms, Laplace transforms, simulation) reads its
inputs from :class:`ModelParams`, so validation lives here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

from .errors import (
    InfiniteMoment,
    MissingLaplace,
    NegativeRate,
    PoleEvaluation,
    ZeroMotionWarning,
)


@dataclass(frozen=True)
class ExponentialJumps:
    """Jump sizes with density ``rate * exp(-rate * u)`` on ``u >= 0``."""

    rate: float

    def pdf(self, u):
        if u < 0:
            return 0.0
        return self.rate * math.exp(-self.rate * u)


@dataclass(frozen=True)
class CustomJumps:
    """A user-supplied jump-size law on ``u >= 0``.

    ``laplace`` must evaluate ``integral_0^inf pdf(u) exp(-w u) du`` and is
    mandatory for every transform-domain operation; there is no symbolic
    fallback.  ``complex_ok`` declares that ``laplace`` is trustworthy on the
    complex contours used by Talbot inversion; laws without it are restricted
    to the real-axis Gaver-Stehfest path.  ``sampler``, when given, maps an
    ``numpy.random.Generator`` to one jump size and enables Monte Carlo use.
    """

    pdf: Callable[[float], float]
    laplace: Optional[Callable[[complex], complex]] = None
    mean: Optional[float] = None
    second_moment: Optional[float] = None
    sampler: Optional[Callable] = None
    complex_ok: bool = False
    abscissa: float = 0.0  # rightmost singularity of `laplace` (in -omega)


JumpLaw = Union[ExponentialJumps, CustomJumps]


@dataclass(frozen=True)
class ModelParams:
    """The parameter quadruple plus observable map.

    Units: ``gamma_drift`` is position per time, ``lambda_jump`` and
    ``lambda_reset`` are events per time, the jump law lives on the position
    axis.  Rates are plain floats; formulas mix rates and positions too freely
    for unit wrappers to pay off.
    """

    gamma_drift: float
    lambda_jump: float
    lambda_reset: float
    jump_law: JumpLaw
    x0: float = 0.0
    y0: float = 1.0
    observable_sign: int = +1

    @property
    def total_rate(self) -> float:
        return self.lambda_jump + self.lambda_reset

    def is_exponential(self) -> bool:
        return isinstance(self.jump_law, ExponentialJumps)


def exponential_params(
    gamma_drift: float,
    lambda_jump: float,
    lambda_reset: float,
    jump_gamma: float,
    x0: float = 0.0,
    y0: float = 1.0,
    observable_sign: int = +1,
) -> ModelParams:
    """Convenience constructor for the exponential-jump model, validated."""
    return validate(
        ModelParams(
            gamma_drift=gamma_drift,
            lambda_jump=lambda_jump,
            lambda_reset=lambda_reset,
            jump_law=ExponentialJumps(jump_gamma),
            x0=x0,
            y0=y0,
            observable_sign=observable_sign,
        )
    )


def validate(params: ModelParams) -> ModelParams:
    """Check invariants and return the (normalized) parameter set.

    Raises :class:`NegativeRate` for sign violations.  The degenerate case
    ``gamma_drift == lambda_jump == 0`` is legal (the walk only sits and
    resets) but almost certainly a mistake, so it warns instead of raising;
    both the pure shot-noise (``lambda_jump == 0``) and the driftless
    (``gamma_drift == 0``) regimes are fully supported.
    """
    for name in ("gamma_drift", "lambda_jump", "lambda_reset"):
        v = getattr(params, name)
        if not math.isfinite(v) or v < 0:
            raise NegativeRate(f"{name} must be finite and >= 0, got {v!r}")
    if params.x0 < 0:
        raise NegativeRate(f"x0 must be >= 0, got {params.x0!r}")
    if params.y0 <= 0:
        raise NegativeRate(f"y0 must be > 0, got {params.y0!r}")
    if params.observable_sign not in (+1, -1):
        raise NegativeRate(f"observable_sign must be +1 or -1, got {params.observable_sign!r}")

    law = params.jump_law
    if isinstance(law, ExponentialJumps):
        if not math.isfinite(law.rate) or law.rate <= 0:
            raise NegativeRate(f"jump rate must be finite and > 0, got {law.rate!r}")
    elif isinstance(law, CustomJumps):
        if law.mean is not None and law.mean < 0:
            raise NegativeRate("custom jump mean must be >= 0")
    else:
        raise TypeError(f"unknown jump law {law!r}")

    if params.gamma_drift == 0.0 and params.lambda_jump == 0.0:
        warnings.warn(
            "gamma_drift == lambda_jump == 0: the process never moves between resets",
            ZeroMotionWarning,
            stacklevel=2,
        )
    return params


def jump_laplace(law: JumpLaw, omega):
    """Laplace transform of the jump-size density, ``integral pdf(u) e^(-omega u) du``.

    Accepts real or complex ``omega``.  For the exponential law this is
    exactly ``rate / (rate + omega)``, valid for ``Re(omega) > -rate``.
    """
    if isinstance(law, ExponentialJumps):
        g = law.rate
        re = omega.real if isinstance(omega, complex) else omega
        if re <= -g:
            raise PoleEvaluation(
                f"exponential jump transform has a pole at omega = {-g}; got Re(omega) = {re}"
            )
        return g / (g + omega)
    if law.laplace is None:
        raise MissingLaplace("custom jump law was built without a Laplace transform")
    re = omega.real if isinstance(omega, complex) else omega
    if re < -law.abscissa:
        raise PoleEvaluation(
            f"custom jump transform declared abscissa {-law.abscissa}; got Re(omega) = {re}"
        )
    return law.laplace(omega)


def jump_moment(law: JumpLaw, n: int) -> float:
    """First or second moment of the jump-size density."""
    if n not in (1, 2):
        raise ValueError("only moments n=1 and n=2 are supported")
    if isinstance(law, ExponentialJumps):
        return 1.0 / law.rate if n == 1 else 2.0 / law.rate**2
    m = law.mean if n == 1 else law.second_moment
    if m is None:
        raise InfiniteMoment(f"custom jump law declares no finite moment of order {n}")
    return m


# --- flat key=value configuration -------------------------------------------

CONFIG_KEYS = ("gamma_drift", "lambda_jump", "lambda_reset", "jump_gamma", "x0", "y0", "sign")


def params_from_mapping(mapping: dict) -> ModelParams:
    """Build exponential-jump parameters from string or numeric key/values."""
    unknown = set(mapping) - set(CONFIG_KEYS)
    if unknown:
        raise KeyError(f"unknown parameter keys: {sorted(unknown)}")
    get = lambda k, d: float(mapping.get(k, d))
    return exponential_params(
        gamma_drift=get("gamma_drift", 0.0),
        lambda_jump=get("lambda_jump", 0.0),
        lambda_reset=get("lambda_reset", 0.0),
        jump_gamma=get("jump_gamma", 1.0),
        x0=get("x0", 0.0),
        y0=get("y0", 1.0),
        observable_sign=int(float(mapping.get("sign", 1))),
    )


def read_config(path) -> dict:
    """Parse a flat ``key=value`` file; blank lines and ``#`` comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def with_start(params: ModelParams, x0: float) -> ModelParams:
    """Copy of ``params`` with a different starting point."""
    if x0 < 0:
        raise NegativeRate(f"x0 must be >= 0, got {x0!r}")
    return replace(params, x0=x0)
