"""Laplace-domain engine.

Closed double-transform solutions of the propagator, the reset-free
decomposition identity, survival-probability transforms with their scalar
self-consistency closure, numerical inversion (fixed Talbot and
Gaver-Stehfest), and the modified Bessel kernel that appears in the
driftless exponential-jump propagator.

Conventions: ``s`` is always the transform variable conjugate to time,
``omega`` the one conjugate to position.  Evaluators used on the Talbot
contour are analytic continuations; the real-axis domain guards live in
:func:`resetwalk.model.jump_laplace`, not here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numba import njit

from .errors import (
    DomainError,
    NonConvergence,
    NoStationaryLaw,
    PoleEvaluation,
    PrecisionLossWarning,
    SelfConsistencySingular,
    UnsupportedRegime,
)
from .model import ExponentialJumps, ModelParams

__all__ = [
    "LaplaceFn",
    "InversionConfig",
    "bessel_i1",
    "bessel_i1_scaled",
    "invert_laplace",
    "propagator_double_laplace",
    "propagator_omega_time",
    "decomposition_check",
    "stationary_transform",
    "survival_hat",
    "survival_time_domain",
    "propagator_numeric",
    "propagator_x_laplace",
]


# --- modified Bessel function of order one ------------------------------------
#
# The ascending series has only positive terms, so it is cancellation-free for
# any argument; it is used below the crossover.  Above it the large-argument
# expansion of exp(-z) I1(z) is summed to its smallest term.  The crossover
# sits at z = 20, where the expansion's floor (~1e-16 relative) has dropped
# below double-precision roundoff; at the textbook 7.5 the floor would only
# be ~1e-7, far short of what the propagator quadratures need.

_I1_CROSSOVER = 20.0


@njit(cache=True)
def _i1_series(z):
    half = 0.5 * z
    term = half
    total = half
    q = half * half
    k = 1.0
    while True:
        term *= q / (k * (k + 1.0))
        new = total + term
        if new == total:
            return total
        total = new
        k += 1.0


@njit(cache=True)
def _i1_asymptotic_scaled(z):
    # exp(-z) I1(z) ~ (1/sqrt(2 pi z)) * sum, truncated at the smallest term
    total = 1.0
    term = 1.0
    k = 1.0
    while True:
        nxt = term * ((2.0 * k - 1.0) ** 2 - 4.0) / (8.0 * k * z)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        k += 1.0
    return total / math.sqrt(2.0 * math.pi * z)


@njit(cache=True)
def _i1_scaled(z):
    if z < 0.0:
        return np.nan
    if z == 0.0:
        return 0.0
    if z < _I1_CROSSOVER:
        return _i1_series(z) * math.exp(-z)
    return _i1_asymptotic_scaled(z)


@njit(cache=True)
def _i1(z):
    if z < 0.0:
        return np.nan
    if z < _I1_CROSSOVER:
        return _i1_series(z)
    return _i1_asymptotic_scaled(z) * math.exp(z)


def bessel_i1(z):
    """I1(z) for real z >= 0 (overflows past z ~ 713, like exp does)."""
    if np.ndim(z) == 0:
        return _i1(float(z))
    arr = np.asarray(z, dtype=float)
    return np.array([_i1(v) for v in arr.ravel()]).reshape(arr.shape)


def bessel_i1_scaled(z):
    """exp(-z) I1(z); never overflows, usable up to z ~ 1e6 and beyond."""
    if np.ndim(z) == 0:
        return _i1_scaled(float(z))
    arr = np.asarray(z, dtype=float)
    return np.array([_i1_scaled(v) for v in arr.ravel()]).reshape(arr.shape)


# --- evaluable transforms and numerical inversion ------------------------------


@dataclass(frozen=True)
class LaplaceFn:
    """An evaluable Laplace transform tagged with its variable.

    ``evaluator`` must be analytic right of ``abscissa`` and real on the real
    axis there (transforms of real nonnegative functions).  Talbot needs it
    to accept complex arguments; Gaver-Stehfest only ever feeds it reals.
    """

    evaluator: Callable
    variable_tag: str = "time_s"  # or "space_omega"
    abscissa: float = 0.0


@dataclass(frozen=True)
class InversionConfig:
    """Inversion scheme selection.

    ``talbot`` (default, M=32 contour points) for transforms of smooth
    functions; ``gaver-stehfest`` (order N=14) for real-axis-only
    evaluators; ``euler`` (Bromwich-line trapezoid with Euler acceleration,
    N=40 terms) for transforms whose time function has jumps or kinks, which
    the deformed Talbot contour cannot represent below the discontinuity.
    """

    method: str = "talbot"  # "talbot" | "gaver-stehfest" | "euler"
    terms: Optional[int] = None

    def n_terms(self) -> int:
        if self.terms is not None:
            return self.terms
        return {"talbot": 32, "gaver-stehfest": 14, "euler": 40}[self.method]


_DEFAULT_CFG = InversionConfig()


def _talbot(fhat: Callable, t: float, M: int) -> float:
    theta = np.arange(M) * (math.pi / M)
    cot = np.empty(M)
    cot[0] = 0.0
    cot[1:] = 1.0 / np.tan(theta[1:])
    r = 2.0 * M / (5.0 * t)
    nodes = r * theta * (cot + 1j)
    nodes[0] = r
    weights = np.empty(M, dtype=complex)
    weights[0] = 0.5 * math.exp(r * t)
    weights[1:] = np.exp(t * nodes[1:]) * (1.0 + 1j * theta[1:] * (1.0 + cot[1:] ** 2) - 1j * cot[1:])
    terms = weights * np.array([fhat(sk) for sk in nodes], dtype=complex)
    total = (2.0 / (5.0 * t)) * float(np.sum(terms.real))
    peak = (2.0 / (5.0 * t)) * float(np.max(np.abs(terms))) if M else 0.0
    if not math.isfinite(total) or peak > 1e250:
        raise NonConvergence(
            f"Talbot terms grew without bound at t={t!r} (singularity right of the contour?)"
        )
    # the contour sum cannot resolve anything below ~32 ulps of its largest
    # term; such results are numerically zero, not signal
    if abs(total) < 3.2e-15 * peak:
        return 0.0
    return total


def _stehfest_coefficients(N: int) -> np.ndarray:
    half = N // 2
    fac = math.factorial
    V = np.empty(N)
    for k in range(1, N + 1):
        acc = 0.0
        for j in range((k + 1) // 2, min(k, half) + 1):
            acc += (
                j**half * fac(2 * j)
                / (fac(half - j) * fac(j) * fac(j - 1) * fac(k - j) * fac(2 * j - k))
            )
        V[k - 1] = (-1) ** (k + half) * acc
    return V


def _stehfest(fhat: Callable, t: float, N: int) -> float:
    V = _stehfest_coefficients(N)
    ln2 = math.log(2.0)
    vals = np.array([fhat(k * ln2 / t) for k in range(1, N + 1)], dtype=float)
    return float(ln2 / t * np.dot(V, vals))


_EULER_SMOOTHING = 12  # binomial-average order of the accelerated tail
_EULER_DECADES = 23.0  # aliasing control: error ~ exp(-_EULER_DECADES) * |f|


def _euler(fhat: Callable, t: float, N: int) -> float:
    """Bromwich trapezoid with Euler acceleration (Abate-Whitt style).

    Samples only Re(s) = const > 0, inside the genuine convergence
    half-plane, so jump discontinuities in the time function cost accuracy
    near the jump but nothing elsewhere.
    """
    base = _EULER_DECADES / (2.0 * t)
    k = np.arange(N + _EULER_SMOOTHING + 1)
    nodes = base + 1j * math.pi * k / t
    vals = np.array([fhat(complex(sv)) for sv in nodes], dtype=complex)
    terms = np.empty(len(k))
    terms[0] = 0.5 * vals[0].real
    terms[1:] = ((-1.0) ** k[1:]) * vals[1:].real
    partial = np.cumsum(terms)[N:]
    binom = np.array([math.comb(_EULER_SMOOTHING, j) for j in range(_EULER_SMOOTHING + 1)])
    accel = float(np.dot(binom, partial[: _EULER_SMOOTHING + 1])) / 2.0**_EULER_SMOOTHING
    out = math.exp(_EULER_DECADES / 2.0) / t * accel
    if not math.isfinite(out):
        raise NonConvergence(f"Euler inversion sum not finite at t={t!r}")
    return out


def invert_laplace(f, t: float, cfg: InversionConfig = _DEFAULT_CFG) -> float:
    """Numerically invert a Laplace transform at one point ``t > 0``.

    Fixed Talbot (Abate-Valko node placement, default M=32) is the default:
    every transform in this package is meromorphic or entire-composed, for
    which the deformed contour converges geometrically.  Gaver-Stehfest is
    offered for evaluators that only exist on the real axis.
    """
    if t <= 0:
        raise DomainError(f"inversion point must be > 0, got {t!r}")
    fhat = f.evaluator if isinstance(f, LaplaceFn) else f
    abscissa = f.abscissa if isinstance(f, LaplaceFn) else 0.0
    shift = 0.0
    if abscissa > 0.0:
        shift = abscissa + 0.5
        inner = fhat
        fhat = lambda p: inner(p + shift)  # noqa: E731
    if cfg.method == "talbot":
        out = _talbot(fhat, t, cfg.n_terms())
    elif cfg.method == "gaver-stehfest":
        N = cfg.n_terms()
        if N % 2 or not (8 <= N <= 18):
            raise DomainError(f"Stehfest order must be even and within [8, 18], got {N}")
        if N > 16:
            warnings.warn(
                f"Stehfest coefficients at N={N} cancel close to double-precision limits",
                PrecisionLossWarning,
                stacklevel=2,
            )
        out = _stehfest(fhat, t, N)
    elif cfg.method == "euler":
        out = _euler(fhat, t, cfg.n_terms())
    else:
        raise ValueError(f"unknown inversion method {cfg.method!r}")
    return out * math.exp(shift * t) if shift else out


# --- transforms of the propagator ---------------------------------------------


def _hlaplace(params: ModelParams, omega):
    """Jump transform as an analytic continuation (no real-axis domain guard)."""
    law = params.jump_law
    if isinstance(law, ExponentialJumps):
        return law.rate / (law.rate + omega)
    if law.laplace is None:
        raise UnsupportedRegime("custom jump law has no Laplace transform")
    return law.laplace(omega)


def _complex_capable(params: ModelParams) -> bool:
    law = params.jump_law
    return isinstance(law, ExponentialJumps) or law.complex_ok


def _kernel_rate(params: ModelParams, omega):
    """K(omega) = lambda (1 - h~(omega)) + Lambda + Gamma omega."""
    return (
        params.lambda_jump * (1.0 - _hlaplace(params, omega))
        + params.lambda_reset
        + params.gamma_drift * omega
    )


def _expm1_ratio(k, tau):
    """(1 - exp(-k tau)) / k for real or complex k, stable near k = 0."""
    kt = k * tau
    if abs(kt) < 1e-8:
        return tau * (1.0 - kt / 2.0 + kt * kt / 6.0)
    if np.iscomplexobj(kt) or isinstance(kt, complex):
        return (1.0 - np.exp(-kt)) / k
    return -math.expm1(-kt) / k


def propagator_double_laplace(params: ModelParams, omega, s, x0=None, with_resets: bool = True):
    """The (omega, s) double transform of the propagator.

    With resets: ``(Lambda/s + exp(-omega x0)) / (K(omega) + s)``; the
    reset-free variant drops the Lambda pieces and is exactly the
    ``Lambda -> 0`` limit.
    """
    x0 = params.x0 if x0 is None else x0
    h = _hlaplace(params, omega)
    base = params.lambda_jump * (1.0 - h) + params.gamma_drift * omega + s
    if with_resets:
        if s == 0:
            raise PoleEvaluation("the resetting propagator transform has a pole at s = 0")
        den = base + params.lambda_reset
        num = params.lambda_reset / s + np.exp(-omega * x0)
    else:
        den = base
        num = np.exp(-omega * x0)
    if abs(den) < 1e-300:
        raise PoleEvaluation(f"transform pole hit at omega={omega!r}, s={s!r}")
    return num / den


def propagator_omega_time(params: ModelParams, omega, tau: float, x0=None):
    """Position transform of the time-domain propagator (s already inverted).

    ``Lambda (1 - exp(-K tau))/K + exp(-omega x0 - K tau)``; equals
    ``exp(-omega x0)`` at tau = 0 and the stationary transform as tau grows.
    """
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau!r}")
    x0 = params.x0 if x0 is None else x0
    K = _kernel_rate(params, omega)
    return params.lambda_reset * _expm1_ratio(K, tau) + np.exp(-omega * x0 - K * tau)


def stationary_transform(params: ModelParams, omega):
    """Position transform of the stationary density, ``Lambda / K(omega)``."""
    if params.lambda_reset == 0:
        raise NoStationaryLaw("no stationary density without resets")
    return params.lambda_reset / _kernel_rate(params, omega)


def decomposition_check(params: ModelParams, omega, s, x0=None) -> float:
    """Residual of the reset-free decomposition identity.

    ``p^(omega,s;x0) = (Lambda/s) p0^(omega,s+Lambda;0) + p0^(omega,s+Lambda;x0)``
    holds exactly in exact arithmetic, so anything beyond roundoff is a bug.
    """
    x0 = params.x0 if x0 is None else x0
    lhs = propagator_double_laplace(params, omega, s, x0=x0, with_resets=True)
    lam_reset = params.lambda_reset
    p0_at_origin = propagator_double_laplace(params, omega, s + lam_reset, x0=0.0, with_resets=False)
    p0_at_start = propagator_double_laplace(params, omega, s + lam_reset, x0=x0, with_resets=False)
    rhs = (lam_reset / s) * p0_at_origin + p0_at_start
    return abs(lhs - rhs)


# --- survival-probability transform --------------------------------------------


def _alpha_branch(params: ModelParams, s):
    """Midpoint/half-gap parametrization of the exponential-case roots.

    Returns (m, d) with roots m +- d of
    ``Gamma a^2 - (lambda + Lambda + s + Gamma gamma) a + gamma (Lambda + s)``.
    The discriminant is evaluated as ``(lambda+Lambda+s-Gamma gamma)^2 +
    4 lambda Gamma gamma``, which is exact algebraically and never cancels.
    """
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    g = params.jump_law.rate
    m = (lam + big_lam + s + drift * g) / (2.0 * drift)
    disc = (lam + big_lam + s - drift * g) ** 2 + 4.0 * lam * drift * g
    d = np.sqrt(disc + 0j) / (2.0 * drift) if np.iscomplexobj(disc) or isinstance(disc, complex) \
        else math.sqrt(disc) / (2.0 * drift)
    return m, d


def _survival_ratio_exponential(params: ModelParams, s, b: float, x: float):
    """Numerator and denominator of the survival transform, exponential law.

    ``P^ = W(s;b-x) / (1 - Lambda W(s;b))`` written so that the ``s -> 0``
    limit is analytic and, on deep-left Talbot nodes where one root's real
    part turns negative, rescaled by the exactly cancelling exponential so
    every factor decays: the unscaled pieces overflow there even though the
    ratio itself stays moderate.
    """
    g = params.jump_law.rate
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    z = b - x
    if drift > 0.0:
        m, d = _alpha_branch(params, s)
        if abs(d) <= 1e-7 * (abs(m) + 1.0):
            # coalescing roots (complex s near the discriminant's branch points)
            def r_limit(zz):
                hp = (g / m**2) * np.exp(-m * zz) - (1.0 - g / m) * zz * np.exp(-m * zz)
                return hp / drift
            num = 1.0 / (big_lam + s) - r_limit(z)
            den = s / (big_lam + s) + big_lam * r_limit(b)
            return num, den
        delta = 2.0 * drift * d
        a_hi, a_lo = m + d, m - d
        c_hi = (a_hi - g) / a_hi
        c_lo = (g - a_lo) / a_lo
        if np.real(a_lo) >= 0.0:
            num = 1.0 / (big_lam + s) \
                - (c_hi * np.exp(-a_hi * z) + c_lo * np.exp(-a_lo * z)) / delta
            den = s / (big_lam + s) \
                + big_lam * (c_hi * np.exp(-a_hi * b) + c_lo * np.exp(-a_lo * b)) / delta
        else:
            scale = np.exp(a_lo * b)
            num = scale / (big_lam + s) \
                - (c_hi * np.exp(a_lo * b - a_hi * z) + c_lo * np.exp(a_lo * x)) / delta
            den = s * scale / (big_lam + s) \
                + big_lam * (c_hi * np.exp((a_lo - a_hi) * b) + c_lo) / delta
        return num, den
    # driftless: a single decay rate
    alpha = g * (big_lam + s) / (lam + big_lam + s)
    amp = lam / ((big_lam + s) * (lam + big_lam + s))
    if np.real(alpha) >= 0.0:
        num = 1.0 / (big_lam + s) - amp * np.exp(-alpha * z)
        den = s / (big_lam + s) + big_lam * amp * np.exp(-alpha * b)
    else:
        scale = np.exp(alpha * b)
        num = scale / (big_lam + s) - amp * np.exp(alpha * x)
        den = s * scale / (big_lam + s) + big_lam * amp
    return num, den


def _survival_w_numeric(params: ModelParams, s, z: float, cfg: InversionConfig):
    """W(s;z) for custom jump laws, by numerical omega-inversion of the
    closed Laplace-Laplace solution ``1 / (omega (K(omega) + s))``."""
    if z <= 0.0:
        return 0.0
    def what(w):
        return 1.0 / (w * (_kernel_rate(params, w) + s))
    if _complex_capable(params):
        return invert_laplace(LaplaceFn(what, "space_omega"), z, cfg)
    stehfest = InversionConfig("gaver-stehfest", None if cfg.method != "gaver-stehfest" else cfg.terms)
    return invert_laplace(LaplaceFn(what, "space_omega"), z, stehfest)


def survival_hat(params: ModelParams, b: float, x: float, s, cfg: InversionConfig = _DEFAULT_CFG):
    """Time-Laplace transform of the survival probability in [0, b].

    The interior solution is ``(1 + Lambda A(s)) W(s; b-x)`` where ``A(s)``
    is fixed by self-consistency at ``x = 0``, a single linear equation;
    eliminating it gives ``W(s;b-x) / (s/(Lambda+s) + Lambda R(b))`` in a form
    whose ``s -> 0`` limit is analytic, so ``s = 0`` evaluates the mean exit
    time exactly rather than through a small-s probe.
    """
    if b <= 0:
        raise DomainError(f"b must be > 0, got {b!r}")
    if not (0 <= x <= b):
        raise DomainError(f"need 0 <= x <= b, got x={x!r}")
    if x == b:
        return 0.0 if not (np.iscomplexobj(s) or isinstance(s, complex)) else 0.0 + 0.0j

    big_lam = params.lambda_reset
    if isinstance(params.jump_law, ExponentialJumps):
        if params.lambda_jump == 0.0 and params.gamma_drift == 0.0:
            raise UnsupportedRegime("the frozen process never exits [0, b]")
        if big_lam == 0.0 and s == 0:
            # reset-free mean exit time; the generic ratio degenerates here
            lam, drift = params.lambda_jump, params.gamma_drift
            g = params.jump_law.rate
            z = b - x
            if drift == 0.0:
                return (1.0 + g * z) / lam
            edge = lam + drift * g
            return g * z / edge + lam / edge**2 * (-math.expm1(-edge * z / drift))
        num, den = _survival_ratio_exponential(params, s, b, x)
    else:
        num = _survival_w_numeric(params, s, b - x, cfg)
        w_edge = _survival_w_numeric(params, s, b, cfg)
        den = 1.0 - big_lam * w_edge
    if abs(den) < 1e-300:
        raise SelfConsistencySingular(f"self-consistency coefficient vanished at s={s!r}")
    return num / den


def survival_time_domain(params: ModelParams, b: float, x: float, tau: float,
                         cfg: Optional[InversionConfig] = None) -> float:
    """Survival probability in [0, b] at time ``tau``, by numerical inversion.

    The survival curve drops by exp(-(lambda+Lambda) t0) at the drift-hit
    time ``t0 = (b-x)/drift`` (paths with no event at all exit exactly
    there), and no fixed-contour scheme can invert through that jump.  The
    step is therefore removed on the transform side, the continuous
    remainder inverted with the Euler scheme, and the step restored.
    Accuracy degrades only within ~t0/1000 of the kink itself.
    """
    if tau <= 0:
        raise DomainError(f"tau must be > 0, got {tau!r}")
    if x == b:
        return 0.0
    drift, rate = params.gamma_drift, params.total_rate
    inv_cfg = cfg or InversionConfig("euler")
    if drift > 0.0:
        t_hit = (b - x) / drift
        atom = math.exp(-rate * t_hit)

        def smooth(s):
            return survival_hat(params, b, x, s) + atom * np.exp(-s * t_hit) / s

        out = invert_laplace(LaplaceFn(smooth, "time_s"), tau, inv_cfg)
        if tau >= t_hit:
            out -= atom
    else:
        out = invert_laplace(
            LaplaceFn(lambda s: survival_hat(params, b, x, s), "time_s"), tau, inv_cfg
        )
    return min(1.0, max(0.0, out))


# --- numerical inversion of the propagator -------------------------------------


def propagator_numeric(params: ModelParams, x: float, tau: float, x0=None,
                       cfg: InversionConfig = _DEFAULT_CFG) -> float:
    """Continuous part of the propagator density at ``x``, any jump law.

    The two atoms (drift front, and the origin pile-up when the drift
    vanishes) are removed from the position transform analytically before
    inversion: transforms of point masses carry ``exp(-omega c)`` factors
    that numerical inversion turns into Gibbs artifacts.  Pieces shifted by
    such factors are inverted at the shifted argument instead, which keeps
    the Talbot integrand bounded on the contour.
    """
    if tau <= 0:
        raise DomainError(f"tau must be > 0, got {tau!r}")
    if x <= 0:
        raise DomainError(f"the numeric route evaluates interior points x > 0, got {x!r}")
    x0 = params.x0 if x0 is None else x0
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    rate = lam + big_lam
    front = x0 + drift * tau

    total = 0.0

    # post-reset piece: Lambda (1 - e^{-K tau})/K, minus the origin atom when
    # the drift is zero (the transform tends to that constant as omega grows)
    if big_lam > 0.0:
        if drift == 0.0:
            origin_atom = big_lam * _expm1_ratio(rate, tau)

            def reset_piece(w):
                K = _kernel_rate(params, w)
                return big_lam * _expm1_ratio(K, tau) - origin_atom

            total += invert_laplace(LaplaceFn(reset_piece, "space_omega"), x, cfg)
        else:
            total += invert_laplace(LaplaceFn(lambda w: stationary_transform(params, w),
                                              "space_omega"), x, cfg)
            v = x - drift * tau
            if v > 0.0:
                decay = math.exp(-big_lam * tau)

                def ramp_correction(w):
                    h = _hlaplace(params, w)
                    return -big_lam * decay * np.exp(-lam * tau * (1.0 - h)) \
                        / _kernel_rate(params, w)

                total += invert_laplace(LaplaceFn(ramp_correction, "space_omega"), v, cfg)

    # reset-free piece beyond the front: e^{-omega front}(e^{lam tau h~} - 1) e^{-rate tau}
    v = x - front
    if v > 0.0 and lam > 0.0:
        decay = math.exp(-rate * tau)

        def jump_piece(w):
            arg = lam * tau * _hlaplace(params, w)
            if abs(arg) < 1e-4:
                em1 = arg * (1.0 + arg * (0.5 + arg * (1.0 / 6.0 + arg / 24.0)))
            elif np.iscomplexobj(arg) or isinstance(arg, complex):
                em1 = np.exp(arg) - 1.0
            else:
                em1 = math.expm1(arg)
            return decay * em1

        total += invert_laplace(LaplaceFn(jump_piece, "space_omega"), v, cfg)
    elif v == 0.0 and lam > 0.0:
        # right limit at the front; needs the density's value at 0+
        law = params.jump_law
        h0 = law.rate if isinstance(law, ExponentialJumps) else law.pdf(0.0)
        total += lam * tau * h0 * math.exp(-rate * tau)
    return total


def propagator_x_laplace(params: ModelParams, x: float, s, x0=None):
    """Continuous part of the fixed-position time transform, driftless
    exponential case: the two non-atomic terms of the closed form

    ``(Lambda/s) A(s) e^{-(Lambda+s) gamma x/(lambda+Lambda+s)}
      + A(s) e^{-(Lambda+s) gamma (x-x0)/(lambda+Lambda+s)} theta(x-x0)``

    with ``A(s) = gamma lambda/(lambda+Lambda+s)^2``.  Complex-capable, so it
    feeds straight into Talbot inversion for golden-value roundtrips.
    """
    if params.gamma_drift != 0.0 or not isinstance(params.jump_law, ExponentialJumps):
        raise UnsupportedRegime("closed fixed-x transform exists only for the driftless exponential case")
    x0 = params.x0 if x0 is None else x0
    lam, big_lam = params.lambda_jump, params.lambda_reset
    g = params.jump_law.rate
    denom = lam + big_lam + s
    amp = g * lam / denom**2
    ratio = (big_lam + s) / denom
    out = (big_lam / s) * amp * np.exp(-ratio * g * x)
    if x >= x0:
        out = out + amp * np.exp(-ratio * g * (x - x0))
    return out
