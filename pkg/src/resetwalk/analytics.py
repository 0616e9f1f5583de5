"""Closed-form results: power-law exponents, stationary laws, the driftless
exponential-jump propagator with its atoms, stationary moments, and the mean
exit time family with all four parameter limits.

Everything here is an exact formula (plus controlled quadrature for the one
time integral the closed propagator carries).  Regimes the formulas do not
cover are refused, never approximated: the finite-time drifted propagator,
for instance, lives in :func:`resetwalk.transform.propagator_numeric`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from numba import njit
from scipy.integrate import quad

from .errors import (
    DomainError,
    DriftRequired,
    ExponentialLawRequired,
    NoStationaryLaw,
    UnsupportedRegime,
)
from .model import ExponentialJumps, ModelParams, jump_moment
from .transform import InversionConfig, LaplaceFn, _i1_scaled, invert_laplace, stationary_transform

QUAD_ABS_TOL = 1e-12  # the time integral in the closed propagator


# --- exponents -----------------------------------------------------------------


@dataclass(frozen=True)
class TailExponents:
    """Power-law exponents of the stationary observable distribution.

    ``alpha_plus``/``alpha_minus`` are the two decay exponents of the drifted
    exponential-jump law (None when the drift vanishes or the law is not
    exponential); ``alpha_nodrift`` is the single driftless exponent;
    ``beta_asymptotic`` the generic small-reset-rate exponent; ``y_critical``
    the crossover between the two drifted regimes; ``discriminant`` the
    square-root discriminant of the defining quadratic.
    """

    alpha_plus: Optional[float]
    alpha_minus: Optional[float]
    alpha_nodrift: Optional[float]
    beta_asymptotic: Optional[float]
    y_critical: Optional[float]
    discriminant: Optional[float]


def alpha_roots(params: ModelParams, s: float = 0.0) -> Tuple[float, float]:
    """Real roots of  drift*a^2 - (lambda+Lambda+s+drift*gamma)*a + gamma*(Lambda+s).

    The large root comes from the stable branch of the quadratic formula, the
    small one from Vieta's product, so neither cancels; the discriminant is
    rearranged as ``(lambda+Lambda+s-drift*gamma)^2 + 4 lambda drift gamma``,
    which is exactly equal and manifestly nonnegative.
    """
    if not isinstance(params.jump_law, ExponentialJumps):
        raise ExponentialLawRequired("the exponent quadratic is specific to exponential jumps")
    if params.gamma_drift <= 0:
        raise DriftRequired("the two-exponent family needs strictly positive drift")
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    g = params.jump_law.rate
    big = lam + big_lam + s + drift * g
    disc = (lam + big_lam + s - drift * g) ** 2 + 4.0 * lam * drift * g
    a_plus = (big + math.sqrt(disc)) / (2.0 * drift)
    a_minus = g * (big_lam + s) / (drift * a_plus)
    return a_plus, a_minus


def tail_exponents(params: ModelParams) -> TailExponents:
    """All tail exponents derivable from the parameters; fields that need a
    missing ingredient (drift, exponential law, finite jump mean) are None."""
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    is_exp = isinstance(params.jump_law, ExponentialJumps)

    alpha_nodrift = None
    if is_exp and (lam + big_lam) > 0:
        alpha_nodrift = params.jump_law.rate * big_lam / (lam + big_lam)

    beta = None
    try:
        mu1 = jump_moment(params.jump_law, 1)
        if lam * mu1 + drift > 0:
            beta = big_lam / (lam * mu1 + drift)
    except Exception:
        pass

    alpha_plus = alpha_minus = y_critical = discriminant = None
    if is_exp and drift > 0:
        g = params.jump_law.rate
        alpha_plus, alpha_minus = alpha_roots(params)
        discriminant = drift * (alpha_plus - alpha_minus)
        if lam > 0:
            # alpha+ > gamma > alpha- holds exactly when jumps are active
            y_critical = ((alpha_plus - g) / (g - alpha_minus)) ** (1.0 / (alpha_plus - alpha_minus))
    return TailExponents(alpha_plus, alpha_minus, alpha_nodrift, beta, y_critical, discriminant)


# --- mixed densities -------------------------------------------------------------


@dataclass(frozen=True)
class MixedDensity:
    """A distribution made of discrete atoms plus a continuous density.

    ``atoms`` is a list of (location, mass); ``density`` evaluates the
    continuous part and accepts scalars or arrays; ``support`` bounds it.
    ``quad_points`` lists interior kinks worth passing to a quadrature.
    """

    atoms: Tuple[Tuple[float, float], ...]
    density: Callable
    support: Tuple[float, float]
    domain: str = "X"
    quad_points: Tuple[float, ...] = ()

    def atom_mass(self) -> float:
        return float(sum(m for _, m in self.atoms))

    def continuous_mass(self, upper: Optional[float] = None, epsabs: float = 1e-10) -> float:
        lo, hi = self.support
        if upper is not None:
            hi = min(hi, upper)
        if not math.isfinite(hi):
            raise ValueError("pass `upper` to integrate a density with unbounded support")
        pts = [p for p in self.quad_points if lo < p < hi]
        total = 0.0
        edges = [lo] + sorted(pts) + [hi]
        for a, b in zip(edges[:-1], edges[1:]):
            total += quad(lambda u: float(self.density(u)), a, b, epsabs=epsabs, limit=400)[0]
        return total

    def total_mass(self, upper: Optional[float] = None, epsabs: float = 1e-10) -> float:
        return self.atom_mass() + self.continuous_mass(upper=upper, epsabs=epsabs)


def _as_observable(xd: MixedDensity, params: ModelParams) -> MixedDensity:
    """Map a distribution of X to the observable y = y0 exp(sign x)."""
    sign, y0 = params.observable_sign, params.y0
    atoms = tuple((y0 * math.exp(sign * loc), mass) for loc, mass in xd.atoms)
    fx = xd.density

    def fy(y):
        y_arr = np.asarray(y, dtype=float)
        x = sign * np.log(y_arr / y0)
        return fx(x) / y_arr

    lo, hi = xd.support
    if sign > 0:
        support = (y0 * math.exp(lo), y0 * math.exp(hi) if math.isfinite(hi) else math.inf)
    else:
        support = (0.0 if not math.isfinite(hi) else y0 * math.exp(-hi), y0 * math.exp(-lo))
    pts = tuple(y0 * math.exp(sign * p) for p in xd.quad_points)
    return MixedDensity(atoms=atoms, density=fy, support=support, domain="Y", quad_points=pts)


# --- stationary laws --------------------------------------------------------------


def stationary_density(params: ModelParams, domain: str = "X",
                       cfg: InversionConfig = InversionConfig()) -> MixedDensity:
    """The long-time density, which exists exactly when resets are active.

    Exponential jumps give closed forms: driftless, an origin atom of weight
    Lambda/(lambda+Lambda) plus a pure exponential profile; with drift, a pure
    two-exponential mixture whose observable version is the two-exponent
    power law on y >= y0.  Other jump laws go through numerical inversion of
    the stationary transform.
    """
    if domain not in ("X", "Y"):
        raise ValueError(f"domain must be 'X' or 'Y', got {domain!r}")
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    if big_lam == 0:
        raise NoStationaryLaw("the density drifts away without resets; set lambda_reset > 0")

    if isinstance(params.jump_law, ExponentialJumps):
        g = params.jump_law.rate
        if drift == 0.0:
            weight = big_lam / (lam + big_lam)
            decay = big_lam * g / (lam + big_lam)
            amp = weight * g * lam / (lam + big_lam)

            def fx(x):
                x_arr = np.asarray(x, dtype=float)
                return np.where(x_arr >= 0, amp * np.exp(-decay * x_arr), 0.0)

            xd = MixedDensity(atoms=((0.0, weight),), density=fx, support=(0.0, math.inf))
        else:
            a_plus, a_minus = alpha_roots(params)
            gap = a_plus - a_minus
            if gap <= 1e-8 * (1.0 + a_plus):
                # confluent case (only reachable jump-free, Lambda == drift*gamma)
                m = 0.5 * (a_plus + a_minus)
                scale = big_lam / drift

                def fx(x):
                    x_arr = np.asarray(x, dtype=float)
                    return np.where(
                        x_arr >= 0, scale * np.exp(-m * x_arr) * (1.0 - (m - g) * x_arr), 0.0
                    )
            else:
                c_plus = big_lam * (a_plus - g) / (drift * gap)
                c_minus = big_lam * (g - a_minus) / (drift * gap)

                def fx(x):
                    x_arr = np.asarray(x, dtype=float)
                    return np.where(
                        x_arr >= 0,
                        c_plus * np.exp(-a_plus * x_arr) + c_minus * np.exp(-a_minus * x_arr),
                        0.0,
                    )

            xd = MixedDensity(atoms=(), density=fx, support=(0.0, math.inf))
    else:
        # numerical route: invert Lambda/K(omega), atom split off when driftless
        atom = ()
        if drift == 0.0:
            weight = big_lam / (lam + big_lam)
            atom = ((0.0, weight),)

            def fhat(w):
                return stationary_transform(params, w) - weight
        else:
            def fhat(w):
                return stationary_transform(params, w)

        lap = LaplaceFn(fhat, "space_omega")

        def fx(x):
            def one(v):
                return invert_laplace(lap, v, cfg) if v > 0 else 0.0
            if np.ndim(x) == 0:
                return one(float(x))
            arr = np.asarray(x, dtype=float)
            return np.array([one(v) for v in arr.ravel()]).reshape(arr.shape)

        xd = MixedDensity(atoms=atom, density=fx, support=(0.0, math.inf))

    return xd if domain == "X" else _as_observable(xd, params)


def stationary_moments(params: ModelParams, n: int) -> float:
    """First or second moment of the stationary walk position."""
    if params.lambda_reset == 0:
        raise NoStationaryLaw("no stationary moments without resets")
    if n not in (1, 2):
        raise ValueError("only n=1 and n=2 are available in closed form")
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    mu1 = jump_moment(params.jump_law, 1) if lam > 0 else 0.0
    mean = (drift + lam * mu1) / big_lam
    if n == 1:
        return mean
    mu2 = jump_moment(params.jump_law, 2) if lam > 0 else 0.0
    return lam * mu2 / big_lam + 2.0 * mean * mean


# --- the driftless exponential-jump propagator -----------------------------------


@njit(cache=True)
def _front_density(v, t, lam, g, rate):
    """exp(-rate t) * exp(-g v) sqrt(g lam t / v) I1(2 sqrt(lam t g v)).

    This is the reset-free density of the compound jump process, damped by
    the no-event factor.  The Bessel growth exp(z) is folded into one
    exponent 2 sqrt(lam t g v) - g v - rate t <= 0, so nothing overflows.
    """
    if t <= 0.0 or v < 0.0 or lam <= 0.0:
        return 0.0
    if v == 0.0:
        return g * lam * t * math.exp(-rate * t)
    z = 2.0 * math.sqrt(lam * t * g * v)
    return math.sqrt(g * lam * t / v) * _i1_scaled(z) * math.exp(z - g * v - rate * t)


def reset_free_density(params: ModelParams, v: float, t: float) -> float:
    """Continuous density of the no-reset compound process after time ``t``,
    damped by exp(-(lambda+Lambda) t); the building block of the closed
    propagator (driftless exponential jumps)."""
    _require_driftless_exponential(params)
    return _front_density(v, t, params.lambda_jump, params.jump_law.rate, params.total_rate)


def _require_driftless_exponential(params: ModelParams) -> None:
    if params.gamma_drift != 0.0:
        raise UnsupportedRegime(
            "no closed finite-time propagator with drift: use transform.propagator_numeric"
        )
    if not isinstance(params.jump_law, ExponentialJumps):
        raise UnsupportedRegime(
            "no closed finite-time propagator for this jump law: use transform.propagator_numeric"
        )


def atom_masses(params: ModelParams, tau: float, x0=None) -> list:
    """Point masses of the propagator at time ``tau``.

    The drift front ``x0 + drift*tau`` always carries the no-event mass
    exp(-(lambda+Lambda) tau); without drift the origin additionally collects
    every path whose last event was a reset.  Coinciding locations merge.
    """
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau!r}")
    x0 = params.x0 if x0 is None else x0
    rate = params.total_rate
    front_loc = x0 + params.gamma_drift * tau
    front_mass = math.exp(-rate * tau)
    atoms = {front_loc: front_mass}
    if params.gamma_drift == 0.0 and params.lambda_reset > 0.0 and rate > 0.0:
        origin_mass = params.lambda_reset / rate * (-math.expm1(-rate * tau))
        atoms[0.0] = atoms.get(0.0, 0.0) + origin_mass
    return [(loc, mass) for loc, mass in sorted(atoms.items()) if mass > 0.0]


def propagator_time_integral(params: ModelParams, x: float, tau: float) -> float:
    """The post-reset term of the closed propagator: Lambda times the time
    integral of the reset-free density, by adaptive Gauss-Kronrod."""
    _require_driftless_exponential(params)
    lam, g, rate = params.lambda_jump, params.jump_law.rate, params.total_rate
    if params.lambda_reset == 0.0 or lam == 0.0:
        return 0.0
    val, _ = quad(
        lambda t: _front_density(x, t, lam, g, rate), 0.0, tau,
        epsabs=QUAD_ABS_TOL, epsrel=1e-11, limit=200,
    )
    return params.lambda_reset * val


def propagator_closed_form(params: ModelParams, tau: float, x0=None) -> MixedDensity:
    """The full driftless exponential-jump propagator at time ``tau``.

    Atoms at the origin and at ``x0``, plus a continuous part made of the
    post-reset time integral and the reset-free Bessel term beyond ``x0``.
    """
    _require_driftless_exponential(params)
    if tau <= 0:
        raise DomainError(f"tau must be > 0, got {tau!r}")
    x0 = params.x0 if x0 is None else x0
    lam, g, rate = params.lambda_jump, params.jump_law.rate, params.total_rate

    def density(x):
        def one(v):
            if v < 0:
                return 0.0
            out = propagator_time_integral(params, v, tau)
            if v >= x0 and lam > 0.0:
                out += _front_density(v - x0, tau, lam, g, rate)
            return out
        if np.ndim(x) == 0:
            return one(float(x))
        arr = np.asarray(x, dtype=float)
        return np.array([one(v) for v in arr.ravel()]).reshape(arr.shape)

    return MixedDensity(
        atoms=tuple(atom_masses(params, tau, x0)),
        density=density,
        support=(0.0, math.inf),
        quad_points=(x0,) if x0 > 0 else (),
    )


def propagator_mass_upper(params: ModelParams, tau: float, x0: float) -> float:
    """An integration limit past which the continuous propagator mass is
    below 1e-9: the jump sum reaches lambda*tau/gamma on average with spread
    sqrt(2 lambda tau)/gamma, plus a flat safety tail."""
    g = params.jump_law.rate
    lt = params.lambda_jump * tau
    return x0 + (lt + 12.0 * math.sqrt(2.0 * lt) + 50.0) / g


# --- mean exit times ---------------------------------------------------------------


def mean_exit_time(params: ModelParams, b: float, x: float) -> float:
    """Expected first time the walk leaves [0, b] starting from ``x``.

    Drifted exponential-jump closed form; the reset-free case is delegated to
    its own limit formula.  Both exit-rate exponentials in the denominator
    enter with positive coefficients (the reset rate over drift is bracketed
    by the two roots), so the expression never cancels.
    """
    if not isinstance(params.jump_law, ExponentialJumps):
        raise ExponentialLawRequired("mean exit time is closed-form only for exponential jumps")
    if b <= 0:
        raise DomainError(f"b must be > 0, got {b!r}")
    if not (0 <= x <= b):
        raise DomainError(f"need 0 <= x <= b, got x={x!r}")
    if params.gamma_drift <= 0:
        raise UnsupportedRegime("driftless exit times live in met_limit(..., 'no_drift')")
    if params.lambda_reset == 0.0:
        return met_limit(params, b, x, "no_reset")
    if x == b:
        return 0.0
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    if lam == 0.0:
        # pure drift-and-reset: exit only by drifting the whole way
        r = big_lam / drift
        return (math.exp(r * b) - math.exp(r * x)) / big_lam
    g = params.jump_law.rate
    a_plus, a_minus = alpha_roots(params)
    c_plus = (a_plus - g) / a_plus
    c_minus = (g - a_minus) / a_minus
    num = c_plus * (-math.expm1(-a_plus * (b - x))) + c_minus * (-math.expm1(-a_minus * (b - x)))
    den = big_lam * (c_plus * math.exp(-a_plus * b) + c_minus * math.exp(-a_minus * b))
    return num / den


MET_LIMITS = ("no_reset", "infinite_reset", "no_drift", "infinite_drift")


def met_limit(params: ModelParams, b: float, x: float, kind: str) -> float:
    """The four parameter limits of the mean exit time.

    no_reset: the reset-free drift-jump walk.  infinite_reset: the walk is
    pinned at the origin and only a single jump past ``b`` exits, giving
    exp(gamma b)/lambda independent of ``x`` and the drift.  no_drift: the
    driftless walk (exact there, not only a limit).  infinite_drift: zero.
    """
    if kind not in MET_LIMITS:
        raise ValueError(f"kind must be one of {MET_LIMITS}, got {kind!r}")
    if not isinstance(params.jump_law, ExponentialJumps):
        raise ExponentialLawRequired("exit-time limits are closed-form only for exponential jumps")
    if b <= 0:
        raise DomainError(f"b must be > 0, got {b!r}")
    if not (0 <= x <= b):
        raise DomainError(f"need 0 <= x <= b, got x={x!r}")
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    g = params.jump_law.rate

    if kind == "infinite_drift":
        return 0.0
    if kind == "infinite_reset":
        if lam <= 0:
            raise UnsupportedRegime("with constant resets and no jumps the walk never exits")
        return math.exp(g * b) / lam
    if kind == "no_reset":
        if drift <= 0 and lam <= 0:
            raise UnsupportedRegime("a motionless walk never exits")
        if drift <= 0:
            raise UnsupportedRegime("the reset-free limit formula needs drift; "
                                    "use met_limit(..., 'no_drift') with resets instead")
        edge = lam + drift * g
        z = b - x
        return g * z / edge + lam / edge**2 * (-math.expm1(-edge * z / drift))
    # no_drift
    if lam <= 0 or big_lam <= 0:
        raise UnsupportedRegime("the driftless exit needs both jumps and resets")
    a = big_lam * g / (lam + big_lam)
    return math.exp(a * b) * (1.0 / lam + (-math.expm1(-a * (b - x))) / big_lam)


# --- integral-equation residuals ----------------------------------------------------


def met_equation_residual(params: ModelParams, b: float, x: float) -> float:
    """Substitute the closed mean exit time back into its defining renewal
    integral equation and return the absolute residual (double quadrature)."""
    if params.gamma_drift <= 0:
        raise UnsupportedRegime("the integral equation is written for positive drift")
    lam, big_lam, drift = params.lambda_jump, params.lambda_reset, params.gamma_drift
    g = params.jump_law.rate
    rate = lam + big_lam
    t_here = mean_exit_time(params, b, x)
    t_zero = mean_exit_time(params, b, 0.0)
    z_max = b - x
    first = (1.0 + big_lam * t_zero) / rate * (-math.expm1(-rate * z_max / drift))

    def inner(z):
        val, _ = quad(
            lambda u: g * math.exp(-g * u) * mean_exit_time(params, b, b - z + u),
            0.0, z, epsabs=1e-12, limit=100,
        )
        return val

    second, _ = quad(
        lambda z: math.exp(-rate * (z_max - z) / drift) * inner(z),
        0.0, z_max, epsabs=1e-10, limit=200,
    )
    return abs(t_here - (first + lam / drift * second))


def renewal_residual(params: ModelParams, x: float, tau: float, x0=None) -> float:
    """Substitute the closed driftless propagator into its renewal equation.

    Compared on the continuous part at a point ``x`` away from both atoms;
    the delta terms are transcribed analytically (they integrate against the
    exponential kernels in closed form), everything else is quadrature.
    """
    _require_driftless_exponential(params)
    x0 = params.x0 if x0 is None else x0
    if x <= 0 or x == x0:
        raise DomainError("evaluate the residual away from the atoms at 0 and x0")
    lam, big_lam = params.lambda_jump, params.lambda_reset
    g = params.jump_law.rate
    rate = lam + big_lam

    def cont(v, sigma, start):
        if v < 0 or sigma <= 0:
            return 0.0
        out = propagator_time_integral(params, v, sigma)
        if v >= start:
            out += _front_density(v - start, sigma, lam, g, rate)
        return out

    lhs = cont(x, tau, x0)

    # reset branch: the walk restarts from the origin
    reset_term, _ = quad(
        lambda tp: big_lam * math.exp(-rate * tp) * cont(x, tau - tp, 0.0),
        0.0, tau, epsabs=1e-10, limit=200,
    )

    # jump branch, front-atom image: the first jump lands exactly at x
    atom_term = 0.0
    if x > x0:
        atom_term = g * math.exp(-g * (x - x0)) * lam * tau * math.exp(-rate * tau)

    # jump branch, post-reset pile (independent of the landing point)
    pile_term, _ = quad(
        lambda tpp: lam * math.exp(-rate * tpp) * propagator_time_integral(params, x, tau - tpp),
        0.0, tau, epsabs=1e-10, limit=200,
    )

    # jump branch, reset-free part: first jump to x0+u, then the Bessel term
    v_max = x - x0
    jump_term = 0.0
    if v_max > 0:
        def outer(u):
            val, _ = quad(
                lambda tpp: lam * math.exp(-rate * tpp)
                * _front_density(x - x0 - u, tau - tpp, lam, g, rate),
                0.0, tau, epsabs=1e-11, limit=100,
            )
            return g * math.exp(-g * u) * val

        jump_term, _ = quad(outer, 0.0, v_max, epsabs=1e-10, limit=200)

    return abs(lhs - (reset_term + atom_term + pile_term + jump_term))
