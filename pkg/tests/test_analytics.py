import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from resetwalk.analytics import (
    alpha_roots,
    atom_masses,
    mean_exit_time,
    met_equation_residual,
    met_limit,
    propagator_closed_form,
    propagator_mass_upper,
    renewal_residual,
    stationary_density,
    stationary_moments,
    tail_exponents,
)
from resetwalk.errors import (
    DomainError,
    DriftRequired,
    ExponentialLawRequired,
    NoStationaryLaw,
    UnsupportedRegime,
)
from resetwalk.model import CustomJumps, ModelParams, exponential_params, validate

rates = st.floats(min_value=0.02, max_value=20.0, allow_nan=False)


# --- exponents ---------------------------------------------------------------------


def test_benchmark_exponents(fig2_params):
    e = tail_exponents(fig2_params)
    assert e.alpha_plus == pytest.approx(2.0, abs=1e-12)
    assert e.alpha_minus == pytest.approx(0.5, abs=1e-12)


def test_exponents_symmetric_case():
    p = exponential_params(1.0, 1.0, 1.0, 1.0)
    e = tail_exponents(p)
    assert e.alpha_plus == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-14)
    assert e.alpha_minus == pytest.approx((3 - math.sqrt(5)) / 2, rel=1e-14)
    assert e.alpha_plus * e.alpha_minus == pytest.approx(1.0, rel=1e-12)  # product = gL/G


def test_driftless_exponent():
    p = exponential_params(0.0, 1.0, 2.0, 1.0)
    e = tail_exponents(p)
    assert e.alpha_nodrift == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert e.alpha_plus is None and e.y_critical is None


def test_y_critical_follows_the_formula(fig2_params):
    # the closed expression evaluates to 2^(2/3) at the benchmark parameters
    e = tail_exponents(fig2_params)
    assert e.y_critical == pytest.approx(2.0 ** (2.0 / 3.0), rel=1e-12)


def test_generic_beta_exponent(fig2_params):
    e = tail_exponents(fig2_params)
    assert e.beta_asymptotic == pytest.approx(2.0 / (1.0 * 1.0 + 2.0), rel=1e-14)


def test_alpha_roots_guards():
    with pytest.raises(DriftRequired):
        alpha_roots(exponential_params(0.0, 1.0, 1.0, 1.0))
    law = CustomJumps(pdf=lambda u: math.exp(-u), laplace=lambda w: 1 / (1 + w), mean=1.0)
    with pytest.raises(ExponentialLawRequired):
        alpha_roots(validate(ModelParams(1.0, 1.0, 1.0, law)))


@given(lam=rates, big_lam=rates, drift=rates, g=rates)
@settings(max_examples=300, deadline=None)
def test_exponent_sandwich_and_vieta(lam, big_lam, drift, g):
    p = exponential_params(drift, lam, big_lam, g)
    ap, am = alpha_roots(p)
    assert ap > g > am > 0
    assert ap > big_lam / drift > am
    assert ap * am * drift == pytest.approx(g * big_lam, rel=1e-10)
    assert (ap + am) * drift == pytest.approx(lam + big_lam + drift * g, rel=1e-10)


# --- stationary laws ------------------------------------------------------------------


def test_stationary_driftless_x(driftless_params):
    d = stationary_density(driftless_params, "X")
    assert d.atoms == ((0.0, 0.5),)
    assert d.density(0.0) == pytest.approx(0.25)
    xs = np.linspace(0, 5, 7)
    assert d.density(xs) == pytest.approx(0.25 * np.exp(-0.5 * xs))
    assert d.total_mass(upper=250.0) == pytest.approx(1.0, abs=1e-9)


def test_stationary_driftless_y(driftless_params):
    d = stationary_density(driftless_params, "Y")
    (loc, mass), = d.atoms
    assert (loc, mass) == (1.0, 0.5)
    # p_Y(y) = (g lam L / (lam+L)^2) y^(-1-alpha), alpha = 1/2
    ys = np.array([1.5, 4.0, 30.0])
    assert d.density(ys) == pytest.approx(0.25 * ys ** (-1.5), rel=1e-12)


def test_stationary_two_exponent_law(fig2_params):
    d = stationary_density(fig2_params, "Y")
    assert d.atoms == ()
    ys = np.geomspace(1.0, 1e4, 41)
    want = (2.0 / 3.0) * (ys ** -3.0 + 0.5 * ys ** -1.5)
    assert d.density(ys) == pytest.approx(want, rel=1e-12)
    mass = quad(lambda y: float(d.density(y)), 1.0, np.inf, limit=500)[0]
    assert mass == pytest.approx(1.0, abs=1e-9)


def test_stationary_two_exponent_law_x_domain(fig2_params):
    d = stationary_density(fig2_params, "X")
    mass = quad(lambda x: float(d.density(x)), 0, 200.0, limit=500)[0]
    assert mass == pytest.approx(1.0, abs=1e-10)
    # consistency with the observable version under y = e^x
    x = 1.7
    dy = stationary_density(fig2_params, "Y")
    assert d.density(x) == pytest.approx(float(dy.density(math.exp(x))) * math.exp(x), rel=1e-12)


def test_stationary_atom_dominates_at_large_reset_rate():
    p = exponential_params(0.0, 1.0, 1e4, 1.0)
    d = stationary_density(p, "X")
    assert d.atoms[0][1] == pytest.approx(1.0, abs=1e-3)


def test_stationary_requires_resets():
    with pytest.raises(NoStationaryLaw):
        stationary_density(exponential_params(1.0, 1.0, 0.0, 1.0), "X")
    with pytest.raises(NoStationaryLaw):
        stationary_moments(exponential_params(1.0, 1.0, 0.0, 1.0), 1)


def test_stationary_custom_law_numeric_route(driftless_params):
    # exponential law dressed as a custom one: numeric inversion vs closed form
    law = CustomJumps(
        pdf=lambda u: math.exp(-u),
        laplace=lambda w: 1.0 / (1.0 + w),
        mean=1.0,
        second_moment=2.0,
        complex_ok=True,
    )
    p = validate(ModelParams(0.0, 1.0, 1.0, law))
    d_num = stationary_density(p, "X")
    d_ref = stationary_density(driftless_params, "X")
    assert d_num.atoms == d_ref.atoms
    for x in (0.4, 1.0, 3.0):
        assert float(d_num.density(x)) == pytest.approx(float(d_ref.density(x)), rel=1e-8)


def test_stationary_drifted_custom_law_numeric_route(fig2_params):
    law = CustomJumps(
        pdf=lambda u: math.exp(-u),
        laplace=lambda w: 1.0 / (1.0 + w),
        mean=1.0,
        second_moment=2.0,
        complex_ok=True,
    )
    p = validate(ModelParams(2.0, 1.0, 2.0, law))
    d_num = stationary_density(p, "X")
    d_ref = stationary_density(fig2_params, "X")
    for x in (0.2, 1.0, 2.5):
        assert float(d_num.density(x)) == pytest.approx(float(d_ref.density(x)), rel=1e-8)


def test_stationary_moments_closed_forms(driftless_params):
    assert stationary_moments(driftless_params, 1) == pytest.approx(1.0)
    assert stationary_moments(driftless_params, 2) == pytest.approx(4.0)
    p = exponential_params(1.0, 0.0, 2.0, 1.0)
    assert stationary_moments(p, 1) == pytest.approx(0.5)


def test_stationary_moments_match_density_integral(driftless_params):
    d = stationary_density(driftless_params, "X")
    m1 = quad(lambda x: x * float(d.density(x)), 0, 300.0, limit=500)[0]
    assert stationary_moments(driftless_params, 1) == pytest.approx(m1, abs=1e-9)
    m2 = quad(lambda x: x * x * float(d.density(x)), 0, 400.0, limit=500)[0]
    assert stationary_moments(driftless_params, 2) == pytest.approx(m2, abs=1e-8)


@given(lam=rates, big_lam=rates, drift=rates, g=rates)
@settings(max_examples=100, deadline=None)
def test_stationary_variance_positive(lam, big_lam, drift, g):
    p = exponential_params(drift, lam, big_lam, g)
    var = stationary_moments(p, 2) - stationary_moments(p, 1) ** 2
    assert var >= 0.0


# --- propagator --------------------------------------------------------------------


def test_atom_masses_cases():
    p = exponential_params(0.0, 1.0, 1.0, 1.0, x0=2.0)
    assert atom_masses(p, 0.0) == [(2.0, 1.0)]  # no time to move
    atoms = dict(atom_masses(p, 1.0))
    assert atoms[2.0] == pytest.approx(math.exp(-2.0))
    assert atoms[0.0] == pytest.approx(0.5 * (1 - math.exp(-2.0)))
    # merged when the walk starts at the origin without drift
    p0 = exponential_params(0.0, 1.0, 1.0, 1.0, x0=0.0)
    (loc, mass), = atom_masses(p0, 1.0)
    assert loc == 0.0 and mass == pytest.approx(0.5 * (1 + math.exp(-2.0)))
    # long-time driftless origin mass approaches the reset share
    assert dict(atom_masses(p, 40.0))[0.0] == pytest.approx(0.5, abs=1e-12)


def test_atom_masses_with_drift():
    p = exponential_params(2.0, 1.0, 1.0, 1.0, x0=0.5)
    assert atom_masses(p, 1.5) == [(3.5, pytest.approx(math.exp(-3.0)))]


def test_propagator_normalization_grid():
    # a denser version runs in the acceptance suite; spot-check here
    for (lam, big_lam, g, tau, x0) in [
        (0.5, 2.0, 1.0, 1.0, 0.0),
        (2.0, 0.5, 0.5, 10.0, 1.0),
        (1.0, 1.0, 2.0, 0.1, 1.0),
    ]:
        p = exponential_params(0.0, lam, big_lam, g, x0=x0)
        d = propagator_closed_form(p, tau)
        upper = propagator_mass_upper(p, tau, x0)
        assert d.total_mass(upper=upper) == pytest.approx(1.0, abs=1e-8)


def test_propagator_long_time_reaches_stationary(driftless_params):
    d_tau = propagator_closed_form(driftless_params, 60.0, x0=2.0)
    d_inf = stationary_density(driftless_params, "X")
    for x in (0.3, 1.0, 2.5, 5.0):
        assert float(d_tau.density(x)) == pytest.approx(float(d_inf.density(x)), abs=1e-10)
    assert dict(d_tau.atoms)[0.0] == pytest.approx(dict(d_inf.atoms)[0.0], abs=1e-12)


def test_propagator_requires_driftless_exponential(fig2_params):
    with pytest.raises(UnsupportedRegime):
        propagator_closed_form(fig2_params, 1.0)


def test_renewal_equation_residual(driftless_params):
    r = renewal_residual(driftless_params, 1.3, 0.8, x0=0.4)
    assert r < 1e-6


def test_renewal_residual_detects_wrong_formula(driftless_params, monkeypatch):
    import resetwalk.analytics as an

    orig = an._front_density
    monkeypatch.setattr(an, "_front_density",
                        lambda v, t, lam, g, rate: 1.02 * orig(v, t, lam, g, rate))
    assert renewal_residual(driftless_params, 1.3, 0.8, x0=0.4) > 1e-4


# --- mean exit times ------------------------------------------------------------------


def test_met_benchmark_value(unit_params):
    # frozen from the closed form; the Monte Carlo suite re-derives it to 3 SE
    assert mean_exit_time(unit_params, 1.0, 0.0) == pytest.approx(0.9453865348979844, rel=1e-12)


def test_met_vanishes_at_boundary(unit_params):
    assert mean_exit_time(unit_params, 1.0, 1.0) == 0.0


def test_met_limits_reference_values(unit_params):
    assert met_limit(unit_params, 1.0, 0.0, "infinite_reset") == pytest.approx(math.e, rel=1e-14)
    want = 0.5 + 0.25 * (1 - math.exp(-2.0))
    assert met_limit(unit_params, 1.0, 0.0, "no_reset") == pytest.approx(want, rel=1e-14)
    want = math.exp(0.5) * (1 + (1 - math.exp(-0.5)))
    assert met_limit(unit_params, 1.0, 0.0, "no_drift") == pytest.approx(want, rel=1e-14)
    assert met_limit(unit_params, 1.0, 0.0, "infinite_drift") == 0.0


def test_met_infinite_reset_equals_geometric_series(unit_params):
    # sum over "n-1 failures then one jump past b" with Exp(lambda) gaps
    g, b, lam = 1.0, 1.0, 1.0
    q = 1 - math.exp(-g * b)
    series = sum(n / lam * q ** (n - 1) * math.exp(-g * b) for n in range(1, 4000))
    assert met_limit(unit_params, b, 0.0, "infinite_reset") == pytest.approx(series, rel=1e-10)


def test_met_approaches_no_reset_limit():
    p = exponential_params(1.0, 1.0, 1e-6, 1.0)
    ref = met_limit(p, 1.0, 0.0, "no_reset")
    assert abs(mean_exit_time(p, 1.0, 0.0) - ref) / ref < 1e-4


def test_met_approaches_infinite_reset_limit():
    p = exponential_params(1.0, 1.0, 1e6, 1.0)
    assert abs(mean_exit_time(p, 1.0, 0.0) - math.e) / math.e < 1e-2


def test_met_approaches_no_drift_limit():
    p = exponential_params(1e-6, 1.0, 1.0, 1.0)
    ref = met_limit(p, 1.0, 0.0, "no_drift")
    assert abs(mean_exit_time(p, 1.0, 0.0) - ref) / ref < 1e-3


def test_met_reset_free_routing():
    p = exponential_params(1.0, 1.0, 0.0, 1.0)
    assert mean_exit_time(p, 1.0, 0.2) == met_limit(p, 1.0, 0.2, "no_reset")


def test_met_shot_noise_closed_form():
    # no jumps: survive the resets long enough to drift the distance
    p = exponential_params(2.0, 0.0, 3.0, 1.0)
    want = (math.exp(3.0 * 1.0 / 2.0) - math.exp(3.0 * 0.25 / 2.0)) / 3.0
    assert mean_exit_time(p, 1.0, 0.25) == pytest.approx(want, rel=1e-12)


def test_met_monotone_in_start_for_small_resets():
    p = exponential_params(1.0, 1.0, 0.1, 1.0)
    xs = np.linspace(0, 1.0, 21)
    vals = [mean_exit_time(p, 1.0, float(x)) for x in xs]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_met_flat_at_large_reset_rate():
    # heavy resetting pins the walk near 0, so interior starting points
    # barely matter (the exit time still vanishes right at the boundary)
    p = exponential_params(1.0, 1.0, 100.0, 1.0)
    xs = np.linspace(0, 0.9, 10)
    vals = np.array([mean_exit_time(p, 1.0, float(x)) for x in xs])
    assert (vals.max() - vals.min()) / vals.min() < 0.02


def test_met_domain_errors(unit_params):
    with pytest.raises(DomainError):
        mean_exit_time(unit_params, 1.0, 1.2)
    with pytest.raises(UnsupportedRegime):
        mean_exit_time(exponential_params(0.0, 1.0, 1.0, 1.0), 1.0, 0.0)


def test_met_integral_equation_residuals(rng):
    for _ in range(4):
        drift, lam, big_lam, g = rng.uniform(0.3, 3.0, 4)
        p = exponential_params(drift, lam, big_lam, g)
        b = rng.uniform(0.5, 2.0)
        x = rng.uniform(0.0, b * 0.9)
        assert met_equation_residual(p, b, x) < 1e-7


def test_exponent_properties_bulk_draws(rng):
    # dense randomized sweep of the ordering and Vieta identities
    n = 10_000
    lam, big_lam, drift, g = (rng.uniform(0.02, 20.0, n) for _ in range(4))
    big = lam + big_lam + drift * g
    disc = (lam + big_lam - drift * g) ** 2 + 4 * lam * drift * g
    ap = (big + np.sqrt(disc)) / (2 * drift)
    am = g * big_lam / (drift * ap)
    assert np.all(ap > g) and np.all(g > am) and np.all(am > 0)
    assert np.all(ap > big_lam / drift) and np.all(big_lam / drift > am)
    assert np.max(np.abs(ap * am * drift - g * big_lam) / (g * big_lam)) < 1e-10
    assert np.max(np.abs((ap + am) * drift - big) / big) < 1e-10
