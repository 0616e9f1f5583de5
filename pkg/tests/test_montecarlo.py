import math

import numba
import numpy as np
import pytest
from scipy.stats import ks_2samp

from resetwalk.analytics import (
    atom_masses,
    mean_exit_time,
    met_limit,
    stationary_density,
    stationary_moments,
    tail_exponents,
)
from resetwalk.errors import DomainError, InsufficientTail, NoExitBudget, UnsupportedRegime
from resetwalk.model import CustomJumps, ModelParams, exponential_params, validate
from resetwalk.montecarlo import (
    BinSpec,
    _sample_states,
    ck_check,
    empirical_density,
    exit_samples,
    irreducibility_check,
    met_estimate,
    mixture_states,
    stationary_invariance_residual,
    summarize_states,
    survival_estimate,
    tail_fit,
)
from resetwalk.transform import survival_time_domain


def test_summary_accounts_for_every_path(driftless_params):
    s = empirical_density(driftless_params, 1.0, 50_000, BinSpec("X", 64), seed=5)
    assert s.total_accounted() == 50_000
    assert all(0.0 <= a.mass <= 1.0 for a in s.atoms)


def test_reproducible_across_thread_counts(driftless_params):
    a = empirical_density(driftless_params, 2.0, 20_000, BinSpec("X", 50), seed=9)
    old = numba.get_num_threads()
    try:
        numba.set_num_threads(1)
        b = empirical_density(driftless_params, 2.0, 20_000, BinSpec("X", 50), seed=9)
    finally:
        numba.set_num_threads(old)
    assert np.array_equal(a.counts, b.counts)
    assert a.atoms == tuple(b.atoms)
    assert np.array_equal(a.edges, b.edges)


def test_atom_estimates_match_formulas():
    p = exponential_params(0.0, 1.0, 1.0, 1.0, x0=2.0)
    s = empirical_density(p, 1.0, 400_000, BinSpec("X", 64), seed=31)
    exact = dict(atom_masses(p, 1.0))
    for a in s.atoms:
        assert abs(a.mass - exact[a.location]) <= 3.0 * a.std_error


def test_drift_front_atom_with_drift():
    p = exponential_params(1.5, 0.7, 0.9, 1.0, x0=0.3)
    tau = 1.2
    s = empirical_density(p, tau, 300_000, BinSpec("X", 64), seed=13)
    (front,) = s.atoms
    assert front.location == pytest.approx(0.3 + 1.5 * tau)
    want = math.exp(-(0.7 + 0.9) * tau)
    assert abs(front.mass - want) <= 3.0 * front.std_error


def test_histogram_tracks_stationary_density(driftless_params):
    s = empirical_density(driftless_params, 60.0, 300_000, BinSpec("X", 40, lo=0.0, hi=12.0), seed=8)
    centers, dens, se = s.density()
    d = stationary_density(driftless_params, "X")
    edges = s.edges
    # bin-averaged exact density against the estimate, where well populated
    for i in range(len(centers)):
        if s.counts[i] < 1000:
            continue
        lo, hi = edges[i], edges[i + 1]
        exact = 0.25 * (math.exp(-0.5 * lo) - math.exp(-0.5 * hi)) / 0.5 / (hi - lo)
        assert abs(dens[i] - exact) <= 3.0 * se[i]


def test_met_estimate_matches_closed_form(unit_params):
    est = met_estimate(unit_params, 1.0, 0.0, n_paths=200_000, seed=17)
    assert est.within(mean_exit_time(unit_params, 1.0, 0.0))


def test_met_estimate_infinite_reset_regime():
    p = exponential_params(1.0, 1.0, 1e4, 1.0)
    est = met_estimate(p, 1.0, 0.0, n_paths=30_000, seed=19)
    assert abs(est.value - math.e) / math.e < 0.02


def test_met_estimate_drift_dominated_ordering():
    # close to the boundary with strong drift and rare resets the exit takes
    # about the drift time; resets can only delay an up-crossing exit, so the
    # reset-free value is a strict lower bound
    p = exponential_params(10.0, 1.0, 0.1, 1.0, x0=0.9)
    est = met_estimate(p, 1.0, 0.9, n_paths=30_000, seed=23)
    assert est.within(mean_exit_time(p, 1.0, 0.9))
    assert est.value + 3.0 * est.std_error > met_limit(p, 1.0, 0.9, "no_reset")
    assert mean_exit_time(p, 1.0, 0.9) > met_limit(p, 1.0, 0.9, "no_reset")


def test_met_budget_propagates_censored_count():
    p = exponential_params(0.0, 1.0, 5.0, 1.0)  # jumps rarely beat the resets
    with pytest.raises(NoExitBudget) as err:
        met_estimate(p, 12.0, 0.0, n_paths=200, seed=3, max_events=500)
    assert err.value.n_censored > 0


def test_exit_samples_reject_frozen_process():
    with pytest.warns(Warning):
        p = exponential_params(0.0, 0.0, 1.0, 1.0)
    with pytest.raises(UnsupportedRegime):
        exit_samples(p, 1.0, 0.0, 10, 1)


def test_survival_estimate_curve(unit_params):
    grid = np.linspace(0.25, 3.0, 12)
    curve = survival_estimate(unit_params, 1.0, 0.0, grid, n_paths=150_000, seed=29)
    vals = np.array([e.value for e in curve])
    assert np.all(np.diff(vals) <= 1e-12)  # nonincreasing
    assert vals[0] <= 1.0
    for tau, est in zip(grid, curve):
        want = survival_time_domain(unit_params, 1.0, 0.0, float(tau))
        assert abs(est.value - want) <= 3.0 * max(est.std_error, 1e-4)


def test_survival_estimate_validates_grid(unit_params):
    with pytest.raises(DomainError):
        survival_estimate(unit_params, 1.0, 0.0, [0.5, 0.5], n_paths=10, seed=1)


def test_tail_fit_recovers_pareto_slope(rng):
    # synthetic samples with a known tail: y = (1-u)^(-1/a), a = 1.5
    a = 1.5
    n = 400_000
    y = (1.0 - rng.random(n)) ** (-1.0 / a)
    xs = np.log(y)
    tags = np.zeros(n, dtype=np.int8)
    p = exponential_params(0.0, 1.0, 1.0, 1.0)
    s = summarize_states(xs, tags, p, 1.0, BinSpec("Y", 60, lo=1.0, hi=1e4), seed=0)
    fit = tail_fit(s, (2.0, 200.0))
    assert abs(fit.exponent - a) <= max(3.0 * fit.exponent_se, 0.02)
    assert fit.slope == pytest.approx(-(1.0 + fit.exponent))


def test_tail_fit_driftless_exponent():
    p = exponential_params(0.0, 1.0, 2.0, 1.0)
    e = tail_exponents(p).alpha_nodrift
    s = empirical_density(p, 60.0, 400_000, BinSpec("Y", 70, lo=1.0, hi=1e8), seed=41)
    fit = tail_fit(s, (10.0, 1e3))
    assert abs(fit.exponent - e) < 0.05


def test_tail_fit_insufficient_data(driftless_params):
    s = empirical_density(driftless_params, 1.0, 2_000, BinSpec("Y", 30, lo=1.0, hi=100.0), seed=2)
    with pytest.raises(InsufficientTail):
        tail_fit(s, (50.0, 100.0))


def test_ck_composition_residual(driftless_params):
    grid = np.linspace(0.07, 3.6, 9)
    assert ck_check(driftless_params, 0.5, 0.5, grid, x0=0.0) < 1e-6
    assert ck_check(driftless_params, 0.25, 1.0, grid, x0=0.7) < 1e-6


def test_ck_residual_detects_wrong_kernel(driftless_params, monkeypatch):
    # a slightly rescaled reset-free kernel must break the composition
    from resetwalk import montecarlo as mc

    orig = mc.reset_free_density
    monkeypatch.setattr(mc, "reset_free_density", lambda p, v, t: 1.02 * orig(p, v, t))
    grid = np.linspace(0.1, 2.0, 5)
    assert ck_check(driftless_params, 0.5, 0.5, grid) > 1e-4


def test_stationary_invariance(driftless_params):
    grid = np.linspace(0.11, 4.0, 7)
    assert stationary_invariance_residual(driftless_params, 0.8, grid) < 1e-6


def test_mixture_decomposition_ks(driftless_params):
    # direct event-driven simulation against the last-reset-age mixture
    n = 100_000
    xs, _ = _sample_states(driftless_params, 1.0, n, seed=77)
    mix = mixture_states(driftless_params, 1.0, n, seed=78)
    assert ks_2samp(xs, mix).pvalue > 0.01


def test_mixture_decomposition_ks_with_drift(fig2_params):
    n = 100_000
    xs, _ = _sample_states(fig2_params, 1.5, n, seed=81)
    mix = mixture_states(fig2_params, 1.5, n, seed=82)
    assert ks_2samp(xs, mix).pvalue > 0.01


def test_stationary_mean_sanity(driftless_params):
    n = 150_000
    xs, _ = _sample_states(driftless_params, 100.0, n, seed=55)
    se = xs.std(ddof=1) / math.sqrt(n)
    assert abs(xs.mean() - stationary_moments(driftless_params, 1)) < 3.0 * se


def test_irreducibility_single_jump_bound(driftless_params):
    r = irreducibility_check(driftless_params, (1.0, 1.1), x0=0.0, tau=2.0,
                             n_paths=100_000, seed=61)
    want = math.exp(-2.0) * (1 - math.exp(-2.0)) * (math.exp(-1.0) - math.exp(-1.1))
    assert r.lower_bound == pytest.approx(want, rel=1e-12)
    assert r.passed


def test_irreducibility_reset_branch_bound(driftless_params):
    p = exponential_params(0.0, 1.0, 1.0, 1.0, x0=5.0)
    r = irreducibility_check(p, (1.0, 1.1), tau=2.0, n_paths=100_000, seed=62)
    # equal jump and reset rates use the confluent bracket
    bracket = 1.0 - (1.0 + 2.0) * math.exp(-2.0)
    want = bracket * (math.exp(-1.0) - math.exp(-1.1))
    assert r.lower_bound == pytest.approx(want, rel=1e-12)
    assert r.passed


def test_irreducibility_whole_axis(driftless_params):
    r = irreducibility_check(driftless_params, (0.0, 1e9), tau=1.0, n_paths=5_000, seed=63)
    assert r.estimate == 1.0 and r.lower_bound == 1.0 and r.passed


def test_irreducibility_needs_driftless(fig2_params):
    with pytest.raises(UnsupportedRegime):
        irreducibility_check(fig2_params, (1.0, 1.1), tau=1.0, n_paths=10, seed=1)


def test_custom_law_sampler_path():
    # gamma(2) jumps via the slow generic loop; checked against its moments
    law = CustomJumps(
        pdf=lambda u: u * math.exp(-u),
        laplace=lambda w: (1.0 / (1.0 + w)) ** 2,
        mean=2.0,
        second_moment=6.0,
        sampler=lambda rng: float(rng.gamma(2.0, 1.0)),
        complex_ok=True,
    )
    p = validate(ModelParams(0.0, 1.0, 1.0, law))
    n = 4_000
    xs, tags = _sample_states(p, 30.0, n, seed=7)
    xs2, tags2 = _sample_states(p, 30.0, n, seed=7)
    assert np.array_equal(xs, xs2) and np.array_equal(tags, tags2)
    se = xs.std(ddof=1) / math.sqrt(n)
    assert abs(xs.mean() - stationary_moments(p, 1)) < 4.0 * se


def test_custom_law_without_sampler_rejected():
    law = CustomJumps(pdf=lambda u: math.exp(-u), laplace=lambda w: 1 / (1 + w), mean=1.0)
    p = validate(ModelParams(0.0, 1.0, 1.0, law))
    with pytest.raises(UnsupportedRegime):
        empirical_density(p, 1.0, 100, BinSpec("X", 10), seed=1)


def test_survival_starts_at_one(unit_params):
    curve = survival_estimate(unit_params, 1.0, 0.0, [1e-4, 0.5], n_paths=30_000, seed=91)
    assert curve[0].value == pytest.approx(1.0, abs=1e-3)


def test_survival_midrange_matches_talbot_inversion(unit_params):
    # beyond the drift-hit time the transform is smooth enough for the
    # default fixed-Talbot contour; the raw inversion must sit on the MC curve
    from resetwalk.transform import LaplaceFn, invert_laplace, survival_hat

    grid = np.array([1.25, 1.75, 2.5, 3.25])
    curve = survival_estimate(unit_params, 1.0, 0.0, grid, n_paths=150_000, seed=93)
    for tau, est in zip(grid, curve):
        talbot = invert_laplace(
            LaplaceFn(lambda s: survival_hat(unit_params, 1.0, 0.0, s)), float(tau))
        assert abs(est.value - talbot) <= 3.0 * max(est.std_error, 1e-4)


def test_ck_short_second_step(driftless_params):
    # tau2 -> 0 collapses the composition onto the single-step propagator
    grid = np.linspace(0.1, 2.5, 6)
    assert ck_check(driftless_params, 0.5, 0.02, grid, x0=0.3) < 1e-6


def test_summary_csv_export(tmp_path, driftless_params):
    s = empirical_density(driftless_params, 1.0, 5_000, BinSpec("X", 20), seed=3)
    out = tmp_path / "summary.csv"
    s.to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[1] == "bin_lo,bin_hi,count,density,density_se"
    assert len(lines) == 22
    atoms = (tmp_path / "summary.csv.atoms.csv").read_text().splitlines()
    assert atoms[0] == "location,mass,std_error,count"
