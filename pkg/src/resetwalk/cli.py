"""Command-line interface.

Four subcommands: ``stationary`` (long-time observable density, analytic
curves plus a Monte Carlo histogram), ``met`` (mean-exit-time sweeps with MC
points on the closed-form curves), ``survival`` (Talbot-inverted survival
curve against the empirical one), and ``check`` (the self-validation suite,
one machine-readable pass/fail line per property).

Every command honors ``--seed`` (default documented below), so identical
invocations write identical files.  Output is plot-ready CSV with a
versioned comment header; ``--emit-plot-script`` drops a matplotlib script
next to it.  Exit codes: 0 success, 1 a check or comparison failed, 2 usage.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import analytics, montecarlo, transform
from .errors import ResetWalkError
from .model import CONFIG_KEYS, ModelParams, params_from_mapping, read_config, with_start

DEFAULT_SEED = 12345  # every command is deterministic under the default invocation
CSV_SCHEMA = "resetwalk-csv v1"

PARAM_FLAGS = {
    "gamma_drift": "--gamma-drift",
    "lambda_jump": "--lambda-jump",
    "lambda_reset": "--lambda-reset",
    "jump_gamma": "--jump-gamma",
    "x0": "--x0",
    "y0": "--y0",
    "sign": "--sign",
}


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    for key, flag in PARAM_FLAGS.items():
        sub.add_argument(flag, dest=key, type=float, default=None)
    sub.add_argument("--config", default=None, help="flat key=value parameter file; flags override it")


def _add_common(sub: argparse.ArgumentParser, default_n: int) -> None:
    sub.add_argument("--n", type=int, default=default_n, help="Monte Carlo paths")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--out", default=None, help="output CSV path")
    sub.add_argument("--format", choices=("csv", "report"), default="csv")
    sub.add_argument("--emit-plot-script", action="store_true")


def _resolve_params(args, defaults: Optional[dict] = None) -> ModelParams:
    merged = dict(defaults or {})
    if args.config:
        cfg = read_config(args.config)
        unknown = set(cfg) - set(CONFIG_KEYS)
        if unknown:
            raise ResetWalkError(f"unknown config keys: {sorted(unknown)}")
        merged.update(cfg)
    for key in PARAM_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return params_from_mapping(merged)


def _open_out(args, command: str, params: ModelParams, extra: str = ""):
    path = args.out or f"resetwalk-{command}.csv"
    fh = open(path, "w")
    fh.write(
        f"# {CSV_SCHEMA} command={command} seed={args.seed} n={getattr(args, 'n', 0)} "
        f"gamma_drift={params.gamma_drift} lambda_jump={params.lambda_jump} "
        f"lambda_reset={params.lambda_reset} jump_gamma={params.jump_law.rate}"
        f"{' ' + extra if extra else ''}\n"
    )
    return fh, path


def _plot_script(csv_path: str, kind: str) -> None:
    script = f"""import matplotlib.pyplot as plt
import numpy as np

rows = np.genfromtxt({csv_path!r}, delimiter=",", names=True, skip_header=1)
fig, ax = plt.subplots()
"""
    if kind == "stationary":
        script += """ax.loglog(rows["y"], rows["density_exact"], label="exact")
ax.loglog(rows["y"], rows["component_alpha_plus"], "--", label="alpha+ component")
ax.loglog(rows["y"], rows["component_alpha_minus"], ":", label="alpha- component")
keep = rows["mc_count"] > 0
ax.loglog(rows["y"][keep], rows["mc_density"][keep], "o", ms=3, label="Monte Carlo")
ax.set_xlabel("y"); ax.set_ylabel("p_Y(y)")
"""
    elif kind == "met-rate":
        script += """for g in np.unique(rows["gamma_drift"]):
    sel = (rows["gamma_drift"] == g) & (rows["kind"] == 0)
    ax.loglog(rows["lambda_reset"][sel], rows["met_exact"][sel], label=f"drift {g}")
    mc = (rows["gamma_drift"] == g) & (rows["kind"] == 1)
    ax.loglog(rows["lambda_reset"][mc], rows["mc_value"][mc], "o", ms=4)
ax.axhline(rows["met_infinite_reset"][0], color="k", ls=":", lw=1)
ax.set_xlabel("reset rate"); ax.set_ylabel("mean exit time from x=0")
"""
    elif kind == "met-start":
        script += """for L in np.unique(rows["lambda_reset"]):
    sel = (rows["lambda_reset"] == L) & (rows["kind"] == 0)
    ax.semilogy(rows["x"][sel], rows["met_exact"][sel], label=f"reset rate {L}")
    mc = (rows["lambda_reset"] == L) & (rows["kind"] == 1)
    ax.semilogy(rows["x"][mc], rows["mc_value"][mc], "o", ms=4)
ax.axhline(rows["met_infinite_reset"][0], color="k", ls=":", lw=1)
ax.set_xlabel("starting point x"); ax.set_ylabel("mean exit time")
"""
    else:  # survival
        script += """ax.plot(rows["tau"], rows["survival_exact"], label="Talbot")
ax.errorbar(rows["tau"], rows["mc_value"], yerr=3*rows["mc_se"], fmt="o", ms=3, label="Monte Carlo")
ax.set_xlabel("tau"); ax.set_ylabel("survival probability")
"""
    script += """ax.legend()
plt.savefig({out!r}, dpi=150)
print("wrote", {out!r})
""".format(out=csv_path.replace(".csv", ".png"))
    with open(csv_path.replace(".csv", ".plot.py"), "w") as fh:
        fh.write(script)


# --- stationary ----------------------------------------------------------------


def cmd_stationary(args) -> int:
    params = _resolve_params(args, {"jump_gamma": 1.0})
    if params.lambda_reset <= 0:
        print("error: the stationary density needs lambda_reset > 0", file=sys.stderr)
        return 2
    tau = args.tau
    exponents = analytics.tail_exponents(params)
    dens_y = analytics.stationary_density(params, "Y")

    hi = args.y_max
    if hi is None:
        # cover the tail out to ~1e-3 expected counts per bin
        slow = exponents.alpha_minus if exponents.alpha_minus is not None else exponents.alpha_nodrift
        hi = float(params.y0 * math.exp(min(40.0 / max(slow, 1e-2), 700.0)))
    spec = montecarlo.BinSpec("Y", args.bins, lo=float(params.y0), hi=hi)
    summary = montecarlo.empirical_density(params, tau, args.n, spec, args.seed)
    centers, mc_dens, mc_se = summary.density()

    # analytic single-exponent components of the drifted law (flat zero when driftless)
    drift = params.gamma_drift
    if drift > 0 and exponents.alpha_plus is not None:
        a_p, a_m = exponents.alpha_plus, exponents.alpha_minus
        g = params.jump_law.rate
        gap = a_p - a_m
        c_p = params.lambda_reset * (a_p - g) / (drift * gap)
        c_m = params.lambda_reset * (g - a_m) / (drift * gap)
        comp_plus = c_p * centers ** (-1.0 - a_p)
        comp_minus = c_m * centers ** (-1.0 - a_m)
    else:
        comp_plus = np.zeros_like(centers)
        comp_minus = np.zeros_like(centers)

    fh, path = _open_out(args, "stationary", params, extra=f"tau={tau}")
    fh.write("y,density_exact,component_alpha_plus,component_alpha_minus,mc_density,mc_se,mc_count\n")
    exact = dens_y.density(centers)
    for i, y in enumerate(centers):
        fh.write(
            f"{y:.10g},{float(exact[i]):.10g},{comp_plus[i]:.10g},{comp_minus[i]:.10g},"
            f"{mc_dens[i]:.10g},{mc_se[i]:.10g},{summary.counts[i]}\n"
        )
    fh.close()
    print(f"wrote {path}")
    if dens_y.atoms or any(a.mass > 0 for a in summary.atoms):
        apath = path.replace(".csv", "") + ".atoms.csv"
        with open(apath, "w") as fh:
            fh.write(f"# {CSV_SCHEMA} command=stationary-atoms seed={args.seed}\n")
            fh.write("location,mass_exact,mass_mc,mass_se\n")
            exact_atoms = dict(dens_y.atoms)
            for a in summary.atoms:
                fh.write(f"{a.location:.10g},{exact_atoms.pop(a.location, 0.0):.10g},"
                         f"{a.mass:.10g},{a.std_error:.10g}\n")
            for loc, mass in exact_atoms.items():
                fh.write(f"{loc:.10g},{mass:.10g},,\n")
        print(f"wrote {apath}")
    if args.emit_plot_script:
        _plot_script(path, "stationary")
    return 0


# --- mean exit time -------------------------------------------------------------


def cmd_met(args) -> int:
    defaults = {"gamma_drift": 1.0, "lambda_jump": 1.0, "lambda_reset": 1.0, "jump_gamma": 1.0}
    params = _resolve_params(args, defaults)
    if params.gamma_drift <= 0:
        print("error: the exit-time sweeps need gamma_drift > 0", file=sys.stderr)
        return 2
    b = args.b
    failures = 0
    ref = math.exp(params.jump_law.rate * b) / params.lambda_jump if params.lambda_jump else math.inf

    if args.mode == "rate-sweep":
        drifts = [float(v) for v in args.drifts.split(",")]
        curve_rates = np.geomspace(args.reset_min, args.reset_max, 60)
        mc_rates = np.geomspace(args.reset_min, args.reset_max, args.mc_points)
        fh, path = _open_out(args, "met", params, extra=f"mode=rate-sweep b={b}")
        fh.write("kind,gamma_drift,lambda_reset,met_exact,mc_value,mc_se,met_infinite_reset\n")
        for g_drift in drifts:
            for rate in curve_rates:
                p = params_from_vals(params, gamma_drift=g_drift, lambda_reset=float(rate))
                fh.write(f"0,{g_drift},{rate:.10g},"
                         f"{analytics.mean_exit_time(p, b, 0.0):.10g},,,{ref:.10g}\n")
            for k, rate in enumerate(mc_rates):
                p = params_from_vals(params, gamma_drift=g_drift, lambda_reset=float(rate))
                exact = analytics.mean_exit_time(p, b, 0.0)
                est = montecarlo.met_estimate(p, b, 0.0, args.n, args.seed + k)
                ok = est.within(exact)
                failures += 0 if ok else 1
                print(f"{'PASS' if ok else 'FAIL'} met drift={g_drift} reset={rate:.4g} "
                      f"mc={est.value:.6g} exact={exact:.6g} se={est.std_error:.2g}")
                fh.write(f"1,{g_drift},{rate:.10g},{exact:.10g},"
                         f"{est.value:.10g},{est.std_error:.10g},{ref:.10g}\n")
        fh.close()
        print(f"wrote {path}")
        if args.emit_plot_script:
            _plot_script(path, "met-rate")
    else:  # start-sweep
        rates = [float(v) for v in args.resets.split(",")]
        curve_x = np.linspace(0.0, b, 60)
        mc_x = np.linspace(0.0, b * 0.96, args.mc_points)
        fh, path = _open_out(args, "met", params, extra=f"mode=start-sweep b={b}")
        fh.write("kind,lambda_reset,x,met_exact,mc_value,mc_se,met_infinite_reset\n")
        for rate in rates:
            p = params_from_vals(params, lambda_reset=rate)
            for x in curve_x:
                fh.write(f"0,{rate},{x:.10g},{analytics.mean_exit_time(p, b, float(x)):.10g},"
                         f",,{ref:.10g}\n")
            for k, x in enumerate(mc_x):
                exact = analytics.mean_exit_time(p, b, float(x))
                est = montecarlo.met_estimate(with_start(p, float(x)), b, float(x),
                                              args.n, args.seed + k)
                ok = est.within(exact)
                failures += 0 if ok else 1
                print(f"{'PASS' if ok else 'FAIL'} met reset={rate} x={x:.4g} "
                      f"mc={est.value:.6g} exact={exact:.6g} se={est.std_error:.2g}")
                fh.write(f"1,{rate},{x:.10g},{exact:.10g},"
                         f"{est.value:.10g},{est.std_error:.10g},{ref:.10g}\n")
        fh.close()
        print(f"wrote {path}")
        if args.emit_plot_script:
            _plot_script(path, "met-start")
    print(f"{'PASS' if failures == 0 else 'FAIL'} met sweep ({failures} point(s) out of tolerance)")
    return 1 if failures else 0


def params_from_vals(params: ModelParams, **overrides) -> ModelParams:
    from dataclasses import replace

    return replace(params, **overrides)


# --- survival --------------------------------------------------------------------


def cmd_survival(args) -> int:
    defaults = {"gamma_drift": 1.0, "lambda_jump": 1.0, "lambda_reset": 1.0, "jump_gamma": 1.0}
    params = _resolve_params(args, defaults)
    b = args.b
    x0 = params.x0
    grid = np.linspace(args.tau / args.tau_points, args.tau, args.tau_points)
    curve = montecarlo.survival_estimate(params, b, x0, grid, args.n, args.seed)
    failures = 0
    fh, path = _open_out(args, "survival", params, extra=f"b={b} x0={x0}")
    fh.write("tau,survival_exact,mc_value,mc_se\n")
    for tau, est in zip(grid, curve):
        exact = transform.survival_time_domain(params, b, x0, float(tau))
        ok = abs(est.value - exact) <= 3.0 * max(est.std_error, 1e-12)
        failures += 0 if ok else 1
        fh.write(f"{tau:.10g},{exact:.10g},{est.value:.10g},{est.std_error:.10g}\n")
    fh.close()
    print(f"wrote {path}")

    # the time integral of the survival curve is the mean exit time
    met = analytics.mean_exit_time(params, b, x0) if params.gamma_drift > 0 \
        else analytics.met_limit(params, b, x0, "no_drift")
    vals = np.array([e.value for e in curve])
    area = float(np.trapezoid(np.concatenate(([1.0], vals)), np.concatenate(([0.0], grid))))
    area_ok = abs(area - met) <= 0.02 * met + 3.0 * grid[-1] / math.sqrt(args.n)
    print(f"{'PASS' if area_ok else 'FAIL'} survival-area area={area:.6g} met={met:.6g}")
    print(f"{'PASS' if failures == 0 else 'FAIL'} survival curve ({failures} point(s) off)")
    if args.emit_plot_script:
        _plot_script(path, "survival")
    return 1 if (failures or not area_ok) else 0


# --- check -----------------------------------------------------------------------


@dataclass
class CheckLine:
    name: str
    passed: bool
    value: float
    tol: float

    def row(self) -> str:
        return (f"{'PASS' if self.passed else 'FAIL'} {self.name} "
                f"value={self.value:.6g} tol={self.tol:.6g}")


def _check_exponents(n, seed, k_sigma):
    from .model import exponential_params

    p = exponential_params(2.0, 1.0, 2.0, 1.0)
    e = analytics.tail_exponents(p)
    yield CheckLine("exponents.alpha_plus", abs(e.alpha_plus - 2.0) < 1e-12,
                    e.alpha_plus, 1e-12)
    yield CheckLine("exponents.alpha_minus", abs(e.alpha_minus - 0.5) < 1e-12,
                    e.alpha_minus, 1e-12)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        lam, big_lam, drift, g = rng.uniform(0.05, 5.0, size=4)
        q = exponential_params(drift, lam, big_lam, g)
        ap, am = analytics.alpha_roots(q)
        worst = max(worst,
                    abs(ap * am * drift - g * big_lam) / (g * big_lam),
                    abs((ap + am) * drift - (lam + big_lam + drift * g)) / (lam + big_lam + drift * g))
    yield CheckLine("exponents.vieta", worst < 1e-10, worst, 1e-10)


def _check_normalization(n, seed, k_sigma):
    worst = 0.0
    from .model import exponential_params

    for lam in (0.5, 2.0):
        for big_lam in (0.5, 2.0):
            for g in (0.5, 2.0):
                p = exponential_params(0.0, lam, big_lam, g, x0=1.0)
                d = analytics.propagator_closed_form(p, 1.0)
                upper = analytics.propagator_mass_upper(p, 1.0, 1.0)
                worst = max(worst, abs(d.total_mass(upper=upper) - 1.0))
    yield CheckLine("propagator.normalization", worst < 1e-8, worst, 1e-8)


def _check_cke(n, seed, k_sigma):
    from .model import exponential_params

    p = exponential_params(0.0, 1.0, 1.0, 1.0)
    grid = np.linspace(0.07, 3.6, 8)
    r = montecarlo.ck_check(p, 0.5, 0.5, grid)
    yield CheckLine("semigroup.composition", r < 1e-6, r, 1e-6)
    r2 = montecarlo.stationary_invariance_residual(p, 0.8, grid)
    yield CheckLine("semigroup.invariance", r2 < 1e-6, r2, 1e-6)


def _check_decomposition(n, seed, k_sigma):
    from .model import exponential_params

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        lam, big_lam, drift, g = rng.uniform(0.1, 4.0, size=4)
        p = exponential_params(drift, lam, big_lam, g)
        w = complex(rng.uniform(0.1, 3.0), rng.uniform(-2.0, 2.0))
        s = complex(rng.uniform(0.1, 3.0), rng.uniform(-2.0, 2.0))
        worst = max(worst, transform.decomposition_check(p, w, s, x0=rng.uniform(0.0, 2.0)))
    yield CheckLine("transform.decomposition", worst < 1e-12, worst, 1e-12)


def _check_laplace(n, seed, k_sigma):
    from .model import exponential_params

    err = abs(transform.invert_laplace(lambda s: 1.0 / (s + 1.0), 1.0) - math.exp(-1.0))
    yield CheckLine("laplace.textbook_exp", err < 1e-10, err, 1e-10)
    bessel = abs(transform.invert_laplace(lambda s: np.exp(1.0 / s) / s**2, 1.0)
                 - transform.bessel_i1(2.0))
    yield CheckLine("laplace.bessel_pair", bessel < 1e-8, bessel, 1e-8)
    p = exponential_params(1.0, 1.0, 1.0, 1.0)
    gap = abs(transform.survival_hat(p, 1.0, 0.3, 0.0) - analytics.mean_exit_time(p, 1.0, 0.3))
    yield CheckLine("laplace.met_identity", gap < 1e-9, gap, 1e-9)


def _check_met(n, seed, k_sigma):
    from .model import exponential_params

    p = exponential_params(1.0, 1.0, 1e-6, 1.0)
    rel = abs(analytics.mean_exit_time(p, 1.0, 0.0)
              - analytics.met_limit(p, 1.0, 0.0, "no_reset")) / analytics.met_limit(p, 1.0, 0.0, "no_reset")
    yield CheckLine("met.no_reset_limit", rel < 1e-4, rel, 1e-4)
    p = exponential_params(1.0, 1.0, 1e6, 1.0)
    rel = abs(analytics.mean_exit_time(p, 1.0, 0.0) - math.e) / math.e
    yield CheckLine("met.infinite_reset_limit", rel < 1e-2, rel, 1e-2)
    p = exponential_params(1e-6, 1.0, 1.0, 1.0)
    ref = analytics.met_limit(p, 1.0, 0.0, "no_drift")
    rel = abs(analytics.mean_exit_time(p, 1.0, 0.0) - ref) / ref
    yield CheckLine("met.no_drift_limit", rel < 1e-3, rel, 1e-3)
    p = exponential_params(1.0, 1.0, 1.0, 1.0)
    r = analytics.met_equation_residual(p, 1.0, 0.35)
    yield CheckLine("met.integral_equation", r < 1e-7, r, 1e-7)


def _check_renewal(n, seed, k_sigma):
    from .model import exponential_params

    p = exponential_params(0.0, 1.0, 1.0, 1.0, x0=0.4)
    r = analytics.renewal_residual(p, 1.1, 0.8)
    yield CheckLine("propagator.renewal_equation", r < 1e-6, r, 1e-6)


def _check_atoms(n, seed, k_sigma):
    from .model import exponential_params

    p = exponential_params(0.0, 1.0, 1.0, 1.0, x0=2.0)
    summary = montecarlo.empirical_density(p, 1.0, n, montecarlo.BinSpec("X", 60), seed)
    exact = dict(analytics.atom_masses(p, 1.0))
    for a in summary.atoms:
        z = abs(a.mass - exact[a.location]) / max(a.std_error, 1e-12)
        yield CheckLine(f"atoms.x={a.location:g}", z < k_sigma, z, k_sigma)


def _check_moments(n, seed, k_sigma):
    from .model import exponential_params

    p = exponential_params(0.0, 1.0, 1.0, 1.0)
    xs, _ = montecarlo._sample_states(p, 100.0, n, seed)
    for order in (1, 2):
        target = analytics.stationary_moments(p, order)
        vals = xs**order
        se = float(vals.std(ddof=1) / math.sqrt(n))
        z = abs(float(vals.mean()) - target) / se
        yield CheckLine(f"moments.order{order}", z < k_sigma, z, k_sigma)


CHECKS = {
    "exponents": _check_exponents,
    "normalization": _check_normalization,
    "cke": _check_cke,
    "decomposition": _check_decomposition,
    "laplace": _check_laplace,
    "met": _check_met,
    "renewal": _check_renewal,
    "atoms": _check_atoms,
    "moments": _check_moments,
}


def cmd_check(args) -> int:
    names = args.only.split(",") if args.only else list(CHECKS)
    unknown = [nm for nm in names if nm not in CHECKS]
    if unknown:
        print(f"error: unknown checks {unknown}; available: {sorted(CHECKS)}", file=sys.stderr)
        return 2
    k_sigma = 5.0 if args.n <= 10_000 else 3.0
    lines = []
    for nm in names:
        lines.extend(CHECKS[nm](args.n, args.seed, k_sigma))
    rows = [line.row() for line in lines]
    if args.format == "csv":
        out = ["status,name,value,tol"] + [
            f"{'PASS' if l.passed else 'FAIL'},{l.name},{l.value:.6g},{l.tol:.6g}" for l in lines
        ]
        print("\n".join(out))
    else:
        print("\n".join(rows))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(f"# {CSV_SCHEMA} command=check seed={args.seed} n={args.n}\n")
            fh.write("status,name,value,tol\n")
            for l in lines:
                fh.write(f"{'PASS' if l.passed else 'FAIL'},{l.name},{l.value:.6g},{l.tol:.6g}\n")
    n_failed = sum(0 if l.passed else 1 for l in lines)
    print(f"{'PASS' if n_failed == 0 else 'FAIL'} check suite: {len(lines) - n_failed}/{len(lines)} ok")
    return 1 if n_failed else 0


# --- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resetwalk",
        description="drift-jump walks under Poissonian resetting: exact simulation and closed forms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    st = sub.add_parser("stationary", help="long-time observable density: curves + MC histogram")
    _add_param_flags(st)
    _add_common(st, default_n=1_000_000)
    st.add_argument("--tau", type=float, default=100.0,
                    help="simulation horizon, much longer than any relaxation time")
    st.add_argument("--bins", type=int, default=80)
    st.add_argument("--y-max", type=float, default=None)
    st.set_defaults(func=cmd_stationary)

    met = sub.add_parser("met", help="mean-exit-time sweeps with MC points")
    _add_param_flags(met)
    _add_common(met, default_n=1_000_000)
    met.add_argument("--mode", choices=("rate-sweep", "start-sweep"), default="rate-sweep")
    met.add_argument("--b", type=float, default=1.0)
    met.add_argument("--drifts", default="1,2.5,5,10", help="rate-sweep: drift velocities")
    met.add_argument("--resets", default="0.1,1,10,100", help="start-sweep: reset rates")
    met.add_argument("--reset-min", type=float, default=0.1)
    met.add_argument("--reset-max", type=float, default=100.0)
    met.add_argument("--mc-points", type=int, default=6)
    met.set_defaults(func=cmd_met)

    sv = sub.add_parser("survival", help="survival curve: Talbot inversion vs Monte Carlo")
    _add_param_flags(sv)
    _add_common(sv, default_n=100_000)
    sv.add_argument("--b", type=float, default=1.0)
    sv.add_argument("--tau", type=float, default=4.0, help="largest grid time")
    sv.add_argument("--tau-points", type=int, default=24)
    sv.set_defaults(func=cmd_survival)

    ck = sub.add_parser("check", help="self-validation suite, one PASS/FAIL line per property")
    _add_param_flags(ck)
    _add_common(ck, default_n=200_000)
    ck.add_argument("--only", default=None, help="comma-separated subset of checks")
    ck.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResetWalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
