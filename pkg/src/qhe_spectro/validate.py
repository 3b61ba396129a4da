"""Oracle suite: every closed form against an independent computation.

Each check reports its worst error against a tolerance. ``INFO`` entries
record measured disagreements between closed forms that do not hold as
stated; they are printed with their numbers and never count as passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.linalg import expm

from . import bath, engine, kernels, response
from .config import RunConfig
from .lindblad import build_generator, evolve, steady_state, subsystem
from .params import DensityState, fig2_params
from .scans import fig2_data, pool_map

PASS, FAIL, INFO = "PASS", "FAIL", "INFO"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    value: float
    tolerance: str
    note: str = ""

    def line(self):
        text = f"{self.status:<4}  {self.name:<38} value={self.value:.3e}  tol={self.tolerance}"
        return f"{text}  {self.note}" if self.note else text


def _within(name, value, tol, note=""):
    ok = bool(np.isfinite(value)) and value <= tol
    return CheckResult(name, PASS if ok else FAIL, float(value), f"{tol:.0e}", note)


def _rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


# --- effective bath and full model ------------------------------------------------------

def check_effective_bath(settings):
    p = fig2_params(Omega_p=settings["model.Omega_p_eV"], Gamma_2=settings["model.Gamma_2_ps"],
                    n_2=settings["model.n_2"])
    rtol, atol = settings["tolerances.ode_rel"], settings["tolerances.ode_abs"]
    horizon = bath.validity_horizon(p)
    t_log = np.geomspace(horizon * 1e-6, horizon * (1 - 1e-3), 400)
    cols_log, traj_log, _ = fig2_data(p, t_log, rtol, atol)
    t_lin = np.linspace(0.0, 8 / bath.gamma_tilde(p, "exact"), 400)
    cols, traj, _ = fig2_data(p, t_lin, rtol, atol)

    fixed_err = float(cols["diff_c_th_fixed"].max())
    in_band = 0.05 <= fixed_err <= 0.11
    full_err = float(cols["diff_full_closed"].max())
    drift = max(traj.trace_drift, traj_log.trace_drift)
    herm = max(traj.hermiticity_error, traj_log.hermiticity_error)
    floor = min(traj.min_eigenvalue(), traj_log.min_eigenvalue())

    g = build_generator(p)
    reduced = subsystem(g, ("gg", "11", "22", "g2", "2g"))
    ss = steady_state(reduced)
    b1 = bath.pumped_steady_state(p.n_2)
    b1_err = max(abs(ss["gg"] - b1[0]), abs(ss["11"] - b1[1]), abs(ss["22"] - b1[2]))
    return [
        _within("bath/exact-match-identity", float(np.max(cols_log["diff_c_th_t"])), 1e-12),
        CheckResult("bath/fixed-match-error", PASS if in_band else FAIL, fixed_err, "[0.05,0.11]"),
        _within("core/null-space-vs-closed-form", b1_err, 1e-10),
        CheckResult("core/full-model-vs-closed-form", INFO, full_err, "1e-03",
                    "closed forms freeze rho_22; not an oracle at these parameters"),
        _within("core/trace-drift", drift, 1e-8),
        _within("core/hermiticity", herm, 1e-10),
        _within("core/positivity-floor", max(0.0, -floor), 1e-7),
    ]


def check_null_space_vs_long_time(settings):
    # driven, non-degenerate: every bath and both fields on
    p = fig2_params(Omega_p=5e-4, Gamma_2=0.5, n_2=5.0, Gamma_c=0.3, lam=2e-4)
    g = build_generator(p)
    ss = steady_state(g).to_vector()
    t_end = 200.0
    traj = evolve(g, DensityState.pure("g"), np.array([0.0, t_end]),
                  settings["tolerances.ode_rel"], settings["tolerances.ode_abs"])
    err = float(np.max(np.abs(traj.states[-1] - ss)))
    return [_within("core/null-space-vs-long-time", err, 1e-7)]


def check_kernels(settings):
    rng = np.random.default_rng(settings["validate.seed"])
    p = fig2_params(Omega_p=10 ** rng.uniform(-4, -3), Gamma_2=rng.uniform(0.05, 0.5),
                    n_2=rng.uniform(2, 50), Gamma_c=rng.uniform(0.05, 0.5),
                    lam=10 ** rng.uniform(-4, -3))
    g = build_generator(p)
    t = np.linspace(0.0, 20.0, 11)
    y0 = DensityState.pure("g").to_vector()
    exact = np.array([expm(g.matrix * ti) @ y0 for ti in t])
    rtol, atol = settings["tolerances.ode_rel"], settings["tolerances.ode_abs"]
    results = []
    backends = [("python", kernels.py_dopri5_linear)]
    if kernels.c_dopri5_linear is not None:
        backends.append(("cython", kernels.c_dopri5_linear))
    outs = {}
    for name, fn in backends:
        Y, *_ = fn(g.matrix, y0, t, rtol, atol, 1e-3, 10_000_000)
        outs[name] = Y
        results.append(_within(f"kernel/{name}-vs-expm", float(np.max(np.abs(Y - exact))), 1e-7))
    if len(outs) == 2:
        diff = float(np.max(np.abs(outs["python"] - outs["cython"])))
        # the two backends sum in different orders, so a step on the accept threshold can
        # flip and the step sequences part; they then agree to integration tolerance
        results.append(_within("kernel/backend-agreement", diff, 10 * rtol))
    return results


# --- engine -------------------------------------------------------------------------------

def _engine_draw(rng, n_lo, n_hi):
    # the probe coupling is drawn around sqrt(Gamma_h Gamma_c n_h n_c): far below it the
    # power only sees detailed-balance ratios and is blind to a common rate factor
    gh, gc = 10 ** rng.uniform(-3, -1, size=2)
    n_h, n_c = 10 ** rng.uniform(n_lo, n_hi, size=2)
    lam = math.sqrt(gh * gc * n_h * n_c) * 10 ** rng.uniform(-1, 1)
    omega_c = rng.uniform(0.05, 0.2)
    return lam, gh, gc, n_h, n_c, omega_c, omega_c * (1 + rng.uniform(0.1, 3))


def check_engine_power(settings):
    rng = np.random.default_rng(settings["validate.seed"] + 1)
    factor = settings["validate.cold_rate_factor"]
    draws = settings["validate.draws"]
    worst_c7 = worst_exact = worst_eff = 0.0
    for _ in range(draws):
        lam, gh, gc, nh, nc, oc, oh = _engine_draw(rng, 11, 13)
        rho = engine.three_level_steady_state(lam, gh, gc, nh, nc, cold_factor=factor)
        P, _ = engine.work_and_heat(lam, rho[3], oc, oh)
        worst_c7 = max(worst_c7, _rel(-P, engine.power_closed_form(lam, gh, gc, nh, nc, oc, oh)))

        lam, gh, gc, nh, nc, oc, oh = _engine_draw(rng, -1, 4)
        rho = engine.three_level_steady_state(lam, gh, gc, nh, nc, cold_factor=factor)
        P, Q = engine.work_and_heat(lam, rho[3], oc, oh)
        worst_exact = max(worst_exact, _rel(-P, engine.power_exact(lam, gh, gc, nh, nc, oc, oh)))
        if Q != 0:
            worst_eff = max(worst_eff, abs(-P / Q - (1 - oc / oh)))
    return [
        _within("engine/high-T-power-vs-steady-state", worst_c7, 1e-10, "n in [1e11, 1e13]"),
        _within("engine/exact-power-vs-steady-state", worst_exact, 1e-10, "n in [0.1, 1e4]"),
        _within("engine/efficiency-identity", worst_eff, 1e-12),
    ]


ENGINE_GRID = {
    "tau": (0.1, 0.3, 0.5, 0.7, 0.9),
    "c_p": (1.5, 2.0, 4.0, 8.0, 20.0),
    "lambda_prime": (0.05, 0.2, 1.0, 3.0, 10.0),
}


def check_engine_maxima(settings):
    tol = settings["tolerances.oracle_rel"]
    worst_p = worst_eta = worst_nominal = 0.0
    for tau in ENGINE_GRID["tau"]:
        for cp in ENGINE_GRID["c_p"]:
            for lp in ENGINE_GRID["lambda_prime"]:
                point = engine.DimensionlessPoint(tau, cp, lp)
                _, p_num, eta_num = engine.numerical_maximum(point, engine.dimensionless_power_linear)
                worst_p = max(worst_p, _rel(engine.pmax_q(point), p_num))
                worst_eta = max(worst_eta, _rel(engine.eta_star(point), eta_num))
                _, p_nominal, _ = engine.numerical_maximum(point, engine.dimensionless_power)
                worst_nominal = max(worst_nominal, _rel(engine.pmax_q(point), p_nominal))
    return [
        _within("engine/max-power-vs-grid", worst_p, tol, "objective c21(c_p-1-c_p c21)"),
        _within("engine/eta-at-max-vs-grid", worst_eta, tol),
        CheckResult("engine/max-power-vs-nominal-power", INFO, worst_nominal, f"{tol:.0e}",
                    "closed-form maximum belongs to the linearised work quantum"),
    ]


def check_region_map(settings):
    b = engine.region_boundaries(0.5)
    expected = (2.0, 8 / 3, 2 * math.sqrt(2), 3.0, 4.0)
    err_b = max(abs(x - y) for x, y in zip(b, expected))
    err_ca = abs(engine.boundary_efficiencies(0.5)[2] - (1 - math.sqrt(0.5)))
    worst = 0.0
    for eta_C in np.linspace(0.02, 0.98, 49):
        for c_p in np.linspace(1.1, 10, 90):
            info = engine.classify_region(eta_C, c_p)
            if info.label == "IV":
                worst = max(worst, info.eta_table - eta_C)
    return [
        _within("engine/table-boundaries", err_b, 1e-12),
        _within("engine/curzon-ahlborn-boundary", err_ca, 1e-12),
        _within("engine/region-IV-below-carnot", max(worst, 0.0), 1e-12),
    ]


# --- pump-probe response -----------------------------------------------------------------

def check_greens(settings):
    rng = np.random.default_rng(settings["validate.seed"] + 2)
    worst_expm = worst_spec = 0.0
    for _ in range(50):
        g2, gc = 10 ** rng.uniform(-3, 0, size=2)
        n2, nc = 10 ** rng.uniform(-2, 3, size=2)
        t = 10 ** rng.uniform(-2, 3)
        closed = response.population_greens(t, g2, n2, gc, nc)
        k_ph, k_c = response.transport_matrices(g2, n2, gc, nc)
        ref = (expm(-k_c * t)[0, 1], expm(-k_ph * t)[0, 1])
        spec = response.population_greens_spectral(t, g2, n2, gc, nc)
        worst_expm = max(worst_expm, *(abs(a - b) for a, b in zip(closed, ref)))
        worst_spec = max(worst_spec, *(abs(a - b) for a, b in zip(spec, ref)))
    return [
        _within("response/greens-vs-expm", worst_expm, 1e-10),
        _within("response/spectral-vs-expm", worst_spec, 1e-10),
    ]


def check_spectro_maximum(settings):
    tol = settings["tolerances.oracle_rel"]
    worst_grid = worst_opt = 0.0
    for tau in np.linspace(0.1, 0.9, 10):
        for cp in np.linspace(1.5, 20, 10):
            for gc in (0.1, 0.5, 1.0, 5.0, 20.0):
                point = engine.DimensionlessPoint(tau, cp, 1.0, gamma_c=gc)
                _, p_num = response.spectro_numerical_maximum(point)
                worst_grid = max(worst_grid, _rel(response.pmax_s(point), p_num))
            opt = engine.DimensionlessPoint(tau, cp, 0.7, gamma_c=(cp - 1) / 2)
            worst_opt = max(worst_opt, _rel(response.pmax_s(opt), response.pmax_s_optimal(opt)))
    return [
        _within("response/max-signal-vs-grid", worst_grid, tol),
        _within("response/max-signal-at-optimal-gamma", worst_opt, 1e-12),
    ]


def check_headline(settings):
    errs = []
    for tau in (0.3, 0.5, 0.8):
        at_diff = engine.DimensionlessPoint(tau, 1 + response.max_difference_c_p_prime(tau), 1.0)
        cmp = response.compare_engines(at_diff)
        errs += [abs(cmp.P_Q_star - 32 / 9), abs(cmp.ratio - 2)]
        at_cross = engine.DimensionlessPoint(tau, 1 + response.crossing_c_p_prime(tau), 1.0)
        errs.append(abs(response.compare_engines(at_cross).difference))
    return [_within("response/headline-numbers", max(errs), 1e-12)]


def check_signal_modes(settings):
    p = fig2_params(n_2=1000.0, Gamma_c=0.02, T_c=100.0)
    inputs = response.SpectroInputs(p, 1e-3, 1.0, 1.0, 1e-4, 1e-4)
    err = _rel(response.spectro_power(inputs, "high_T"), response.spectro_power(inputs))
    return [_within("response/high-T-vs-general", err, 5 / min(p.n_2, p.n_c),
                    f"n_2={p.n_2:.0f} n_c={p.n_c:.0f}")]


CHECKS = (
    check_effective_bath, check_null_space_vs_long_time, check_kernels, check_engine_power,
    check_engine_maxima, check_region_map, check_greens, check_spectro_maximum, check_headline,
    check_signal_modes,
)


def run_validate(config: RunConfig, jobs=1):
    """Run every check; returns the list of :class:`CheckResult` in a fixed order."""
    settings = dict(config.settings)
    groups = pool_map(partial(_apply, settings=settings), CHECKS, jobs)
    return [r for group in groups for r in group]


def _apply(fn, settings):
    return fn(settings)


def render_report(results, config: RunConfig):
    n_fail = sum(r.status == FAIL for r in results)
    n_pass = sum(r.status == PASS for r in results)
    n_info = sum(r.status == INFO for r in results)
    lines = [f"# validate  config-sha256: {config.digest()}",
             f"# seed={config['validate.seed']} draws={config['validate.draws']}"]
    lines += [r.line() for r in results]
    lines.append(f"summary: {n_pass} passed, {n_fail} failed, {n_info} info")
    return "\n".join(lines) + "\n"
