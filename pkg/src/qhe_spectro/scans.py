"""Figure data, parameter scans, engine comparison and the oracle suite.

Every grid runner evaluates rows independently through :func:`pool_map`
and emits them in row-major grid order (first axis slowest), whatever the
number of workers.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import bath, engine, response
from .config import RunConfig
from .errors import BeyondHorizon, InvalidParams, SingularCoupling
from .kernels import BACKEND
from .lindblad import build_generator, evolve
from .output import FLAG_COLUMN, ScanResult, finite_row
from .params import DensityState


def pool_map(fn, items, jobs=1):
    """``list(map(fn, items))``, optionally spread over ``jobs`` processes."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * jobs))
    ctx = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def grid_points(axes):
    """Row-major product of the axis values."""
    return list(itertools.product(*(a.values().tolist() for a in axes)))


# --- effective bath figure ----------------------------------------------------------------

FIG2_COLUMNS = [
    "t", "rho_gg_c", "rho_11_c",
    "rho_gg_th_t", "rho_11_th_t", "rho_gg_th_fixed", "rho_11_th_fixed",
    "rho_gg_full", "rho_11_full", "rho_22_full", "rho_00_full",
    "rho_gg_closed", "rho_11_closed", "rho_22_closed",
    "diff_c_th_t", "diff_c_th_fixed", "diff_full_closed",
    "n_h_t", "n_h_fixed", FLAG_COLUMN,
]


def fig2_data(params, t, rel_tol=1e-9, abs_tol=1e-12):
    """Coherent, matched-thermal, integrated and closed-form populations on ``t``.

    Returns ``(columns dict, trajectory, fixed bath)``. Entries of the
    time-dependent match beyond its validity horizon are NaN.
    """
    t = np.asarray(t, dtype=float)
    coherent = bath.coherent_populations(t, params, "high_T")
    fixed = bath.match_bath_fixed(params)
    th_fixed = bath.thermal_populations(t, fixed.n_h, fixed.Gamma_h)

    inside = t < fixed.validity_horizon
    n_h_t = np.full(t.shape, np.nan)
    rho_11_t = np.full(t.shape, np.nan)
    try:
        matched = bath.match_bath_timedep(t[inside], params)
    except BeyondHorizon:
        # float rounding right at the horizon; drop the offending tail point
        inside &= t < fixed.validity_horizon * (1 - 1e-12)
        matched = bath.match_bath_timedep(t[inside], params)
    n_h_t[inside] = matched.n_h
    rho_11_t[inside] = bath.thermal_populations(t[inside], matched.n_h, matched.Gamma_h).rho_11

    grid = t if t[0] == 0.0 else np.concatenate([[0.0], t])
    traj = evolve(build_generator(params), DensityState.pure("g"), grid, rel_tol, abs_tol)
    sl = slice(grid.size - t.size, None)
    full = {c: traj.component(c)[sl] for c in ("gg", "11", "22", "00")}
    _, cl_gg, cl_11, cl_22 = bath.pumped_three_level(t, params, "exact")

    cols = {
        "t": t,
        "rho_gg_c": coherent.rho_gg, "rho_11_c": coherent.rho_11,
        "rho_gg_th_t": 1 - rho_11_t, "rho_11_th_t": rho_11_t,
        "rho_gg_th_fixed": th_fixed.rho_gg, "rho_11_th_fixed": th_fixed.rho_11,
        "rho_gg_full": full["gg"], "rho_11_full": full["11"],
        "rho_22_full": full["22"], "rho_00_full": full["00"],
        "rho_gg_closed": cl_gg, "rho_11_closed": cl_11, "rho_22_closed": cl_22,
        "diff_c_th_t": np.abs(coherent.rho_11 - rho_11_t),
        "diff_c_th_fixed": np.abs(coherent.rho_11 - th_fixed.rho_11),
        "diff_full_closed": np.max(np.abs([full["gg"] - cl_gg, full["11"] - cl_11,
                                           full["22"] - cl_22]), axis=0),
        "n_h_t": n_h_t,
        "n_h_fixed": np.full(t.shape, fixed.n_h),
    }
    return cols, traj, fixed


def run_fig2(config: RunConfig, jobs=1) -> ScanResult:
    params = config.model_params()
    horizon_rate = bath.gamma_tilde(params, "exact")
    t = config.axis("t", (0.0, 8 / horizon_rate, 400, "linear")).values()
    cols, traj, fixed = fig2_data(params, t, config["tolerances.ode_rel"],
                                  config["tolerances.ode_abs"])
    result = ScanResult(FIG2_COLUMNS)
    for i in range(t.size):
        values = {k: float(v[i]) for k, v in cols.items()}
        beyond = math.isnan(values["n_h_t"])
        for k in ("rho_gg_th_t", "rho_11_th_t", "diff_c_th_t", "n_h_t"):
            if beyond:
                values[k] = None
        result.rows.append(finite_row(values, FIG2_COLUMNS, ["beyond-horizon" if beyond else ""]))
    result.metadata.update({
        "mode": "fig2",
        "gamma_tilde_per_ps": f"{horizon_rate!r}",
        "validity_horizon_ps": f"{fixed.validity_horizon!r}",
        "t_star_ps": f"{fixed.t_star!r}",
        "backend": BACKEND,
        "trace_drift": f"{traj.trace_drift:.3e}",
        "hermiticity_error": f"{traj.hermiticity_error:.3e}",
        "min_eigenvalue": f"{traj.min_eigenvalue():.3e}",
    })
    return result


# --- efficiency-bound map -----------------------------------------------------------------

FIG3_COLUMNS = [
    "eta_C", "c_p", "tau", "eta_star_sc", "eta_table", "region",
    "b_onset", "b_I_II", "b_II_III", "b_III_IV", "b_carnot",
    "eta_CA", "sc_exceeds_carnot", FLAG_COLUMN,
]


def fig3_row(coords):
    eta_C, c_p = coords
    tau = 1 - eta_C
    try:
        info = engine.classify_region(eta_C, c_p)
        eta_sc = engine.eta_star_sc(engine.DimensionlessPoint(tau, c_p, 0.0))
    except InvalidParams as exc:
        return finite_row({"eta_C": eta_C, "c_p": c_p, "tau": tau}, FIG3_COLUMNS,
                          [f"invalid:{exc}"])
    values = {
        "eta_C": eta_C, "c_p": c_p, "tau": tau, "eta_star_sc": eta_sc,
        "eta_table": info.eta_table, "region": info.label,
        **dict(zip(("b_onset", "b_I_II", "b_II_III", "b_III_IV", "b_carnot"), info.boundaries)),
        "eta_CA": 1 - math.sqrt(tau), "sc_exceeds_carnot": eta_sc > eta_C,
    }
    return finite_row(values, FIG3_COLUMNS)


def run_fig3(config: RunConfig, jobs=1) -> ScanResult:
    axes = [config.axis("eta_C", (0.02, 0.98, 49, "linear")),
            config.axis("c_p", (1.1, 10.0, 90, "linear"))]
    rows = pool_map(fig3_row, grid_points(axes), jobs)
    return ScanResult(FIG3_COLUMNS, rows, {"mode": "fig3"})


# --- engine performance scan --------------------------------------------------------------

SCAN_COLUMNS = [
    "tau", "c_p", "lambda_prime", "eta_C", "P_max", "eta_star", "eta_star_limit",
    "eta_star_sc", "P_max_numeric", "eta_numeric", "P_nominal_numeric",
    "eta_nominal_numeric", "region", FLAG_COLUMN,
]


def scan_row(coords):
    tau, c_p, lp = coords
    base = {"tau": tau, "c_p": c_p, "lambda_prime": lp}
    try:
        point = engine.DimensionlessPoint(tau, c_p, lp)
    except InvalidParams as exc:
        return finite_row(base, SCAN_COLUMNS, [f"invalid:{exc}"])
    flags = []
    values = dict(base, eta_C=point.eta_C, eta_star_sc=engine.eta_star_sc(point),
                  eta_star_limit=engine.eta_star_limit(point),
                  region=engine.classify_region(point.eta_C, c_p).label)
    try:
        values["P_max"] = engine.pmax_q(point)
        values["eta_star"] = engine.eta_star(point)
    except SingularCoupling:
        flags.append("singular-coupling")
    _, values["P_max_numeric"], values["eta_numeric"] = engine.numerical_maximum(
        point, engine.dimensionless_power_linear)
    _, values["P_nominal_numeric"], values["eta_nominal_numeric"] = engine.numerical_maximum(
        point, engine.dimensionless_power)
    return finite_row(values, SCAN_COLUMNS, flags)


def run_scan(config: RunConfig, jobs=1) -> ScanResult:
    axes = [config.axis(n) for n in ("tau", "c_p", "lambda_prime")]
    rows = pool_map(scan_row, grid_points(axes), jobs)
    return ScanResult(SCAN_COLUMNS, rows, {"mode": "scan", "power_unit": "Gamma_c*omega_c"})


# --- engine vs spectroscopic signal -------------------------------------------------------

COMPARE_COLUMNS = [
    "tau", "c_p_prime", "lambda_prime", "gamma_c",
    "P_Q", "P_Q_weak", "P_s", "P_s_large_gamma", "P_Q_star", "P_s_star", "ratio", "difference",
    "gamma_c_equivalence", "gamma_c_star", "c_p_prime_crossing", "c_p_prime_max_difference",
    "at_crossing", "at_max_difference", "at_gamma_c_star", "weak_coupling", "singular",
    "Omega_p_star_eV", "Omega_p_star_star_eV", FLAG_COLUMN,
]


def _near(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(b))


def compare_row(coords, rabi=(math.nan, math.nan)):
    tau, cpp, lp, gc = coords
    base = {"tau": tau, "c_p_prime": cpp, "lambda_prime": lp, "gamma_c": gc}
    try:
        point = engine.DimensionlessPoint(tau, cpp + 1, lp, gamma_c=gc)
    except InvalidParams as exc:
        return finite_row(base, COMPARE_COLUMNS, [f"invalid:{exc}"])
    cmp = response.compare_engines(point)
    values = dict(
        base, P_Q=cmp.P_Q, P_Q_weak=cmp.P_Q_weak, P_s=cmp.P_s,
        P_s_large_gamma=response.pmax_s_large_gamma(point),
        P_Q_star=cmp.P_Q_star, P_s_star=cmp.P_s_star, ratio=cmp.ratio, difference=cmp.difference,
        gamma_c_equivalence=cmp.gamma_c_equivalence, gamma_c_star=cmp.gamma_c_star,
        c_p_prime_crossing=cmp.c_p_prime_crossing,
        c_p_prime_max_difference=cmp.c_p_prime_max_difference,
        at_crossing=_near(cpp, cmp.c_p_prime_crossing),
        at_max_difference=_near(cpp, cmp.c_p_prime_max_difference),
        at_gamma_c_star=_near(gc, cmp.gamma_c_star),
        weak_coupling=cmp.weak_coupling, singular=cmp.singular,
        Omega_p_star_eV=rabi[0], Omega_p_star_star_eV=rabi[1],
    )
    if cmp.singular:
        values["P_Q"] = None
    return finite_row(values, COMPARE_COLUMNS, ["singular-coupling" if cmp.singular else ""])


def run_compare(config: RunConfig, jobs=1) -> ScanResult:
    params = config.model_params()
    rabi = response.crossing_rabi(params)
    axes = [config.axis(n) for n in ("tau", "c_p_prime", "lambda_prime", "gamma_c")]
    rows = pool_map(partial(compare_row, rabi=rabi), grid_points(axes), jobs)
    meta = {"mode": "compare", "power_unit": "P0_Q = P0_s = 1"}
    return ScanResult(COMPARE_COLUMNS, rows, meta)


RUNNERS = {"fig2": run_fig2, "fig3": run_fig3, "scan": run_scan, "compare": run_compare}


def svg_series(result: ScanResult, mode):
    """``(x, series, xlabel, ylabel)`` for the default plot of ``mode``."""
    if mode == "fig2":
        names = ("rho_11_c", "rho_11_th_t", "rho_11_th_fixed", "rho_11_full")
        return result.column("t"), {n: result.column(n) for n in names}, "t (ps)", "population"
    if mode == "fig3":
        eta = result.column("eta_C")
        c_p = result.column("c_p")
        eta_sc = result.column("eta_star_sc")
        picks = np.unique(eta)
        picks = picks[np.linspace(0, picks.size - 1, min(6, picks.size)).astype(int)]
        x = np.unique(c_p)
        series = {}
        for e in picks:
            m = eta == e
            series[f"eta_C={e:.3g}"] = np.interp(x, c_p[m], eta_sc[m])
        return x, series, "c_p", "efficiency at maximum power"
    if mode == "scan":
        return (np.arange(len(result.rows)), {"P_max": result.column("P_max")},
                "row", "power / (Gamma_c omega_c)")
    if mode == "compare":
        return (np.arange(len(result.rows)),
                {"P_Q_star": result.column("P_Q_star"), "P_s_star": result.column("P_s_star")},
                "row", "maximum power")
    raise ValueError(mode)

