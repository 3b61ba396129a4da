"""Acceptance criteria, one printed PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest
from scipy.linalg import expm

from qhe_spectro import bath, engine as E, response as R
from qhe_spectro.lindblad import build_generator, evolve
from qhe_spectro.params import DensityState, fig2_params

RESULTS = {}
_TRAJECTORIES = {}


def record(number, checks, elapsed, limit):
    """``checks`` is a list of (label, value, ok). Runtime is part of the criterion."""
    ok = all(c[2] for c in checks) and elapsed < limit
    detail = "; ".join(f"{label}={value:.3e}{'' if good else ' (X)'}"
                       for label, value, good in checks)
    line = (f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}  "
            f"[{elapsed:.2f} s, limit {limit:g} s]")
    RESULTS[str(number)] = line
    print(line)
    return ok


def full_run(name, t):
    """Full four-level integration at the published pumping parameters, cached by name."""
    if name not in _TRAJECTORIES:
        grid = t if t[0] == 0 else np.concatenate([[0.0], t])
        _TRAJECTORIES[name] = evolve(build_generator(fig2_params()), DensityState.pure("g"), grid)
    return _TRAJECTORIES[name]


def criterion_1():
    start = time.perf_counter()
    p = fig2_params()
    horizon = bath.validity_horizon(p)
    t = np.geomspace(horizon * 1e-6, horizon * (1 - 1e-3), 400)
    matched = bath.match_bath_timedep(t, p)
    th = bath.thermal_populations(t, matched.n_h, matched.Gamma_h)
    err = float(np.max(np.abs(bath.coherent_populations(t, p).rho_11 - th.rho_11)))
    elapsed = time.perf_counter() - start
    full_run("log", t)  # integration reused by criterion 9, outside the timed section
    return record(1, [("max|rho11_c - rho11_th|", err, err < 1e-12)], elapsed, 1.0)


def criterion_2():
    start = time.perf_counter()
    p = fig2_params()
    t = np.linspace(0.0, 8 / bath.gamma_tilde(p), 8001)
    fixed = bath.match_bath_fixed(p)
    coherent = bath.coherent_populations(t, p)
    th = bath.thermal_populations(t, fixed.n_h, fixed.Gamma_h)
    err = float(max(np.max(np.abs(coherent.rho_11 - th.rho_11)),
                    np.max(np.abs(coherent.rho_gg - th.rho_gg))))
    elapsed = time.perf_counter() - start
    return record(2, [("max|rho_c - rho_th(fixed)|", err, 0.05 <= err <= 0.11)], elapsed, 1.0)


def criterion_3():
    start = time.perf_counter()
    p = fig2_params()
    t = np.linspace(0.0, 8 / bath.gamma_tilde(p), 400)
    traj = full_run("linear", t)
    _, gg, p11, p22 = bath.pumped_three_level(t, p, "exact")
    errs = {
        "gg": np.max(np.abs(traj.component("gg") - gg)),
        "11": np.max(np.abs(traj.component("11") - p11)),
        "22": np.max(np.abs(traj.component("22") - p22)),
    }
    pair = traj.component("gg") + traj.component("11")
    eq3 = np.max(np.abs(traj.component("11") / pair - bath.coherent_populations(t, p, "exact").rho_11))
    elapsed = time.perf_counter() - start
    checks = [(f"max|rho{k}_full - closed|", float(v), v < 1e-3) for k, v in errs.items()]
    checks.append(("max|pair-normalised rho11 - reduced|", float(eq3), eq3 < 1e-3))
    return record(3, checks, elapsed, 30.0)


def _invariant_grid():
    for tau in np.linspace(0.1, 0.9, 20):
        for cp in np.linspace(1.5, 10, 20):
            for lp in np.geomspace(0.1, 10, 5):
                if abs(lp - tau) >= 0.05:
                    yield E.DimensionlessPoint(tau, cp, lp)


def criterion_4():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_c7 = 0.0
    for _ in range(200):
        gh, gc = 10 ** rng.uniform(-3, -1, size=2)
        nh, nc = 10 ** rng.uniform(11, 13, size=2)
        lam = math.sqrt(gh * gc * nh * nc) * 10 ** rng.uniform(-1, 1)
        oc = rng.uniform(0.05, 0.2)
        oh = oc * (1 + rng.uniform(0.1, 3))
        *_, rho_01 = E.three_level_steady_state(lam, gh, gc, nh, nc)
        P, _ = E.work_and_heat(lam, rho_01, oc, oh)
        closed = E.power_closed_form(lam, gh, gc, nh, nc, oc, oh)
        worst_c7 = max(worst_c7, abs(-P / closed - 1))
    worst_p = worst_eta = 0.0
    for point in _invariant_grid():
        _, p_num, eta_num = E.numerical_maximum(point, E.dimensionless_power)
        worst_p = max(worst_p, abs(E.pmax_q(point) / p_num - 1))
        worst_eta = max(worst_eta, abs(E.eta_star(point) / eta_num - 1))
    elapsed = time.perf_counter() - start
    return record(4, [
        ("high-T power vs steady state (rel)", worst_c7, worst_c7 < 1e-10),
        ("closed-form max power vs grid (rel)", worst_p, worst_p < 1e-6),
        ("closed-form efficiency at max vs grid (rel)", worst_eta, worst_eta < 1e-6),
    ], elapsed, 10.0)


def criterion_5():
    start = time.perf_counter()
    b = E.region_boundaries(0.5)
    expected = (2.0, 8 / 3, 2 * math.sqrt(2), 3.0, 4.0)
    err_b = max(abs(x - y) for x, y in zip(b, expected))
    info = E.classify_region(0.5, 2 * math.sqrt(2))
    err_ca = abs(info.boundary_efficiencies[2] - (1 - math.sqrt(0.5)))
    elapsed = time.perf_counter() - start
    return record(5, [
        ("boundaries", err_b, err_b < 1e-12),
        ("II/III efficiency - eta_CA", err_ca, err_ca < 1e-12 and info.label == "II/III"),
    ], elapsed, 1.0)


def criterion_6():
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50):
        g2, gc = 10 ** rng.uniform(-3, 0, size=2)
        n2, nc = 10 ** rng.uniform(-2, 3, size=2)
        t = 10 ** rng.uniform(-2, 3)
        k_ph, k_c = R.transport_matrices(g2, n2, gc, nc)
        ref = (expm(-k_c * t)[0, 1], expm(-k_ph * t)[0, 1])
        closed = R.population_greens(t, g2, n2, gc, nc)
        worst = max(worst, *(abs(a - b) for a, b in zip(closed, ref)))
    elapsed = time.perf_counter() - start
    return record(6, [("max|closed - expm|", worst, worst < 1e-10)], elapsed, 1.0)


def criterion_7():
    start = time.perf_counter()
    worst_grid = worst_opt = 0.0
    for tau in np.linspace(0.1, 0.9, 10):
        for cp in np.linspace(1.5, 20, 10):
            for gc in np.geomspace(0.1, 20, 5):
                point = E.DimensionlessPoint(tau, cp, 1.0, gamma_c=gc)
                _, p_num = R.spectro_numerical_maximum(point)
                worst_grid = max(worst_grid, abs(R.pmax_s(point) / p_num - 1))
            opt = E.DimensionlessPoint(tau, cp, 1.0, gamma_c=(cp - 1) / 2)
            worst_opt = max(worst_opt, abs(R.pmax_s(opt) / R.pmax_s_optimal(opt) - 1))
    elapsed = time.perf_counter() - start
    return record(7, [
        ("closed-form max signal vs grid (rel)", worst_grid, worst_grid < 1e-6),
        ("max signal at optimal gamma_c vs closed form (rel)", worst_opt, worst_opt < 1e-12),
    ], elapsed, 5.0)


def criterion_8():
    start = time.perf_counter()
    errs = []
    for tau in (0.25, 0.5, 0.75, 0.9):
        at_diff = R.compare_engines(E.DimensionlessPoint(tau, 1 + 16 * tau ** 2 / 3, 1.0))
        errs += [abs(at_diff.P_Q_star - 32 / 9), abs(at_diff.ratio - 2)]
        at_cross = R.compare_engines(E.DimensionlessPoint(tau, 1 + 32 * tau ** 2 / 3, 1.0))
        errs.append(abs(at_cross.P_Q_star - at_cross.P_s_star))
    err = max(errs)
    elapsed = time.perf_counter() - start
    return record(8, [("max headline deviation", err, err < 1e-12)], elapsed, 1.0)


def criterion_9():
    start = time.perf_counter()
    p = fig2_params()
    horizon = bath.validity_horizon(p)
    runs = [full_run("log", np.geomspace(horizon * 1e-6, horizon * (1 - 1e-3), 400)),
            full_run("linear", np.linspace(0.0, 8 / bath.gamma_tilde(p), 400))]
    drift = max(r.trace_drift for r in runs)
    herm = max(r.hermiticity_error for r in runs)
    floor = min(r.min_eigenvalue() for r in runs)
    elapsed = time.perf_counter() - start
    return record(9, [
        ("trace drift", drift, drift < 1e-8),
        ("hermiticity error", herm, herm < 1e-10),
        ("min eigenvalue", floor, floor > -1e-7),
    ], elapsed, 30.0)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_acceptance(criterion):
    assert criterion(), RESULTS[criterion.__name__.split("_")[1]]


if __name__ == "__main__":
    outcomes = [c() for c in CRITERIA]
    print(f"{sum(outcomes)}/{len(outcomes)} criteria pass")
