import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from qhe_spectro import bath
from qhe_spectro.errors import DegenerateSteadyState, StiffnessFailure
from qhe_spectro.lindblad import (
    PositivityWarning, build_generator, evolve, steady_state, subsystem,
)
from qhe_spectro.params import COMPONENTS, DensityState, fig2_params
from qhe_spectro.units import HBAR_EV_PS

DRIVEN = dict(Omega_p=5e-4, Gamma_2=0.5, n_2=5.0, Gamma_c=0.3, lam=2e-4)


def random_state(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    idx = {"g": 0, "0": 1, "1": 2, "2": 3}
    vals = {f"rho_{c}": rho[idx[c[0]], idx[c[1]]] for c in COMPONENTS}
    for c in ("gg", "00", "11", "22"):
        vals[f"rho_{c}"] = vals[f"rho_{c}"].real
    return DensityState(**vals)


def test_fig2_entries_by_hand(fig2):
    M = build_generator(fig2).matrix
    i = COMPONENTS.index
    om = 1e-4 / HBAR_EV_PS
    n2 = fig2.n_2
    assert M[i("11"), i("22")] == pytest.approx(0.025 * (n2 + 1))
    assert M[i("11"), i("11")] == pytest.approx(-0.025 * n2)
    assert M[i("g2"), i("gg")] == pytest.approx(1j * om)
    assert M[i("g2"), i("g2")] == pytest.approx(-0.025 * (n2 + 1) / 2)
    assert M[i("00"), i("00")] == 0  # cold bath off in the pumping stage


def test_factor_conventions():
    p = fig2_params(Gamma_c=0.2, n_2=50.0)
    M = build_generator(p).matrix
    i = COMPONENTS.index
    assert M[i("00"), i("00")] == pytest.approx(-2 * 0.2 * (p.n_c + 1))
    assert M[i("01"), i("01")] == pytest.approx(-(p.Gamma_2 * p.n_2 / 2 + 0.2 * (p.n_c + 1)))
    assert M[i("2g"), i("2g")] == pytest.approx(-(p.Gamma_2 * (p.n_2 + 1) / 2 + 0.2 * p.n_c))


def test_undriven_blocks_conserve_probability():
    M = build_generator(fig2_params(Gamma_c=0.1, n_2=20.0, Omega_p=0.0)).matrix
    pops = M[:4, :4]
    assert np.allclose(pops.sum(axis=0), 0, atol=1e-14)
    assert np.all(M[:4, 4:] == 0) and np.all(M[4:, :4] == 0)


def test_trace_rate_vanishes_on_random_states():
    g = build_generator(fig2_params(**DRIVEN))
    rng = np.random.default_rng(0)
    worst = max(abs(g.trace_functional() @ (g @ random_state(rng).to_vector()))
                for _ in range(100))
    assert worst < 1e-12


def test_detuning_enters_coherences():
    p = fig2_params(**DRIVEN)
    M = build_generator(p, detuning_pump=1e-3).matrix
    i = COMPONENTS.index
    assert M[i("g2"), i("g2")].imag == pytest.approx(1e-3 / HBAR_EV_PS)


def test_cold_detailed_balance_by_evolution():
    p = fig2_params(Gamma_c=0.2, n_2=20.0, Omega_p=0.0)
    t = np.array([0.0, 200.0])
    traj = evolve(build_generator(p), DensityState.pure("g"), t)
    ratio = traj.component("00")[-1] / traj.component("gg")[-1]
    assert ratio == pytest.approx(p.n_c / (p.n_c + 1), rel=1e-8)


def test_undriven_steady_state_is_degenerate():
    with pytest.raises(DegenerateSteadyState):
        steady_state(build_generator(fig2_params(Gamma_c=0.2, n_2=20.0, Omega_p=0.0)))


def test_fig2_long_time_half_half(fig2):
    gt = bath.gamma_tilde(fig2)
    traj = evolve(build_generator(fig2), DensityState.pure("g"), np.array([0.0, 20 / gt]))
    pair = traj.component("gg")[-1] + traj.component("11")[-1]
    assert traj.component("gg")[-1] / pair == pytest.approx(0.5, abs=1 / (2 * fig2.n_2 + 1))
    assert traj.component("11")[-1] / pair == pytest.approx(0.5, abs=1 / (2 * fig2.n_2 + 1))


def test_steady_state_matches_long_time_evolution():
    p = fig2_params(**DRIVEN)
    g = build_generator(p)
    rates = [p.Gamma_2, p.Gamma_c]
    t_end = 50 / min(rates)
    traj = evolve(g, DensityState.pure("g"), np.array([0.0, t_end]))
    assert np.max(np.abs(traj.states[-1] - steady_state(g).to_vector())) < 1e-6


def test_reduced_pumped_steady_state(fig2):
    g = subsystem(build_generator(fig2), ("gg", "11", "22", "g2", "2g"))
    ss = steady_state(g)
    expected = bath.pumped_steady_state(fig2.n_2)
    assert (ss["gg"], ss["11"], ss["22"]) == pytest.approx(expected, abs=1e-10)
    assert ss["00"] == 0


def test_subsystem_refuses_coupled_split():
    g = build_generator(fig2_params(**DRIVEN))
    with pytest.raises(ValueError):
        subsystem(g, ("gg", "11", "22"))


def test_evolve_rejects_bad_grid(fig2):
    g = build_generator(fig2)
    with pytest.raises(ValueError):
        evolve(g, DensityState.pure("g"), [1.0, 2.0])
    with pytest.raises(ValueError):
        evolve(g, DensityState.pure("g"), [0.0, 2.0, 1.0])


def test_stiffness_failure_carries_time(fig2):
    g = build_generator(fig2)
    with pytest.raises(StiffnessFailure) as info:
        evolve(g, DensityState.pure("g"), [0.0, 1e3], max_steps=10)
    assert 0 < info.value.time < 1e3


def test_positivity_warning_on_unphysical_generator():
    g = build_generator(fig2_params(**DRIVEN))
    flipped = type(g)(-g.matrix)  # time-reversed dynamics leave the state space
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        evolve(flipped, DensityState.pure("g"), [0.0, 5.0])
    assert any(issubclass(w.category, PositivityWarning) for w in caught)


def test_conservation_on_driven_run():
    g = build_generator(fig2_params(**DRIVEN))
    traj = evolve(g, DensityState.pure("g"), np.linspace(0, 100, 101))
    assert traj.trace_drift < 1e-8
    assert traj.hermiticity_error < 1e-10
    assert traj.max_imag_population < 1e-12
    assert traj.min_eigenvalue() > -1e-7


def test_matches_matrix_exponential():
    g = build_generator(fig2_params(**DRIVEN))
    t = np.linspace(0, 40, 9)
    traj = evolve(g, DensityState.pure("2"), t, rel_tol=1e-11, abs_tol=1e-14)
    y0 = DensityState.pure("2").to_vector()
    exact = np.array([expm(g.matrix * ti) @ y0 for ti in t])
    assert np.max(np.abs(traj.states - exact)) < 1e-9


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0, 1), seed=st.integers(0, 2**16))
def test_linearity(a, seed):
    rng = np.random.default_rng(seed)
    g = build_generator(fig2_params(**DRIVEN))
    s1, s2 = random_state(rng), random_state(rng)
    mix = DensityState.from_vector(a * s1.to_vector() + (1 - a) * s2.to_vector())
    t = np.linspace(0, 10, 3)
    kw = dict(rel_tol=1e-11, abs_tol=1e-14, check_positivity=False)
    lhs = evolve(g, mix, t, **kw).states
    rhs = a * evolve(g, s1, t, **kw).states + (1 - a) * evolve(g, s2, t, **kw).states
    assert np.max(np.abs(lhs - rhs)) < 1e-9
