import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qhe_spectro import bath
from qhe_spectro.errors import BeyondHorizon, LowTemperatureRegime, OscillatoryRegime
from qhe_spectro.lindblad import build_generator, evolve, subsystem
from qhe_spectro.params import DensityState, fig2_params


def test_zero_drive_gives_zero_rate():
    p = fig2_params(Omega_p=0.0)
    assert bath.gamma_tilde(p, "exact") == 0.0
    assert bath.gamma_tilde(p, "high_T") == 0.0


def test_branches_differ_by_leading_correction(fig2):
    exact, high = bath.gamma_tilde(fig2, "exact"), bath.gamma_tilde(fig2, "high_T")
    a = fig2.Gamma_2 * (fig2.n_2 + 1) / 4
    correction = fig2.pump_rate ** 2 / (2 * a * a)
    assert exact / high - 1 == pytest.approx(correction, rel=1e-3)
    assert exact > high > 0


def test_oscillatory_regime():
    p = fig2_params(Omega_p=0.1)
    with pytest.raises(OscillatoryRegime):
        bath.gamma_tilde(p, "exact")
    with pytest.raises(OscillatoryRegime):
        bath.pumped_three_level(1.0, p)


def test_coherent_endpoints(fig2):
    r = bath.coherent_populations([0.0, 1e9], fig2)
    assert (r.rho_gg[0], r.rho_11[0]) == (1.0, 0.0)
    assert abs(r.rho_11[1] - 0.5) <= 1 / (2 * fig2.n_2 + 1)
    assert np.allclose(r.rho_gg + r.rho_11, 1.0, atol=1e-14)


def test_coherent_monotone(fig2):
    t = np.linspace(0, 5000, 500)
    assert np.all(np.diff(bath.coherent_populations(t, fig2).rho_11) >= 0)


def test_thermal_endpoints():
    r = bath.thermal_populations(np.array([0.0, 1e6]), 7.0, 0.3)
    assert r.rho_11[0] == 0.0 and r.rho_gg[0] == 1.0
    assert r.rho_11[1] == pytest.approx(7 / 15)
    with pytest.raises(ValueError):
        bath.thermal_populations(1.0, -1.0, 0.3)


def test_fixed_bath_long_time(fig2):
    fixed = bath.match_bath_fixed(fig2)
    r = bath.thermal_populations(1e9, fixed.n_h, fixed.Gamma_h)
    assert float(r.rho_11) == pytest.approx(1000 / 2001, rel=1e-12)


def test_fixed_bath_values(fig2):
    fixed = bath.match_bath_fixed(fig2)
    assert fixed.n_h == pytest.approx(1000.0)
    assert fixed.Gamma_h == pytest.approx(2 * fig2.pump_rate ** 2 / (0.025 * 1e6), rel=1e-10)
    assert fixed.t_star == pytest.approx(math.log(500) / bath.gamma_tilde(fig2, "high_T"))


def test_fixed_bath_temperature_guard():
    with pytest.raises(LowTemperatureRegime):
        bath.match_bath_fixed(fig2_params(n_2=10.0))
    with pytest.warns(RuntimeWarning):
        bath.match_bath_fixed(fig2_params(n_2=50.0))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bath.match_bath_fixed(fig2_params(n_2=500.0))


def test_timedep_small_time_and_horizon(fig2):
    m = bath.match_bath_timedep(1e-9, fig2)
    assert float(m.n_h) == pytest.approx(1001 / 999, rel=1e-6)
    horizon = bath.validity_horizon(fig2)
    assert horizon == pytest.approx(math.log(1000) / bath.gamma_tilde(fig2, "high_T"))
    with pytest.raises(BeyondHorizon):
        bath.match_bath_timedep(horizon * 1.001, fig2)


def test_timedep_at_fixed_time_is_n2_plus_small(fig2):
    t_star = bath.match_bath_fixed(fig2).t_star
    n_h = float(bath.match_bath_timedep(t_star, fig2).n_h)
    assert n_h == pytest.approx(fig2.n_2, rel=2 / fig2.n_2)


def test_timedep_occupation_monotone(fig2):
    t = np.linspace(1.0, bath.validity_horizon(fig2) * 0.999, 300)
    assert np.all(np.diff(bath.match_bath_timedep(t, fig2).n_h) > 0)


@settings(max_examples=60, deadline=None)
@given(frac=st.floats(1e-6, 0.999), n2=st.floats(20, 1e5), om=st.floats(1e-5, 5e-4))
def test_exact_match_identity(frac, n2, om):
    p = fig2_params(n_2=n2, Omega_p=om)
    t = frac * bath.validity_horizon(p)
    m = bath.match_bath_timedep(t, p)
    th = bath.thermal_populations(t, m.n_h, m.Gamma_h)
    assert abs(float(th.rho_11) - float(bath.coherent_populations(t, p).rho_11)) < 1e-12


def test_fixed_match_error_and_endpoints(fig2):
    t = np.linspace(0, 8 / bath.gamma_tilde(fig2), 400)
    fixed = bath.match_bath_fixed(fig2)
    diff = np.abs(bath.coherent_populations(t, fig2).rho_11
                  - bath.thermal_populations(t, fixed.n_h, fixed.Gamma_h).rho_11)
    assert 0.05 <= diff.max() <= 0.11
    assert diff[0] == 0.0
    late = bath.coherent_populations(1e8, fig2).rho_11 - bath.thermal_populations(
        1e8, fixed.n_h, fixed.Gamma_h).rho_11
    assert abs(float(late)) < 1e-3


def test_closed_forms_initial_and_final(fig2):
    g2, gg, p11, p22 = bath.pumped_three_level(np.array([0.0, 1e8]), fig2)
    assert g2[0] == 0 and gg[0] == 1 and p11[0] == 0 and p22[0] == 0
    assert (gg[1], p11[1], p22[1]) == pytest.approx(bath.pumped_steady_state(fig2.n_2), rel=1e-12)
    t = np.linspace(0, 3000, 50)
    _, gg, p11, p22 = bath.pumped_three_level(t, fig2, "high_T")
    assert np.allclose(gg + p11 + p22, 1.0, atol=1e-14)


def test_closed_form_coherence_is_positive_imaginary(fig2):
    g2, *_ = bath.pumped_three_level(np.linspace(1, 100, 20), fig2)
    assert np.all(g2.real == 0) and np.all(g2.imag > 0)


def test_reductions_consistent():
    for n2 in (3.0, 1000.0):
        gg, p11, _ = bath.pumped_steady_state(n2)
        pair = bath.pumped_pair_steady_state(n2)
        assert (gg / (gg + p11), p11 / (gg + p11)) == pytest.approx(pair, rel=1e-15)


def test_full_model_relaxes_at_one_and_a_half_gamma_tilde(fig2):
    # the closed forms relax at gamma_tilde; the full pumped subsystem's slow mode
    # relaxes at gamma_tilde (3 n_2 + 1) / (2 n_2 + 1)
    g = subsystem(build_generator(fig2), ("gg", "11", "22", "g2", "2g"))
    rates = np.sort(np.abs(np.linalg.eigvals(g.matrix).real))
    slow = rates[1] / bath.gamma_tilde(fig2, "high_T")
    assert slow == pytest.approx((3 * fig2.n_2 + 1) / (2 * fig2.n_2 + 1), rel=2e-3)


def test_full_model_long_time_pair_matches_thermal(fig2):
    gt = bath.gamma_tilde(fig2)
    traj = evolve(build_generator(fig2), DensityState.pure("g"), np.array([0.0, 30 / gt]))
    gg, p11 = traj.component("gg")[-1], traj.component("11")[-1]
    assert p11 / (gg + p11) == pytest.approx(bath.pumped_pair_steady_state(fig2.n_2)[1], abs=1e-9)
