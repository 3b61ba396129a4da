"""Perturbative pump-probe signal and its maximum over the vibrational gap.

The signal is second order in the pump and second order in the probe. It
is assembled from coherence and population Green's functions for
narrowband fields tuned to the g-2 and 1-0 transitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import DimensionlessPoint, pmax_q, pmax_q_weak
from .errors import InvalidParams, ResonanceRequired, SingularCoupling
from .optimize import grid_maximize
from .params import ModelParams
from .units import HBAR_EV_PS, ev_to_rate

RESONANCE_TOL_EV = 1e-9


# --- Green's functions ------------------------------------------------------------------

def coherence_widths(params: ModelParams):
    """Dephasing rates (ps^-1) of the 1-0 and 2-g coherences."""
    g2, gc, n2, nc = params.Gamma_2, params.Gamma_c, params.n_2, params.n_c
    return (gc * (nc + 1) + g2 * n2) / 2, (gc * nc + g2 * (n2 + 1)) / 2


def coherence_greens(omega, omega_0, width):
    """Frequency-domain propagator ``-1 / (i(omega - omega_0) - width)``.

    ``omega`` and ``omega_0`` in eV, ``width`` in ps^-1; result in ps.
    """
    return -1 / (1j * ev_to_rate(np.asarray(omega) - omega_0) - width)


def population_greens(t, Gamma_2, n_2, Gamma_c, n_c):
    """Closed-form transfer probabilities ``(G_00,gg(t), G_11,22(t))``."""
    t = np.asarray(t, dtype=float)
    g_cold = n_c * -np.expm1(-t * (1 + 2 * n_c) * Gamma_c) / (1 + 2 * n_c)
    g_phonon = (1 + n_2) * -np.expm1(-t * (1 + 2 * n_2) * Gamma_2) / (1 + 2 * n_2)
    return g_cold, g_phonon


def transport_matrices(Gamma_2, n_2, Gamma_c, n_c):
    """Pauli transport matrices ``kappa`` with ``d(rho)/dt = -kappa @ rho``.

    Returns ``(kappa_phonon, kappa_cold)`` acting on (rho_11, rho_22) and
    (rho_00, rho_gg). Columns sum to zero.
    """
    up, down = Gamma_2 * n_2, Gamma_2 * (n_2 + 1)
    kappa_phonon = np.array([[up, -down], [-up, down]])
    up, down = Gamma_c * n_c, Gamma_c * (n_c + 1)
    kappa_cold = np.array([[down, -up], [-down, up]])
    return kappa_phonon, kappa_cold


def spectral_propagator(kappa, t):
    """``exp(-kappa t)`` from left/right eigenvectors of the transport matrix.

    G(t) = sum_n xi_R[:, n] D_nn^-1 exp(-lambda_n t) xi_L[n, :], with
    D = xi_L xi_R diagonal.
    """
    lam_r, right = np.linalg.eig(kappa)
    lam_l, left_t = np.linalg.eig(kappa.T)
    order_r, order_l = np.argsort(lam_r.real), np.argsort(lam_l.real)
    lam_r, right = lam_r[order_r], right[:, order_r]
    left = left_t[:, order_l].T
    d = np.diag(left @ right)
    return (right * (np.exp(-lam_r * t) / d)) @ left


def population_greens_spectral(t, Gamma_2, n_2, Gamma_c, n_c):
    """Same quantities as :func:`population_greens` via the eigen-decomposition."""
    kappa_phonon, kappa_cold = transport_matrices(Gamma_2, n_2, Gamma_c, n_c)
    g_phonon = spectral_propagator(kappa_phonon, t)[0, 1].real
    g_cold = spectral_propagator(kappa_cold, t)[0, 1].real
    return g_cold, g_phonon


# --- response and signal ----------------------------------------------------------------

@dataclass(frozen=True)
class SpectroInputs:
    """Pump-probe inputs.

    ``mu_2g * E_pu`` and ``mu_10 * E_pr`` are the pump and probe Rabi
    energies in eV; the ``Omega_p`` and ``lam`` fields of ``params`` are not
    used here. ``sigma_p`` is the pump bandwidth in eV.
    """

    params: ModelParams
    sigma_p: float
    E_pu: float
    E_pr: float
    mu_10: float
    mu_2g: float

    def __post_init__(self):
        if not self.sigma_p > 0:
            raise InvalidParams(f"sigma_p must be > 0, got {self.sigma_p!r}")

    @property
    def pump_rabi(self):
        return self.mu_2g * self.E_pu

    @property
    def probe_rabi(self):
        return self.mu_10 * self.E_pr


def _require_resonance(params):
    if abs(params.detuning_pump) > RESONANCE_TOL_EV or abs(params.detuning_probe) > RESONANCE_TOL_EV:
        raise ResonanceRequired("the resonant reduction needs omega_p = omega_2g and omega_pr = omega_10")


def response_functions(inputs: SpectroInputs):
    """Resonant narrowband ``(R_a, R_b, R_c)``.

    Dipoles enter squared in their own units; rates and the bandwidth in
    ps^-1, so each term carries units of dipole**4 * ps**3.
    """
    p = inputs.params
    _require_resonance(p)
    n2, nc = p.n_2, p.n_c
    width = nc * p.Gamma_c + n2 * p.Gamma_2
    sigma = ev_to_rate(inputs.sigma_p)
    dipoles = 4 * abs(inputs.mu_10) ** 2 * abs(inputs.mu_2g) ** 2 / (width ** 2 * sigma)
    r_a = dipoles * (1 + n2) / (1 + 2 * n2)
    r_c = dipoles * nc / (1 + 2 * nc)
    return r_a, r_a, r_c


def total_response(inputs: SpectroInputs):
    """Absorptive response summed over the three diagrams and their conjugates."""
    return 2 * sum(response_functions(inputs))


def _chain_response(inputs: SpectroInputs):
    # Diagram chains built directly from the Green's functions at resonance. The
    # zero-frequency population propagator is regularised by the pump bandwidth:
    # integral of G(t) exp(-sigma t) dt.
    p = inputs.params
    _require_resonance(p)
    sigma = ev_to_rate(inputs.sigma_p)
    w10, w2g = coherence_widths(p)
    g10 = coherence_greens(p.omega_10, p.omega_10, w10)
    g2g = coherence_greens(p.omega_2g, p.omega_2g, w2g)
    g_g2 = np.conj(g2g)

    def laplace(stationary, rate):
        return stationary * (1 / sigma - 1 / (sigma + rate))

    g_phonon = laplace((1 + p.n_2) / (1 + 2 * p.n_2), p.Gamma_2 * (1 + 2 * p.n_2))
    g_cold = laplace(p.n_c / (1 + 2 * p.n_c), p.Gamma_c * (1 + 2 * p.n_c))
    dip = abs(inputs.mu_10) ** 2 * abs(inputs.mu_2g) ** 2
    r_a = dip * g10 * g_phonon * g2g
    r_b = dip * g10 * g_phonon * g_g2
    r_c = dip * g10 * g_cold * g_g2
    return r_a.real, r_b.real, r_c.real


def spectro_power(inputs: SpectroInputs, mode="general"):
    """Rate of probe photon energy gain, eV/ps."""
    p = inputs.params
    pump = ev_to_rate(inputs.pump_rabi)
    probe = ev_to_rate(inputs.probe_rabi)
    if mode == "general":
        # dipoles are folded into the Rabi rates, so evaluate the response per unit dipole
        unit = SpectroInputs(p, inputs.sigma_p, 1.0, 1.0, 1.0, 1.0)
        return p.omega_10 * pump ** 2 * probe ** 2 * total_response(unit)
    if mode == "high_T":
        width = p.n_c * p.Gamma_c + p.n_2 * p.Gamma_2
        return 12 * p.omega_10 * probe ** 2 * pump ** 2 / (width ** 2 * ev_to_rate(inputs.sigma_p))
    raise ValueError(f"unknown mode {mode!r}")


# --- maximum over the vibrational gap --------------------------------------------------

def _need_gamma_c(point):
    if point.gamma_c is None:
        raise InvalidParams("the spectroscopic power needs gamma_c = Gamma_2/Gamma_c")
    return point.gamma_c


def spectro_dimensionless_power(c_21, point: DimensionlessPoint):
    """Signal in units of 6 Gamma_c^2 T_c^2 / (sigma_p omega_c), c_21 in (0, c_p - 1)."""
    gc = _need_gamma_c(point)
    c_21 = np.asarray(c_21, dtype=float)
    return (point.lambda_prime ** 2 * gc / point.tau ** 4
            * c_21 ** 2 * (point.c_p_prime - c_21) / (c_21 + gc) ** 2)


def spectro_numerical_maximum(point: DimensionlessPoint):
    """Grid + golden-section maximum of the signal over c_21; returns (c_21*, P*)."""
    return grid_maximize(lambda c: spectro_dimensionless_power(c, point), 0.0, point.c_p_prime)


def pmax_s(point: DimensionlessPoint):
    """Closed-form maximum over c_21 of the spectroscopic signal."""
    gc = _need_gamma_c(point)
    cpp = point.c_p_prime
    root = math.sqrt(gc)
    f = root - math.sqrt(8 * cpp + 9 * gc)
    return (point.lambda_prime ** 2 * gc * (f + 2 * root) ** 2 * (cpp + gc + f * root / 2)
            / (f * f * point.tau ** 4))


def pmax_s_large_gamma(point: DimensionlessPoint):
    """Leading behaviour of :func:`pmax_s` for gamma_c >> c_p - 1."""
    gc = _need_gamma_c(point)
    return 4 * point.lambda_prime ** 2 * point.c_p_prime ** 3 / (27 * gc * point.tau ** 4)


def pmax_s_optimal(point: DimensionlessPoint):
    """:func:`pmax_s` at its optimum over gamma_c."""
    return point.lambda_prime ** 2 * point.c_p_prime ** 2 / (16 * point.tau ** 4)


def optimal_gamma_c(point: DimensionlessPoint):
    return point.c_p_prime / 2


def equivalence_gamma_c(point: DimensionlessPoint):
    """gamma_c at which the weak-coupling engine and the signal maxima coincide."""
    return 2 * point.c_p ** 2 / (9 * point.tau ** 2)


def crossing_c_p_prime(tau):
    """c_p - 1 where the optimal signal equals the weak-coupling engine power."""
    return 32 * tau ** 2 / 3


def max_difference_c_p_prime(tau):
    """c_p - 1 maximising engine power minus optimal signal."""
    return 16 * tau ** 2 / 3


def crossing_rabi(params: ModelParams):
    """Pump Rabi energies (eV) at the crossing and at the maximal difference."""
    rate = 4 * params.T_c * math.sqrt(params.Gamma_2 * params.Gamma_c
                                      / (3 * params.omega_c * params.omega_p))
    star = rate * HBAR_EV_PS
    return star, star / math.sqrt(2)


@dataclass(frozen=True)
class EngineComparison:
    P_Q: float  # NaN when the strong-coupling closed form is singular
    P_Q_weak: float
    P_s: float  # NaN when gamma_c is not given
    P_Q_star: float
    P_s_star: float
    gamma_c_equivalence: float
    gamma_c_star: float
    c_p_prime_crossing: float
    c_p_prime_max_difference: float
    weak_coupling: bool
    singular: bool

    @property
    def ratio(self):
        return self.P_Q_star / self.P_s_star if self.P_s_star else math.nan

    @property
    def difference(self):
        return self.P_Q_star - self.P_s_star


WEAK_COUPLING_LIMIT = 0.1


def compare_engines(point: DimensionlessPoint) -> EngineComparison:
    """Strong-coupling engine maximum against the perturbative signal maximum.

    Both powers are in their own natural units, taken equal to 1.
    """
    try:
        p_q, singular = pmax_q(point), False
    except SingularCoupling:
        p_q, singular = math.nan, True
    p_s = pmax_s(point) if point.gamma_c is not None else math.nan
    return EngineComparison(
        P_Q=p_q,
        P_Q_weak=pmax_q_weak(point),
        P_s=p_s,
        P_Q_star=pmax_q_weak(point),
        P_s_star=pmax_s_optimal(point),
        gamma_c_equivalence=equivalence_gamma_c(point),
        gamma_c_star=optimal_gamma_c(point),
        c_p_prime_crossing=crossing_c_p_prime(point.tau),
        c_p_prime_max_difference=max_difference_c_p_prime(point.tau),
        weak_coupling=point.lambda_prime < WEAK_COUPLING_LIMIT,
        singular=singular,
    )
