"""Effective thermal bath replacing coherent pumping plus phonon relaxation.

Coherent g->2 driving followed by 2->1 relaxation moves population from g
to 1 exactly like an incoherent hot bath would, provided the bath
occupation ``n_h`` and rate ``Gamma_h`` are matched to the pump. Functions
here accept scalar or array times.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BeyondHorizon, LowTemperatureRegime, OscillatoryRegime
from .params import ModelParams

MIN_FIXED_MATCH_N2 = 10.0
WARN_FIXED_MATCH_N2 = 100.0


@dataclass(frozen=True)
class EffectiveBath:
    n_h: float | np.ndarray
    Gamma_h: float | np.ndarray
    validity_horizon: float
    t_star: float | None = None


@dataclass(frozen=True)
class ReducedPopulations:
    t: float | np.ndarray
    rho_gg: float | np.ndarray
    rho_11: float | np.ndarray
    rho_22: float | np.ndarray | None = None


def gamma_tilde(params: ModelParams, mode="exact"):
    """Slow relaxation rate (ps^-1) of the pumped g-1 pair.

    ``exact`` is the overdamped root of the g / g-2 coherence subsystem,
    ``high_T`` its leading order for Omega_p << Gamma_2 n_2.
    """
    om2 = params.pump_rate ** 2
    half_width = params.Gamma_2 * (params.n_2 + 1) / 4
    if mode == "high_T":
        return 4 * om2 / (params.Gamma_2 * (params.n_2 + 1))
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    radicand = half_width ** 2 - 2 * om2
    if radicand < 0:
        raise OscillatoryRegime(
            f"Gamma_2(n_2+1)/4 = {half_width:.6g} < sqrt(2)*Omega_p = {math.sqrt(2 * om2):.6g} ps^-1")
    # a - sqrt(a^2 - b) rewritten to avoid cancellation when b << a^2
    return 2 * om2 / (half_width + math.sqrt(radicand))


def coherent_populations(t, params: ModelParams, mode="high_T") -> ReducedPopulations:
    """g and 1 populations under coherent pumping, renormalised to the pair."""
    t = np.asarray(t, dtype=float)
    n2 = params.n_2
    gt = gamma_tilde(params, mode)
    rho_11 = (n2 + 1) * -np.expm1(-gt * t) / (1 + 2 * n2 + n2 * np.exp(-gt * t))
    return ReducedPopulations(t, 1 - rho_11, rho_11)


def thermal_populations(t, n_h, Gamma_h) -> ReducedPopulations:
    t = np.asarray(t, dtype=float)
    n_h = np.asarray(n_h, dtype=float)
    Gamma_h = np.asarray(Gamma_h, dtype=float)
    if np.any(n_h <= 0) or np.any(Gamma_h <= 0):
        raise ValueError("n_h and Gamma_h must be positive")
    rho_11 = n_h * -np.expm1(-Gamma_h * (1 + 2 * n_h) * t) / (1 + 2 * n_h)
    return ReducedPopulations(t, 1 - rho_11, rho_11)


def validity_horizon(params: ModelParams):
    """Time (ps) after which the time-dependent occupation turns negative."""
    return math.log(params.n_2) / gamma_tilde(params, "high_T")


def match_bath_timedep(t, params: ModelParams) -> EffectiveBath:
    """Occupation and rate that reproduce the coherent populations at time ``t``."""
    t = np.asarray(t, dtype=float)
    n2 = params.n_2
    gt = gamma_tilde(params, "high_T")
    denom = n2 * np.exp(-gt * t) - 1
    if np.any(denom <= 0) or np.any(t < 0):
        raise BeyondHorizon(f"n_h(t) is unphysical beyond t = {validity_horizon(params):.6g} ps")
    n_h = (n2 + 1) / denom
    Gamma_h = 4 * params.pump_rate ** 2 / (params.Gamma_2 * (n2 + 1) * (2 * n_h + 1))
    return EffectiveBath(n_h, Gamma_h, validity_horizon(params))


def match_bath_fixed(params: ModelParams) -> EffectiveBath:
    """Time-independent bath obtained by freezing the matching at t* = ln(n_2/2)/Gamma~."""
    n2 = params.n_2
    if n2 <= MIN_FIXED_MATCH_N2:
        raise LowTemperatureRegime(f"fixed matching needs n_2 >> 1, got n_2 = {n2:.6g}")
    if n2 < WARN_FIXED_MATCH_N2:
        warnings.warn(f"n_2 = {n2:.4g} is only marginally in the high-temperature regime",
                      RuntimeWarning, stacklevel=2)
    t_star = math.log(n2 / 2) / gamma_tilde(params, "high_T")
    Gamma_h = 2 * params.pump_rate ** 2 / (params.Gamma_2 * n2 ** 2)
    return EffectiveBath(n2, Gamma_h, validity_horizon(params), t_star)


def pumped_three_level(t, params: ModelParams, mode="exact"):
    """Closed-form g-1-2 dynamics with state 2 pinned to its stationary value.

    Returns ``(rho_g2, rho_gg, rho_11, rho_22)`` starting from all population
    in g. Requires the overdamped regime ``4*sqrt(2)*Omega_p < Gamma_2(n_2+1)``.
    """
    t = np.asarray(t, dtype=float)
    n2 = params.n_2
    om = params.pump_rate
    z_sq = params.Gamma_2 ** 2 * (n2 + 1) ** 2 - 32 * om ** 2
    if z_sq < 0:
        raise OscillatoryRegime("Gamma_2(n_2+1) < 4*sqrt(2)*Omega_p")
    z = math.sqrt(z_sq)
    a = params.Gamma_2 * (n2 + 1) / 4
    norm = 3 * n2 + 1
    if z > 0:
        # exp(-a t) sinh(z t / 4) / z split into two decaying exponentials
        envelope = 0.5 * (np.exp((z / 4 - a) * t) - np.exp(-(z / 4 + a) * t)) / z
    else:
        envelope = 0.25 * t * np.exp(-a * t)
    rho_g2 = 4j * (2 * n2 + 1) * om * envelope / norm
    gt = gamma_tilde(params, mode)
    decay = np.exp(-gt * t)
    grown = -np.expm1(-gt * t)
    rho_gg = n2 / norm + (2 * n2 + 1) * decay / norm
    rho_11 = (n2 + 1) * grown / norm
    rho_22 = n2 * grown / norm
    return rho_g2, rho_gg, rho_11, rho_22


def pumped_steady_state(n_2):
    """Stationary (rho_gg, rho_11, rho_22) of the pumped g-1-2 subsystem."""
    norm = 3 * n_2 + 1
    return n_2 / norm, (n_2 + 1) / norm, n_2 / norm


def pumped_pair_steady_state(n_2):
    """Stationary (rho_gg, rho_11) renormalised to the g-1 pair."""
    return n_2 / (2 * n_2 + 1), (n_2 + 1) / (2 * n_2 + 1)
