"""Three-level heat engine: steady state, power, efficiency and their maxima.

The effective hot bath drives g-1, the cold bath drives g-0 and the probe
field extracts work on 1-0. Closed forms work in dimensionless engine
coordinates (:class:`DimensionlessPoint`), with power in units of
``Gamma_c * omega_c``. Output power is reported positive when the engine
delivers work to the probe.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSteadyState, InvalidParams, SingularCoupling
from .lindblad import Generator
from .optimize import grid_maximize
from .params import ModelParams
from .units import HBAR_EV_PS

SINGULAR_COUPLING_TOL = 1e-9
BOUNDARY_TOL = 1e-9
THREE_LEVEL_COMPONENTS = ("gg", "00", "11", "01", "10")


@dataclass(frozen=True)
class DimensionlessPoint:
    """Engine coordinates.

    tau = T_c/T_h, c_p = omega_p/omega_c, c_21 = omega_21/omega_c,
    lambda_prime = lam*omega_c/(Gamma_c*T_h), gamma = Gamma_h/Gamma_c,
    gamma_c = Gamma_2/Gamma_c.
    """

    tau: float
    c_p: float
    lambda_prime: float
    c_21: float | None = None
    gamma: float | None = None
    gamma_c: float | None = None

    def __post_init__(self):
        if not 0 < self.tau < 1:
            raise InvalidParams(f"tau must lie in (0, 1), got {self.tau!r}")
        if not self.c_p > 1:
            raise InvalidParams(f"c_p must exceed 1, got {self.c_p!r}")
        if not self.lambda_prime >= 0:
            raise InvalidParams(f"lambda_prime must be >= 0, got {self.lambda_prime!r}")
        if self.c_21 is not None:
            if not self.c_21 > 0:
                raise InvalidParams(f"c_21 must be > 0, got {self.c_21!r}")
            if self.c_21 > 0.1 * self.c_p:
                warnings.warn(f"c_21 = {self.c_21:.3g} is not small against c_p = {self.c_p:.3g}",
                              RuntimeWarning, stacklevel=2)
        if self.gamma_c is not None and not self.gamma_c > 0:
            raise InvalidParams(f"gamma_c must be > 0, got {self.gamma_c!r}")

    @property
    def eta_C(self):
        return 1 - self.tau

    @property
    def c_p_prime(self):
        return self.c_p - 1

    @classmethod
    def from_params(cls, params: ModelParams, Gamma_h=None):
        """Engine coordinates of a physical parameter set (needs Gamma_c > 0)."""
        if params.Gamma_c <= 0:
            raise InvalidParams("engine coordinates need a cold bath, Gamma_c > 0")
        T_h = hot_temperature(params)
        return cls(
            tau=params.T_c / T_h,
            c_p=params.omega_p / params.omega_c,
            lambda_prime=params.probe_rate * params.omega_c / (params.Gamma_c * T_h),
            c_21=params.omega_21 / params.omega_c,
            gamma=None if Gamma_h is None else Gamma_h / params.Gamma_c,
            gamma_c=params.Gamma_2 / params.Gamma_c,
        )


@dataclass(frozen=True)
class PerformanceRecord:
    power: float
    heat_flux_hot: float
    efficiency: float
    region: str


def hot_temperature(params: ModelParams):
    """Effective hot-bath temperature (eV) set by the pump Rabi frequency."""
    return params.pump_rate * params.omega_c / math.sqrt(params.Gamma_2 * params.Gamma_c / 2)


# --- steady state -------------------------------------------------------------------

def three_level_generator(lam, Gamma_h, Gamma_c, n_h, n_c, Delta=0.0, cold_factor=2.0,
                          hot_factor=2.0):
    """Generator of the g-0-1 engine over components (gg, 00, 11, 01, 10).

    ``lam`` and ``Delta`` share the units of the rates. ``cold_factor`` and
    ``hot_factor`` multiply the bath population terms; both are 2 in the
    model and exist so the validation suite can corrupt one on purpose.
    """
    gg, p0, p1, c01, c10 = range(5)
    M = np.zeros((5, 5), dtype=complex)
    up_c, down_c = cold_factor * Gamma_c * n_c, cold_factor * Gamma_c * (n_c + 1)
    up_h, down_h = hot_factor * Gamma_h * n_h, hot_factor * Gamma_h * (n_h + 1)
    M[p0, p0] -= down_c
    M[p0, gg] += up_c
    M[p1, p1] -= down_h
    M[p1, gg] += up_h
    M[p0, c10] -= 1j * lam
    M[p0, c01] += 1j * lam
    M[p1, c10] += 1j * lam
    M[p1, c01] -= 1j * lam
    M[gg] = -(M[p0] + M[p1])
    dephase = Gamma_c * (1 + n_c) + Gamma_h * (1 + n_h)
    M[c01, c01] = -dephase - 1j * Delta
    M[c10, c10] = -dephase + 1j * Delta
    M[c01, p1] -= 1j * lam
    M[c01, p0] += 1j * lam
    M[c10, p1] += 1j * lam
    M[c10, p0] -= 1j * lam
    return Generator(M, THREE_LEVEL_COMPONENTS)


def three_level_steady_state(lam, Gamma_h, Gamma_c, n_h, n_c, Delta=0.0, cold_factor=2.0):
    """Stationary ``(rho_00, rho_11, rho_gg, rho_01)`` of the engine.

    rho_gg is eliminated through the trace and the remaining four linear
    equations are solved directly.
    """
    M = three_level_generator(lam, Gamma_h, Gamma_c, n_h, n_c, Delta, cold_factor).matrix
    # Solve for the deviation from the uniform population state. At large
    # occupations the populations differ only at O(1/n); the drift of the
    # uniform state is known exactly, so no cancellation reaches the solve.
    rows = [1, 2, 3, 4]
    A = M[np.ix_(rows, rows)].copy()
    A[:, 0] -= M[rows, 0]
    A[:, 1] -= M[rows, 0]
    b = np.array([cold_factor * Gamma_c, 2.0 * Gamma_h, 0.0, 0.0], dtype=complex) / 3
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSteadyState(str(exc)) from None
    x[:2] += 1 / 3
    rho_00, rho_11, rho_01, _ = x
    full = np.array([1 - rho_00 - rho_11, rho_00, rho_11, rho_01, x[3]])
    scale = np.abs(M).max()
    if not np.all(np.isfinite(full)) or np.linalg.norm(M @ full) > 1e-12 * scale:
        raise DegenerateSteadyState("steady-state solve did not converge")
    return float(rho_00.real), float(rho_11.real), float(full[0].real), complex(rho_01)


def work_and_heat(lam, rho_01, omega_c, omega_h):
    """Probe power and hot heat flux from the 1-0 coherence.

    Returns ``(P, Q_h)`` in the sign convention of the trace formulas: P is
    negative when the engine does work on the probe.
    """
    flux = (1j * lam * (rho_01 - np.conj(rho_01))).real
    return float((omega_c - omega_h) * flux), float(omega_h * flux)


def power_closed_form(lam, Gamma_h, Gamma_c, n_h, n_c, omega_c, omega_h):
    """High-temperature output power of the three-level engine."""
    return (2 / 3 * lam ** 2 * Gamma_h * Gamma_c * (n_c - n_h) * (omega_c - omega_h)
            / ((Gamma_h * n_h + Gamma_c * n_c) * (lam ** 2 + Gamma_h * Gamma_c * n_c * n_h)))


def power_exact(lam, Gamma_h, Gamma_c, n_h, n_c, omega_c, omega_h):
    """Output power of the steady state at any temperature (same sign as above)."""
    denom = (lam ** 2 * (Gamma_c * (3 * n_c + 1) + Gamma_h * (3 * n_h + 1))
             + Gamma_c * Gamma_h * (Gamma_c * (n_c + 1) + Gamma_h * (n_h + 1))
             * (3 * n_c * n_h + 2 * n_c + 2 * n_h + 1))
    return 2 * lam ** 2 * Gamma_h * Gamma_c * (n_c - n_h) * (omega_c - omega_h) / denom


# --- dimensionless power and its maximum ------------------------------------------------

def _coupling_denominator(c_21, point):
    return (point.lambda_prime ** 2 + c_21) * (point.tau ** 2 + c_21)


def dimensionless_power(c_21, point: DimensionlessPoint):
    """Output power / (Gamma_c omega_c) with c_p >> c_21 applied to the work quantum."""
    c_21 = np.asarray(c_21, dtype=float)
    lp2 = point.lambda_prime ** 2
    return 2 * lp2 * c_21 * (point.c_p - 1) * (1 - c_21) / (3 * _coupling_denominator(c_21, point))


def dimensionless_power_full(c_21, point: DimensionlessPoint):
    """Same as :func:`dimensionless_power` but keeping the work quantum
    omega_h - omega_c = omega_c (c_p - 1 - c_21) intact."""
    c_21 = np.asarray(c_21, dtype=float)
    lp2 = point.lambda_prime ** 2
    return (2 * lp2 * c_21 * (1 - c_21) * (point.c_p - 1 - c_21)
            / (3 * _coupling_denominator(c_21, point)))


def dimensionless_power_linear(c_21, point: DimensionlessPoint):
    """Full form with the c_21**2 term of (1 - c_21)(c_p - 1 - c_21) dropped.

    This is the objective whose exact maximum over c_21 is :func:`pmax_q`
    and whose maximiser gives :func:`eta_star`.
    """
    c_21 = np.asarray(c_21, dtype=float)
    lp2 = point.lambda_prime ** 2
    return (2 * lp2 * c_21 * (point.c_p - 1 - point.c_p * c_21)
            / (3 * _coupling_denominator(c_21, point)))


def efficiency(c_21, c_p):
    """Engine efficiency 1 - omega_c/omega_h with omega_h = omega_p - omega_21."""
    return 1 - 1 / (c_p - np.asarray(c_21, dtype=float))


def _root_c(point):
    lp2, t2, cp = point.lambda_prime ** 2, point.tau ** 2, point.c_p
    return math.sqrt((lp2 * cp + cp - 1) * (cp * t2 + cp - 1))


def pmax_q(point: DimensionlessPoint):
    """Maximum over c_21 of the output power, units of Gamma_c omega_c."""
    lp, tau, cp = point.lambda_prime, point.tau, point.c_p
    if abs(lp - tau) < SINGULAR_COUPLING_TOL:
        raise SingularCoupling(f"closed form undefined at lambda_prime = tau = {tau!r}")
    lp2, t2 = lp * lp, tau * tau
    bracket = 2 * cp * lp2 * t2 + (cp - 1) * (lp2 + t2) - 2 * lp * tau * _root_c(point)
    return 2 * lp2 * bracket / (3 * (lp2 - t2) ** 2)


def pmax_q_weak(point: DimensionlessPoint):
    """Leading O(lambda_prime**2) term of :func:`pmax_q`."""
    return 2 * point.lambda_prime ** 2 * point.c_p_prime / (3 * point.tau ** 2)


def eta_star(point: DimensionlessPoint):
    """Efficiency at maximum power (omega_c held fixed)."""
    lp, tau, cp = point.lambda_prime, point.tau, point.c_p
    shift = lp * tau * (lp * tau * cp - _root_c(point)) / (cp * (lp * lp + tau * tau + 1) - 1)
    return 1 - 1 / (cp + shift)


def eta_star_sc(point: DimensionlessPoint):
    """Efficiency at maximum power when the probe coupling dominates every bath rate."""
    tau = point.tau
    return 1 - 1 / (point.c_p + tau * (tau - math.sqrt(1 + tau * tau)))


def eta_star_limit(point: DimensionlessPoint):
    """lambda_prime -> infinity limit of :func:`eta_star`."""
    tau, cp = point.tau, point.c_p
    return 1 - 1 / (cp + tau * tau - tau * math.sqrt(tau * tau + (cp - 1) / cp))


def numerical_maximum(point: DimensionlessPoint, objective=dimensionless_power):
    """Grid + golden-section maximum over c_21 in (0, 1).

    Returns ``(c_21*, power*, efficiency at c_21*)``.
    """
    c_best, p_best = grid_maximize(lambda c: objective(c, point), 0.0, 1.0)
    return c_best, p_best, float(efficiency(c_best, point.c_p))


def performance(point: DimensionlessPoint) -> PerformanceRecord:
    power = pmax_q(point)
    eta = eta_star(point)
    return PerformanceRecord(power, power / eta, eta, classify_region(point.eta_C, point.c_p).label)


# --- efficiency bound map -----------------------------------------------------------------

BOUND_NAMES = ("onset", "I/II", "II/III", "III/IV", "Carnot")
REGION_NAMES = ("I", "II", "III", "IV")


@dataclass(frozen=True)
class RegionInfo:
    label: str
    boundaries: tuple  # c_p at each entry of BOUND_NAMES
    boundary_efficiencies: tuple
    eta_table: float


def region_boundaries(eta_C):
    tau = 1 - eta_C
    return (2.0, 4 / (2 - eta_C), 2 / math.sqrt(tau), (2 - eta_C) / tau, 2 / tau)


def boundary_efficiencies(eta_C):
    return (0.0, eta_C / 2, 1 - math.sqrt(1 - eta_C), eta_C / (2 - eta_C), eta_C)


def table_efficiency(c_p):
    """Efficiency at maximum power along the bound map, 1 - 2/c_p.

    Passes through every tabulated (c_p, eta*) bound pair.
    """
    return 1 - 2 / c_p


def classify_region(eta_C, c_p) -> RegionInfo:
    """Place ``c_p`` on the efficiency-bound map at Carnot efficiency ``eta_C``."""
    if not 0 < eta_C < 1:
        raise InvalidParams(f"eta_C must lie in (0, 1), got {eta_C!r}")
    if not c_p > 0:
        raise InvalidParams(f"c_p must be > 0, got {c_p!r}")
    bounds = region_boundaries(eta_C)
    label = None
    for name, value in zip(BOUND_NAMES, bounds):
        if abs(c_p - value) <= BOUNDARY_TOL:
            label = name
            break
    if label is None:
        if c_p < bounds[0]:
            label = "below-onset"
        elif c_p > bounds[-1]:
            label = "beyond-Carnot"
        else:
            k = int(np.searchsorted(bounds, c_p)) - 1
            label = REGION_NAMES[k]
    return RegionInfo(label, bounds, boundary_efficiencies(eta_C), table_efficiency(c_p))


# --- pump settings realising a bound --------------------------------------------------------

@dataclass(frozen=True)
class PumpBound:
    Omega_p: float  # eV
    relation: str  # "=", "<<" or ">>"


def rabi_for_bound(bound, params: ModelParams) -> PumpBound:
    """Pump Rabi energy (eV) that puts the engine at the requested bound.

    ``"CA"`` returns the value with c_p = 2/sqrt(tau). ``"gamma->0"`` and
    ``"gamma->inf"`` return the threshold sqrt(Gamma_c Gamma_2) n_2 that the
    Rabi frequency has to stay well below or above.
    """
    if bound == "CA":
        rate = (params.omega_p ** 2 * params.T_c * math.sqrt(params.Gamma_c * params.Gamma_2 / 2)
                / (4 * params.omega_c ** 3))
        return PumpBound(rate * HBAR_EV_PS, "=")
    threshold = math.sqrt(params.Gamma_c * params.Gamma_2) * params.n_2 * HBAR_EV_PS
    if bound == "gamma->0":
        return PumpBound(threshold, "<<")
    if bound == "gamma->inf":
        return PumpBound(threshold, ">>")
    raise ValueError(f"unknown bound {bound!r}")


def gamma_regime(params: ModelParams, margin=10.0):
    """Which gamma limit the pump is in: ``gamma->0``, ``gamma->inf`` or ``neither``."""
    threshold = rabi_for_bound("gamma->0", params).Omega_p
    if params.Omega_p * margin <= threshold:
        return "gamma->0"
    if params.Omega_p >= margin * threshold:
        return "gamma->inf"
    return "neither"
