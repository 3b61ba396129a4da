"""Physical inputs and the density-matrix state of the four-level model."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import InvalidParams
from .units import ROOM_TEMPERATURE_EV, bose, ev_to_rate, gap_for_occupation

CLOSURE_RTOL = 1e-12

#: Order of the components in the stacked state vector.
COMPONENTS = ("gg", "00", "11", "22", "g2", "2g", "01", "10")
POPULATIONS = ("gg", "00", "11", "22")
#: Each coherence and its Hermitian partner.
PAIRS = (("g2", "2g"), ("01", "10"))
#: Basis order used when the state is reconstructed as a 4x4 matrix.
LEVELS = ("g", "0", "1", "2")


@dataclass(frozen=True)
class ModelParams:
    """Inputs of the four-level pump-probe model.

    Energies in eV, rates in ps^-1. ``lam`` is the probe coupling
    mu_10 * E_pr and ``Omega_p`` the pump Rabi energy. Occupations are
    derived from ``T_c`` and never stored.
    """

    omega_p: float
    omega_2g: float
    omega_21: float
    omega_c: float
    omega_10: float
    Gamma_2: float
    Gamma_c: float
    Omega_p: float
    lam: float
    T_c: float
    omega_k: float | None = None

    def __post_init__(self):
        for name in ("omega_p", "omega_2g", "omega_21", "omega_c", "omega_10", "T_c", "Gamma_2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParams(f"{name} must be finite and > 0, got {value!r}")
        # zero drive / zero cold coupling are legitimate limits used by the oracles
        for name in ("Gamma_c", "Omega_p", "lam"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParams(f"{name} must be finite and >= 0, got {value!r}")
        if self.omega_k is not None and not self.omega_k > 0:
            raise InvalidParams(f"omega_k must be > 0, got {self.omega_k!r}")
        total = self.omega_10 + self.omega_21 + self.omega_c
        if abs(self.omega_2g - total) > CLOSURE_RTOL * self.omega_2g:
            raise InvalidParams(
                f"level closure violated: omega_2g={self.omega_2g!r} but "
                f"omega_10+omega_21+omega_c={total!r}"
            )

    @classmethod
    def resonant(cls, *, omega_c, omega_10, omega_21, Gamma_2, Gamma_c, Omega_p, lam, T_c):
        """Parameters with omega_2g closed from the ladder and both fields on resonance."""
        omega_2g = omega_10 + omega_21 + omega_c
        return cls(omega_p=omega_2g, omega_2g=omega_2g, omega_21=omega_21, omega_c=omega_c,
                   omega_10=omega_10, Gamma_2=Gamma_2, Gamma_c=Gamma_c, Omega_p=Omega_p,
                   lam=lam, T_c=T_c, omega_k=omega_10)

    def with_(self, **changes):
        """Copy with changes; keeps the ladder closed and resonant fields resonant
        unless ``omega_2g``, ``omega_p`` or ``omega_k`` are given explicitly."""
        base = {f.name: getattr(self, f.name) for f in fields(self)}
        base.update(changes)
        if "omega_2g" not in changes:
            base["omega_2g"] = base["omega_10"] + base["omega_21"] + base["omega_c"]
            if "omega_p" not in changes and self.omega_p == self.omega_2g:
                base["omega_p"] = base["omega_2g"]
        if "omega_k" not in changes and self.omega_k == self.omega_10:
            base["omega_k"] = base["omega_10"]
        return replace(self, **base)

    @property
    def n_2(self):
        return bose(self.omega_21, self.T_c)

    @property
    def n_c(self):
        return bose(self.omega_c, self.T_c)

    @property
    def probe_frequency(self):
        return self.omega_10 if self.omega_k is None else self.omega_k

    @property
    def detuning_pump(self):
        return self.omega_2g - self.omega_p

    @property
    def detuning_probe(self):
        return self.omega_10 - self.probe_frequency

    @property
    def pump_rate(self):
        """Omega_p as an angular rate, ps^-1."""
        return ev_to_rate(self.Omega_p)

    @property
    def probe_rate(self):
        return ev_to_rate(self.lam)


def fig2_params(*, Omega_p=1e-4, Gamma_2=0.025, n_2=1000.0, Gamma_c=0.0, lam=0.0,
                T_c=ROOM_TEMPERATURE_EV, omega_c=0.1, omega_10=1.9):
    """The pumping-stage parameter set behind the effective-bath figures.

    Omega_p = 1e-4 eV, Gamma_2 = 0.025 ps^-1 and n_2 = 1000 are the published
    values. ``omega_21`` is solved from ``n_2`` at the room temperature bath.
    The cold bath and probe are switched off so the g-1-2 subsystem evolves
    alone; ``omega_c`` and ``omega_10`` only enter through detunings, which
    are zero.
    """
    return ModelParams.resonant(
        omega_c=omega_c, omega_10=omega_10, omega_21=gap_for_occupation(n_2, T_c),
        Gamma_2=Gamma_2, Gamma_c=Gamma_c, Omega_p=Omega_p, lam=lam, T_c=T_c,
    )


@dataclass(frozen=True)
class DensityState:
    """Populations and the four coherences that the model couples."""

    rho_gg: float = 0.0
    rho_00: float = 0.0
    rho_11: float = 0.0
    rho_22: float = 0.0
    rho_g2: complex = 0j
    rho_2g: complex = 0j
    rho_01: complex = 0j
    rho_10: complex = 0j

    @classmethod
    def pure(cls, level):
        """Population entirely in ``level`` (one of g, 0, 1, 2)."""
        if level not in LEVELS:
            raise ValueError(f"unknown level {level!r}")
        return cls(**{f"rho_{level}{level}": 1.0})

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=complex)
        pops = {f"rho_{c}": float(vec[i].real) for i, c in enumerate(COMPONENTS[:4])}
        cohs = {f"rho_{c}": complex(vec[i]) for i, c in enumerate(COMPONENTS[4:], start=4)}
        return cls(**pops, **cohs)

    def to_vector(self):
        return np.array([getattr(self, f"rho_{c}") for c in COMPONENTS], dtype=complex)

    def __getitem__(self, component):
        return getattr(self, f"rho_{component}")

    @property
    def trace(self):
        return self.rho_gg + self.rho_00 + self.rho_11 + self.rho_22

    @property
    def hermiticity_error(self):
        return max(abs(self.rho_2g - self.rho_g2.conjugate()),
                   abs(self.rho_10 - self.rho_01.conjugate()))

    def matrix(self):
        """4x4 density matrix in the (g, 0, 1, 2) basis."""
        return state_matrix(self.to_vector())

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(_hermitian_part(self.matrix())).min())


def state_matrix(vec):
    vec = np.asarray(vec, dtype=complex)
    idx = {lvl: i for i, lvl in enumerate(LEVELS)}
    rho = np.zeros((4, 4), dtype=complex)
    for k, comp in enumerate(COMPONENTS):
        rho[idx[comp[0]], idx[comp[1]]] = vec[k]
    return rho


def _hermitian_part(rho):
    return 0.5 * (rho + rho.conj().T)
