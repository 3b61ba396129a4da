"""Unit conventions.

Energies (level spacings, Rabi couplings, temperatures with k_B absorbed) are
in eV. Rates are in ps^-1 and times in ps. An energy is turned into an
angular rate exactly once, by dividing by ``HBAR_EV_PS``.
"""

import math

#: Reduced Planck constant in eV*ps (CODATA 2018, exact SI definition).
HBAR_EV_PS = 6.582119569e-4

#: Room-temperature ambient bath, k_B * 300 K rounded as commonly quoted.
ROOM_TEMPERATURE_EV = 0.0259

UNIT_BANNER = (
    "units: energies eV (k_B=1), rates ps^-1, times ps, "
    f"hbar={HBAR_EV_PS!r} eV*ps applied once per energy->rate conversion"
)


def ev_to_rate(energy_ev):
    """Angular rate (ps^-1) corresponding to an energy in eV."""
    return energy_ev / HBAR_EV_PS


def rate_to_ev(rate):
    return rate * HBAR_EV_PS


def bose(omega, temperature):
    """Bose-Einstein occupation ``1 / (exp(omega/T) - 1)``."""
    return 1.0 / math.expm1(omega / temperature)


def gap_for_occupation(n, temperature):
    """Inverse of :func:`bose`: the level spacing giving occupation ``n``."""
    return temperature * math.log1p(1.0 / n)
