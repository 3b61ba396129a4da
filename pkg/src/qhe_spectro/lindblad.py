"""Four-level master equation: generator assembly, time evolution, steady state.

The state vector stacks the eight dynamical components in the order of
``params.COMPONENTS``. Everything here is linear with constant
coefficients, so the generator is a plain matrix ``M`` with
``d(state)/dt = M @ state``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateSteadyState, StiffnessFailure
from .params import COMPONENTS, PAIRS, POPULATIONS, DensityState, ModelParams, state_matrix
from .units import ev_to_rate

POSITIVITY_TOL = 1e-7
KERNEL_RTOL = 1e-10
RESIDUAL_TOL = 1e-10


class PositivityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class Generator:
    """A linear generator together with the components it acts on."""

    matrix: np.ndarray
    components: tuple = COMPONENTS

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (len(self.components),) * 2:
            raise ValueError(f"matrix shape {m.shape} does not match {len(self.components)} components")
        object.__setattr__(self, "matrix", m)

    def index(self, component):
        return self.components.index(component)

    def trace_functional(self):
        """Row vector that sums the populations present in this generator."""
        return np.array([1.0 if c in POPULATIONS else 0.0 for c in self.components])

    def embed(self, vec):
        """Map a vector over ``components`` onto the full eight-component order."""
        full = np.zeros(len(COMPONENTS), dtype=complex)
        for k, c in enumerate(self.components):
            full[COMPONENTS.index(c)] = vec[k]
        return full

    def restrict(self, state):
        full = state.to_vector() if isinstance(state, DensityState) else np.asarray(state)
        return np.array([full[COMPONENTS.index(c)] for c in self.components], dtype=complex)

    def __matmul__(self, vec):
        return self.matrix @ vec


def build_generator(params: ModelParams, detuning_pump=None, detuning_probe=None) -> Generator:
    """Assemble the 8x8 generator of the four-level master equation.

    Detunings are energies (eV); by default they are taken from ``params``
    (zero for resonant fields). Cold-bath population terms carry the factor
    2*Gamma_c, the 2-1 phonon terms carry Gamma_2 alone. The pump enters the
    g-2 coherence as ``+i*Omega_p*(rho_gg - rho_22)``, which is the sign the
    Hamiltonian ``Omega_p(|g><2| + |2><g|)`` produces; the probe enters the
    0-1 coherence as ``-i*lam*(rho_11 - rho_00)``.
    """
    dp = params.detuning_pump if detuning_pump is None else detuning_pump
    dk = params.detuning_probe if detuning_probe is None else detuning_probe
    dp, dk = ev_to_rate(dp), ev_to_rate(dk)
    om, lam = params.pump_rate, params.probe_rate
    g2, gc = params.Gamma_2, params.Gamma_c
    n2, nc = params.n_2, params.n_c
    gg, p0, p1, p2, cg2, c2g, c01, c10 = range(8)
    M = np.zeros((8, 8), dtype=complex)

    # cold bath on 0-g
    M[gg, p0] += 2 * gc * (nc + 1)
    M[gg, gg] -= 2 * gc * nc
    M[p0, p0] -= 2 * gc * (nc + 1)
    M[p0, gg] += 2 * gc * nc
    # phonon relaxation on 2-1
    M[p1, p2] += g2 * (n2 + 1)
    M[p1, p1] -= g2 * n2
    M[p2, p2] -= g2 * (n2 + 1)
    M[p2, p1] += g2 * n2
    # pump on g-2
    M[gg, cg2] += 1j * om
    M[gg, c2g] -= 1j * om
    M[p2, cg2] -= 1j * om
    M[p2, c2g] += 1j * om
    M[cg2, gg] += 1j * om
    M[cg2, p2] -= 1j * om
    M[c2g, gg] -= 1j * om
    M[c2g, p2] += 1j * om
    # probe on 1-0
    M[p0, c01] += 1j * lam
    M[p0, c10] -= 1j * lam
    M[p1, c01] -= 1j * lam
    M[p1, c10] += 1j * lam
    M[c01, p1] -= 1j * lam
    M[c01, p0] += 1j * lam
    M[c10, p1] += 1j * lam
    M[c10, p0] -= 1j * lam
    # coherence decay
    dephase_g2 = g2 * (n2 + 1) / 2 + gc * nc
    dephase_01 = g2 * n2 / 2 + gc * (nc + 1)
    M[cg2, cg2] = -(dephase_g2 - 1j * dp)
    M[c2g, c2g] = -(dephase_g2 + 1j * dp)
    M[c01, c01] = -(dephase_01 - 1j * dk)
    M[c10, c10] = -(dephase_01 + 1j * dk)
    return Generator(M)


def subsystem(generator: Generator, components) -> Generator:
    """Restrict ``generator`` to ``components``.

    Only allowed when the kept block receives nothing from the dropped one,
    i.e. the dropped components are dynamically decoupled from it.
    """
    components = tuple(components)
    keep = [generator.index(c) for c in components]
    drop = [i for i in range(len(generator.components)) if i not in keep]
    M = generator.matrix
    if drop and np.any(M[np.ix_(keep, drop)] != 0):
        raise ValueError(f"components {components} are driven by the dropped block")
    return Generator(M[np.ix_(keep, keep)], components)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_times, 8) complex, full component order
    n_accept: int
    n_reject: int
    backend: str

    def __len__(self):
        return self.times.size

    def __getitem__(self, i):
        return DensityState.from_vector(self.states[i])

    def component(self, name):
        col = self.states[:, COMPONENTS.index(name)]
        return col.real if name in POPULATIONS else col

    @property
    def trace_drift(self):
        return float(np.max(np.abs(self.states[:, :4].sum(axis=1).real - 1.0)))

    @property
    def hermiticity_error(self):
        err = 0.0
        for a, b in PAIRS:
            ia, ib = COMPONENTS.index(a), COMPONENTS.index(b)
            err = max(err, float(np.max(np.abs(self.states[:, ib] - self.states[:, ia].conj()))))
        return err

    @property
    def max_imag_population(self):
        return float(np.max(np.abs(self.states[:, :4].imag)))

    def min_eigenvalue(self):
        """Smallest eigenvalue of the reconstructed density matrix over the run."""
        lowest = math.inf
        for vec in self.states:
            rho = state_matrix(vec)
            rho = 0.5 * (rho + rho.conj().T)
            lowest = min(lowest, float(np.linalg.eigvalsh(rho)[0]))
        return lowest


def evolve(generator: Generator, initial: DensityState, t_grid, rel_tol=1e-9, abs_tol=1e-12,
           max_steps=50_000_000, check_positivity=True) -> Trajectory:
    """Integrate from ``t_grid[0] = 0`` and sample at every grid time (ps)."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0 or t_grid[0] != 0.0:
        raise ValueError("t_grid must be a non-empty 1-D array starting at 0")
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    if abs(initial.trace - 1.0) > 1e-12 or initial.hermiticity_error > 1e-12:
        raise ValueError("initial state must have unit trace and paired coherences")
    y0 = generator.restrict(initial)
    h0 = _initial_step(generator.matrix, y0, rel_tol, abs_tol)
    Y, n_acc, n_rej, status, t_fail = kernels.dopri5_linear(
        generator.matrix, y0, t_grid, rel_tol, abs_tol, h0, max_steps)
    if status == kernels.STATUS_UNDERFLOW:
        raise StiffnessFailure("step size underflow", t_fail)
    if status == kernels.STATUS_MAX_STEPS:
        raise StiffnessFailure(f"step budget of {max_steps} exhausted", t_fail)
    states = np.array([generator.embed(row) for row in Y])
    traj = Trajectory(t_grid, states, int(n_acc), int(n_rej), kernels.BACKEND)
    if check_positivity:
        lowest = traj.min_eigenvalue()
        if lowest < -POSITIVITY_TOL:
            warnings.warn(f"density matrix eigenvalue {lowest:.3e} below -{POSITIVITY_TOL:g}",
                          PositivityWarning, stacklevel=2)
    return traj


def _initial_step(M, y0, rtol, atol):
    # Hairer, Norsett & Wanner starting-step heuristic for a fifth-order method
    scale = atol + rtol * np.abs(y0)
    f0 = M @ y0
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = M @ (y0 + h0 * f0)
    d2 = np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return float(min(100 * h0, h1))


def steady_state(generator: Generator) -> DensityState:
    """Unit-trace kernel vector of the generator."""
    M = generator.matrix
    _, s, vh = np.linalg.svd(M)
    null = s <= KERNEL_RTOL * s[0] if s[0] > 0 else np.ones_like(s, dtype=bool)
    dim = int(null.sum())
    if dim != 1:
        raise DegenerateSteadyState(f"generator kernel has dimension {dim}, expected 1")
    vec = vh[-1].conj()
    tr = generator.trace_functional() @ vec
    if abs(tr) < 1e-300:
        raise DegenerateSteadyState("kernel vector has zero trace")
    vec = vec / tr
    residual = float(np.linalg.norm(M @ vec))
    if residual >= RESIDUAL_TOL * max(1.0, s[0]):
        raise DegenerateSteadyState(f"kernel residual {residual:.3e} too large")
    return DensityState.from_vector(generator.embed(vec))
