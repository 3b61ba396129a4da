import numpy as np
import pytest
from scipy.linalg import expm

from qhe_spectro import kernels
from qhe_spectro.lindblad import build_generator
from qhe_spectro.params import DensityState, fig2_params

BACKENDS = [pytest.param(kernels.py_dopri5_linear, id="python")]
if kernels.c_dopri5_linear is not None:
    BACKENDS.append(pytest.param(kernels.c_dopri5_linear, id="cython"))


def _generator(seed):
    rng = np.random.default_rng(seed)
    return build_generator(fig2_params(
        Omega_p=10 ** rng.uniform(-4, -3), Gamma_2=rng.uniform(0.05, 0.5), n_2=rng.uniform(2, 50),
        Gamma_c=rng.uniform(0.05, 0.5), lam=10 ** rng.uniform(-4, -3))).matrix


@pytest.mark.parametrize("fn", BACKENDS)
@pytest.mark.parametrize("seed", range(4))
def test_matches_matrix_exponential(fn, seed):
    M = _generator(seed)
    y0 = DensityState.pure("g").to_vector()
    t = np.linspace(0, 30, 13)
    Y, n_acc, n_rej, status, _ = fn(M, y0, t, 1e-10, 1e-13, 1e-3, 1_000_000)
    assert status == kernels.STATUS_OK and n_acc > 0
    exact = np.array([expm(M * ti) @ y0 for ti in t])
    assert np.max(np.abs(Y - exact)) < 1e-8


@pytest.mark.parametrize("fn", BACKENDS)
def test_single_output_time(fn):
    M = _generator(0)
    y0 = DensityState.pure("g").to_vector()
    Y, n_acc, *_ = fn(M, y0, np.array([0.0]), 1e-9, 1e-12, 1e-3, 100)
    assert np.array_equal(Y[0], y0) and n_acc == 0


@pytest.mark.parametrize("fn", BACKENDS)
def test_step_budget_reported(fn):
    M = _generator(1)
    y0 = DensityState.pure("g").to_vector()
    _, _, _, status, t_fail = fn(M, y0, np.array([0.0, 1e4]), 1e-12, 1e-15, 1e-3, 5)
    assert status == kernels.STATUS_MAX_STEPS
    assert 0 < t_fail < 1e4


@pytest.mark.skipif(kernels.c_dopri5_linear is None, reason="extension not built")
def test_backends_agree_step_for_step():
    M = _generator(2)
    y0 = DensityState.pure("g").to_vector()
    t = np.linspace(0, 50, 7)
    a = kernels.py_dopri5_linear(M, y0, t, 1e-9, 1e-12, 1e-3, 1_000_000)
    b = kernels.c_dopri5_linear(M, y0, t, 1e-9, 1e-12, 1e-3, 1_000_000)
    # summation order differs, so a step sitting on the accept threshold may flip
    assert abs(a[1] - b[1]) <= 1 and abs(a[2] - b[2]) <= 1
    assert np.max(np.abs(a[0] - b[0])) < 1e-8


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
