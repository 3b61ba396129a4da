"""Brute-force 1-D maximisation used as the oracle for the closed-form maxima."""

import numpy as np
from scipy import optimize

GRID_POINTS = 10_000
X_TOL = 1e-10


def grid_maximize(fn, lo, hi, n_grid=GRID_POINTS, tol=X_TOL):
    """Maximise ``fn`` on the open interval ``(lo, hi)``.

    A uniform grid locates the best cell, then golden-section search refines
    inside the bracket formed by its neighbours. ``fn`` must accept arrays.
    Returns ``(x_best, f_best)``.
    """
    x = np.linspace(lo, hi, n_grid + 2)[1:-1]
    f = np.asarray(fn(x), dtype=float)
    i = int(np.nanargmax(f))
    if i == 0 or i == x.size - 1:
        return float(x[i]), float(f[i])
    neg = lambda z: -float(fn(np.asarray(z)))
    xb = optimize.golden(neg, brack=(x[i - 1], x[i], x[i + 1]), tol=tol)
    fb = -neg(xb)
    if fb < f[i]:
        return float(x[i]), float(f[i])
    return float(xb), float(fb)
