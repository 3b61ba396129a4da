"""Pure-Python Dormand-Prince 5(4) stepper for ``dy/dt = M y``.

Reference implementation of the compiled kernel in ``_cdopri.pyx``; both
share the calling convention documented on :func:`dopri5_linear`.
"""

import math

import numpy as np

A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2


def dopri5_linear(M, y0, t_out, rtol, atol, h0, max_steps):
    """Integrate ``y' = M y`` and sample it at every time in ``t_out``.

    ``t_out[0]`` is the initial time. Returns ``(Y, n_accept, n_reject,
    status, t_fail)``: ``Y[i]`` is the state at ``t_out[i]``; ``status`` is
    0 on success, 1 on step-size underflow, 2 when ``max_steps`` ran out, in
    which case ``t_fail`` is where it happened and rows after it are zero.
    """
    M = np.ascontiguousarray(M, dtype=complex)
    t_out = np.asarray(t_out, dtype=float)
    y = np.array(y0, dtype=complex)
    Y = np.zeros((t_out.size, y.size), dtype=complex)
    Y[0] = y
    t = float(t_out[0])
    h = float(h0)
    k1 = M @ y
    n_accept = n_reject = 0
    dot = np.dot
    for i in range(1, t_out.size):
        t_next = float(t_out[i])
        while t < t_next:
            if n_accept + n_reject >= max_steps:
                return Y, n_accept, n_reject, STATUS_MAX_STEPS, t
            remaining = t_next - t
            last = h >= remaining
            hs = remaining if last else h
            k2 = dot(M, y + hs * (A21 * k1))
            k3 = dot(M, y + hs * (A31 * k1 + A32 * k2))
            k4 = dot(M, y + hs * (A41 * k1 + A42 * k2 + A43 * k3))
            k5 = dot(M, y + hs * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
            k6 = dot(M, y + hs * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
            y_new = y + hs * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
            k7 = dot(M, y_new)
            err = hs * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = math.sqrt(float(np.mean((np.abs(err) / scale) ** 2)))
            if err_norm <= 1.0:
                n_accept += 1
                t = t_next if last else t + hs
                y = y_new
                k1 = k7
                if err_norm == 0.0:
                    factor = MAX_FACTOR
                else:
                    factor = min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err_norm ** -0.2))
                h_new = hs * factor
                # a step shortened to land on an output time says nothing about h
                h = max(h, h_new) if last else h_new
            else:
                n_reject += 1
                h = hs * max(MIN_FACTOR, SAFETY * err_norm ** -0.2)
                if h < 1e-14 * max(1.0, abs(t)):
                    return Y, n_accept, n_reject, STATUS_UNDERFLOW, t
        Y[i] = y
    return Y, n_accept, n_reject, STATUS_OK, t
