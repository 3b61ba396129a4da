# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) stepper for ``dy/dt = M y``.

Same algorithm, constants and calling convention as ``_pydopri``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, fabs
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef inline double cabs(double complex z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176
cdef double A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784
cdef double B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40

cdef double SAFETY = 0.9, MIN_FACTOR = 0.2, MAX_FACTOR = 5.0


cdef inline void matvec(const double complex[:, ::1] M, const double complex *x,
                        double complex *out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double complex acc
    for i in range(n):
        acc = 0
        for j in range(n):
            acc = acc + M[i, j] * x[j]
        out[i] = acc


def dopri5_linear(M_in, y0, t_out_in, double rtol, double atol, double h0, long max_steps):
    cdef double complex[:, ::1] M = np.ascontiguousarray(M_in, dtype=np.complex128)
    cdef double[::1] t_out = np.ascontiguousarray(t_out_in, dtype=np.float64)
    cdef Py_ssize_t n = M.shape[0]
    cdef Py_ssize_t n_out = t_out.shape[0]
    Y_arr = np.zeros((n_out, n), dtype=np.complex128)
    cdef double complex[:, ::1] Y = Y_arr
    cdef double complex[::1] y0v = np.ascontiguousarray(y0, dtype=np.complex128)

    cdef double complex *buf = <double complex *> malloc(10 * n * sizeof(double complex))
    if buf == NULL:
        raise MemoryError()
    cdef double complex *y = buf
    cdef double complex *ynew = buf + n
    cdef double complex *k1 = buf + 2 * n
    cdef double complex *k2 = buf + 3 * n
    cdef double complex *k3 = buf + 4 * n
    cdef double complex *k4 = buf + 5 * n
    cdef double complex *k5 = buf + 6 * n
    cdef double complex *k6 = buf + 7 * n
    cdef double complex *k7 = buf + 8 * n
    cdef double complex *tmp = buf + 9 * n
    cdef double complex *swap

    cdef Py_ssize_t i, j, out_i
    cdef double t = t_out[0], t_next, remaining, hs, h = h0, err_norm, sc, e, factor, h_new
    cdef double complex ej
    cdef bint last
    cdef long n_accept = 0, n_reject = 0
    cdef int status = 0

    try:
        for j in range(n):
            y[j] = y0v[j]
            Y[0, j] = y0v[j]
        with nogil:
            matvec(M, y, k1, n)
            for out_i in range(1, n_out):
                t_next = t_out[out_i]
                while t < t_next:
                    if n_accept + n_reject >= max_steps:
                        status = 2
                        break
                    remaining = t_next - t
                    last = h >= remaining
                    hs = remaining if last else h
                    for j in range(n):
                        tmp[j] = y[j] + hs * (A21 * k1[j])
                    matvec(M, tmp, k2, n)
                    for j in range(n):
                        tmp[j] = y[j] + hs * (A31 * k1[j] + A32 * k2[j])
                    matvec(M, tmp, k3, n)
                    for j in range(n):
                        tmp[j] = y[j] + hs * (A41 * k1[j] + A42 * k2[j] + A43 * k3[j])
                    matvec(M, tmp, k4, n)
                    for j in range(n):
                        tmp[j] = y[j] + hs * (A51 * k1[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j])
                    matvec(M, tmp, k5, n)
                    for j in range(n):
                        tmp[j] = y[j] + hs * (A61 * k1[j] + A62 * k2[j] + A63 * k3[j]
                                              + A64 * k4[j] + A65 * k5[j])
                    matvec(M, tmp, k6, n)
                    for j in range(n):
                        ynew[j] = y[j] + hs * (B1 * k1[j] + B3 * k3[j] + B4 * k4[j]
                                               + B5 * k5[j] + B6 * k6[j])
                    matvec(M, ynew, k7, n)
                    err_norm = 0.0
                    for j in range(n):
                        ej = hs * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j]
                                   + E6 * k6[j] + E7 * k7[j])
                        sc = cabs(y[j])
                        if cabs(ynew[j]) > sc:
                            sc = cabs(ynew[j])
                        e = cabs(ej) / (atol + rtol * sc)
                        err_norm += e * e
                    err_norm = sqrt(err_norm / n)
                    if err_norm <= 1.0:
                        n_accept += 1
                        if last:
                            t = t_next
                        else:
                            t = t + hs
                        swap = y
                        y = ynew
                        ynew = swap
                        swap = k1
                        k1 = k7
                        k7 = swap
                        if err_norm == 0.0:
                            factor = MAX_FACTOR
                        else:
                            factor = SAFETY * pow(err_norm, -0.2)
                            if factor < MIN_FACTOR:
                                factor = MIN_FACTOR
                            if factor > MAX_FACTOR:
                                factor = MAX_FACTOR
                        h_new = hs * factor
                        if last:
                            if h_new > h:
                                h = h_new
                        else:
                            h = h_new
                    else:
                        n_reject += 1
                        factor = SAFETY * pow(err_norm, -0.2)
                        if factor < MIN_FACTOR:
                            factor = MIN_FACTOR
                        h = hs * factor
                        if h < 1e-14 * (fabs(t) if fabs(t) > 1.0 else 1.0):
                            status = 1
                            break
                if status != 0:
                    break
                for j in range(n):
                    Y[out_i, j] = y[j]
    finally:
        free(buf)
    return Y_arr, n_accept, n_reject, status, t
