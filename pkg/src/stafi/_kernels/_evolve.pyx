# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled branch-evolution kernel.

Same RK4 arithmetic as reference.py, realization-major loop, GIL released so
chunks can run on a thread pool.
"""

import numpy as np

cimport cython
from cython.parallel cimport prange

COMPILED = True


def evolve_states(double sign, double m, double omega, double c, double x0,
                  double lam,
                  double[::1] alpha0, double[::1] alpham, double[::1] alpha1,
                  double[::1] acc0, double[::1] accm, double[::1] acc1,
                  double[::1] hsteps, double[:, ::1] noise):
    """See reference.evolve_states; identical contract and arithmetic."""
    cdef Py_ssize_t R = noise.shape[0]
    cdef Py_ssize_t K = noise.shape[1]
    x_out = np.zeros(R)
    p_out = np.zeros(R)
    a_out = np.zeros(R)
    cdef double[::1] xv = x_out
    cdef double[::1] pv = p_out
    cdef double[::1] av = a_out
    cdef double mw2 = m * omega * omega
    cdef double s = sign
    cdef Py_ssize_t r, k
    cdef double x, p, act, h, a0, am, a1, g0, gm, g1, q, f0, fm, f1
    cdef double d0, d2, d3, d4, w
    cdef double k1x, k1p, k1s, k2x, k2p, k2s, k3x, k3p, k3s, k4x, k4p, k4s
    cdef double x2, p2, x3, p3, x4, p4

    with nogil:
        for r in range(R):
            x = 0.0
            p = 0.0
            act = 0.0
            for k in range(K):
                h = hsteps[k]
                a0 = alpha0[k]; am = alpham[k]; a1 = alpha1[k]
                g0 = acc0[k]; gm = accm[k]; g1 = acc1[k]
                q = 1.0 + lam * noise[r, k]

                f0 = s * m * g0 * q
                fm = s * m * gm * q
                f1 = s * m * g1 * q

                d0 = x - s * a0
                k1x = p / m
                k1p = -mw2 * d0 + c + f0
                k1s = p * p / (2.0 * m) - 0.5 * mw2 * d0 * d0 + c * x + (x - x0) * f0

                x2 = x + 0.5 * h * k1x
                p2 = p + 0.5 * h * k1p
                d2 = x2 - s * am
                k2x = p2 / m
                k2p = -mw2 * d2 + c + fm
                k2s = p2 * p2 / (2.0 * m) - 0.5 * mw2 * d2 * d2 + c * x2 + (x2 - x0) * fm

                x3 = x + 0.5 * h * k2x
                p3 = p + 0.5 * h * k2p
                d3 = x3 - s * am
                k3x = p3 / m
                k3p = -mw2 * d3 + c + fm
                k3s = p3 * p3 / (2.0 * m) - 0.5 * mw2 * d3 * d3 + c * x3 + (x3 - x0) * fm

                x4 = x + h * k3x
                p4 = p + h * k3p
                d4 = x4 - s * a1
                k4x = p4 / m
                k4p = -mw2 * d4 + c + f1
                k4s = p4 * p4 / (2.0 * m) - 0.5 * mw2 * d4 * d4 + c * x4 + (x4 - x0) * f1

                w = h / 6.0
                x = x + w * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
                p = p + w * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
                act = act + w * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
            xv[r] = x
            pv[r] = p
            av[r] = act

    return x_out, p_out, a_out
