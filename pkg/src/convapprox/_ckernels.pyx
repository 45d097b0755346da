# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for trigonometric sums.

Both routines walk the harmonics with a rotation recurrence and reseed from
libm every ``RESEED`` steps, which keeps the accumulated phase error at a few
ulps while avoiding one ``cos``/``sin`` call per term.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fmod, M_PI

cnp.import_array()

cdef int RESEED = 32


def harmonic_sum(const double[::1] x, const double[::1] a, const double[::1] b,
                 double step=1.0):
    """Evaluate sum_k a[k] cos(k*step*x) + b[k] sin(k*step*x) at every x."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t nk = a.shape[0]
    cdef Py_ssize_t i, k
    cdef double theta, c1, s1, c, s, cn, acc
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for i in range(m):
            theta = fmod(step * x[i], 2.0 * M_PI)
            c1 = cos(theta)
            s1 = sin(theta)
            c = 1.0
            s = 0.0
            acc = 0.0
            for k in range(nk):
                if k % RESEED == 0 and k > 0:
                    c = cos(k * theta)
                    s = sin(k * theta)
                acc += a[k] * c + b[k] * s
                cn = c * c1 - s * s1
                s = s * c1 + c * s1
                c = cn
            res[i] = acc
    return out


def harmonic_projection(const double[::1] u, const double[::1] w, Py_ssize_t kmax):
    """Return (C, S) with C[k] = sum_i w[i] cos(k u[i]), S[k] likewise, k = 0..kmax."""
    cdef Py_ssize_t m = u.shape[0]
    cdef Py_ssize_t i, k
    cdef double theta, c1, s1, c, s, cn, wi
    cos_out = np.zeros(kmax + 1, dtype=np.float64)
    sin_out = np.zeros(kmax + 1, dtype=np.float64)
    cdef double[::1] cc = cos_out
    cdef double[::1] ss = sin_out
    with nogil:
        for i in range(m):
            theta = fmod(u[i], 2.0 * M_PI)
            wi = w[i]
            c1 = cos(theta)
            s1 = sin(theta)
            c = 1.0
            s = 0.0
            for k in range(kmax + 1):
                if k % RESEED == 0 and k > 0:
                    c = cos(k * theta)
                    s = sin(k * theta)
                cc[k] += wi * c
                ss[k] += wi * s
                cn = c * c1 - s * s1
                s = s * c1 + c * s1
                c = cn
    return cos_out, sin_out
