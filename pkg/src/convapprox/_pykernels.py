"""NumPy implementations of the trigonometric-sum kernels.

Used when the compiled extension is unavailable, and as a reference in tests.
"""

import numpy as np

_CHUNK = 1 << 20


def harmonic_sum(x, a, b, step=1.0):
    """Evaluate sum_k a[k] cos(k*step*x) + b[k] sin(k*step*x) at every x."""
    x = np.ascontiguousarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    k = np.arange(a.shape[0], dtype=float)
    out = np.empty(x.shape[0])
    rows = max(1, _CHUNK // max(1, k.shape[0]))
    for lo in range(0, x.shape[0], rows):
        theta = np.fmod(step * x[lo:lo + rows], 2.0 * np.pi)
        arg = np.multiply.outer(theta, k)
        out[lo:lo + rows] = np.cos(arg) @ a + np.sin(arg) @ b
    return out


def harmonic_projection(u, w, kmax):
    """Return (C, S) with C[k] = sum_i w[i] cos(k u[i]), S[k] likewise, k = 0..kmax."""
    u = np.ascontiguousarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    k = np.arange(kmax + 1, dtype=float)
    cos_out = np.zeros(kmax + 1)
    sin_out = np.zeros(kmax + 1)
    rows = max(1, _CHUNK // (kmax + 1))
    for lo in range(0, u.shape[0], rows):
        theta = np.fmod(u[lo:lo + rows], 2.0 * np.pi)
        arg = np.multiply.outer(k, theta)
        cos_out += np.cos(arg) @ w[lo:lo + rows]
        sin_out += np.sin(arg) @ w[lo:lo + rows]
    return cos_out, sin_out
