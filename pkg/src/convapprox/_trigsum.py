"""Backend selection for the trigonometric-sum kernels.

The compiled module is preferred; set ``CONVAPPROX_PURE_PYTHON=1`` to force
the NumPy path.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("CONVAPPROX_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        pass


def harmonic_sum(x, a, b, step=1.0):
    """Evaluate sum_k a[k] cos(k*step*x) + b[k] sin(k*step*x).

    ``x`` may be a scalar or any array shape; the result has the same shape.
    """
    x = np.asarray(x, dtype=float)
    flat = np.ascontiguousarray(x.ravel())
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("cosine and sine coefficient arrays differ in length")
    out = _impl.harmonic_sum(flat, a, b, float(step))
    return out.reshape(x.shape) if x.ndim else float(out[0])


def harmonic_projection(u, w, kmax):
    """Weighted cosine/sine moments sum_i w_i cos(k u_i), sum_i w_i sin(k u_i)."""
    u = np.ascontiguousarray(u, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)
    return _impl.harmonic_projection(u, w, int(kmax))
