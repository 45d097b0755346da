"""Fourier partial sums and best uniform approximation by trigonometric polynomials.

``remez_trig`` runs the periodic exchange algorithm on the Haar space of
trigonometric polynomials of order n-1 (dimension 2n-1), where the best
approximant is characterised by an error that equioscillates on 2n points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._trigsum import harmonic_projection, harmonic_sum
from .errors import DomainError
from .norms import (
    TWO_PI, PeriodicFunction, QuadratureSpec, grid_local_maxima, quadrature_rule,
    refine_maxima, sup_norm,
)


@dataclass(frozen=True)
class TrigPolynomial:
    """T(x) = a[0]/2 + sum_{k=1}^{order} (a[k] cos kx + b[k-1] sin kx)."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float)) if len(self.a) > 1 else np.zeros(0)
        if b.shape[0] != a.shape[0] - 1:
            raise DomainError("need order+1 cosine and order sine coefficients")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zero(cls, order: int) -> "TrigPolynomial":
        return cls(np.zeros(order + 1), np.zeros(order))

    @property
    def order(self) -> int:
        return self.a.shape[0] - 1

    def __call__(self, x):
        ca = self.a.copy()
        ca[0] /= 2
        sa = np.concatenate([[0.0], self.b])
        return harmonic_sum(x, ca, sa)

    def max_coefficient(self) -> float:
        return float(max(np.abs(self.a).max(), np.abs(self.b).max(initial=0.0)))


@dataclass
class RemezResult:
    best: TrigPolynomial
    value: float
    extrema: np.ndarray
    leveled_error: float
    iterations: int
    certified: bool
    lower: float = 0.0
    levels: list = field(default_factory=list)
    errors_at_extrema: np.ndarray | None = None


def _default_quadrature(f, order):
    freq = max(getattr(f, "freq", 1), order, 1)
    return QuadratureSpec(panels=max(32, 4 * freq), nodes_per_panel=20,
                          breakpoints=getattr(f, "breakpoints", ()))


def fourier_partial_sum(f, order: int, quad: QuadratureSpec | None = None) -> TrigPolynomial:
    """S_order(f): Fourier coefficients up to ``order`` by composite quadrature."""
    if order < 0:
        raise DomainError("order must be >= 0")
    quad = quad or _default_quadrature(f, order)
    nodes, weights = quadrature_rule(quad)
    cos_mom, sin_mom = harmonic_projection(nodes, weights * np.asarray(f(nodes), dtype=float), order)
    return TrigPolynomial(cos_mom / math.pi, sin_mom[1:] / math.pi)


def remainder_sup(f, order: int, quad: QuadratureSpec | None = None,
                  grid_size: int | None = None) -> float:
    """||f - S_order(f)||_C."""
    s = fourier_partial_sum(f, order, quad)
    return sup_norm(_difference(f, s), grid_size)


def _difference(f, poly):
    freq = getattr(f, "freq", 1)
    return PeriodicFunction(lambda t: np.asarray(f(t), dtype=float) - poly(t),
                            freq=max(freq, poly.order))


def _system(points, n):
    k = np.arange(1, n)
    x = points[:, None]
    alt = np.where(np.arange(points.size) % 2 == 0, 1.0, -1.0)[:, None]
    return np.hstack([np.ones_like(x), np.cos(k * x), np.sin(k * x), alt])


def _solve(points, fvals, n):
    sol = np.linalg.solve(_system(points, n), fvals)
    c0, a, b, h = sol[0], sol[1:n], sol[n:2 * n - 1], sol[-1]
    return TrigPolynomial(np.concatenate([[2 * c0], a]), b), float(h)


def _alternating_subset(x, e, size):
    """Pick ``size`` cyclically sign-alternating points, keeping the largest |e|.

    Runs of equal sign keep their largest member; while too many points remain
    the smallest |e| is dropped and its two (now same-signed) neighbours
    merge.
    """
    order = np.argsort(x)
    x, e = list(x[order]), list(e[order])
    # collapse runs of equal sign (cyclically)
    xs, es = [], []
    for xi, ei in zip(x, e):
        if es and np.sign(ei) == np.sign(es[-1]):
            if abs(ei) > abs(es[-1]):
                xs[-1], es[-1] = xi, ei
        else:
            xs.append(xi)
            es.append(ei)
    if len(es) > 1 and np.sign(es[0]) == np.sign(es[-1]):
        if abs(es[-1]) > abs(es[0]):
            xs[0], es[0] = xs[-1], es[-1]
        xs.pop()
        es.pop()
    while len(es) > size:
        i = int(np.argmin(np.abs(es)))
        m = len(es)
        left, right = (i - 1) % m, (i + 1) % m
        keep = left if abs(es[left]) >= abs(es[right]) else right
        drop = {i, left, right} - {keep}
        xs = [v for j, v in enumerate(xs) if j not in drop]
        es = [v for j, v in enumerate(es) if j not in drop]
    return np.asarray(xs), np.asarray(es)


def _error_extrema(err, n, grid_size, reference):
    """Candidate extrema of the error: refined grid extrema plus the reference."""
    t = np.arange(grid_size) * (TWO_PI / grid_size)
    vals = np.asarray(err(t), dtype=float)
    idx = grid_local_maxima(np.abs(vals))
    idx = idx[vals[idx] != 0]
    signs = np.sign(vals[idx])
    xs, _ = refine_maxima(lambda s: signs * np.asarray(err(s), dtype=float), t[idx],
                          TWO_PI / grid_size)
    xs = np.mod(xs, TWO_PI)
    cand_x = np.concatenate([xs, np.mod(reference, TWO_PI)])
    cand_e = np.asarray(err(cand_x), dtype=float)
    nz = cand_e != 0
    return cand_x[nz], cand_e[nz]


def remez_trig(f, n: int, tol: float = 1e-10, max_iter: int = 50, initial=None,
               grid_size: int | None = None) -> RemezResult:
    """Best uniform approximation of ``f`` by trigonometric polynomials of order n-1.

    Parameters
    ----------
    f : callable
        Vectorized 2pi-periodic continuous function.
    n : int
        Approximants have order n-1; the reference has 2n points.
    tol : float
        Stop when (max|error| - |h|) / max|error| <= tol.
    initial : array_like, optional
        Starting reference of 2n points in one period; equispaced by default.
    grid_size : int, optional
        Extremum search grid, 64 * max(n, f.freq) by default.

    Returns
    -------
    RemezResult
        ``value`` is max|f - best|, ``lower`` the de la Vallee Poussin bound
        min |error| on the final alternation set; E_n(f) lies between them.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    grid_size = grid_size or 64 * max(n, getattr(f, "freq", 1))
    if initial is None:
        ref = (np.arange(2 * n) + 0.5) * math.pi / n
    else:
        ref = np.sort(np.mod(np.asarray(initial, dtype=float), TWO_PI))
        if ref.size != 2 * n:
            raise DomainError(f"initial reference needs {2 * n} points, got {ref.size}")

    fgrid = np.asarray(f(np.arange(grid_size) * (TWO_PI / grid_size)), dtype=float)
    scale = float(np.abs(fgrid).max())
    levels = []
    best, h = TrigPolynomial.zero(n - 1), 0.0
    cand_x, cand_e = ref, np.zeros(2 * n)
    for it in range(1, max_iter + 1):
        best, h = _solve(ref, np.asarray(f(ref), dtype=float), n)
        levels.append(abs(h))

        def err(t, poly=best):
            return np.asarray(f(t), dtype=float) - poly(t)

        cand_x, cand_e = _error_extrema(err, n, grid_size, ref)
        emax = float(np.abs(cand_e).max()) if cand_e.size else 0.0
        if emax <= 1e-13 * scale or scale == 0.0:
            # f already lies in the approximating space
            return RemezResult(best, 0.0, ref, 0.0, it, True, 0.0, levels,
                               np.zeros(2 * n))
        new_x, new_e = _alternating_subset(cand_x, cand_e, 2 * n)
        if new_e.size < 2 * n:
            break
        ref = new_x
        if emax - abs(h) <= tol * emax:
            lower = float(np.abs(new_e).min())
            certified = (emax - lower) <= tol * emax
            return RemezResult(best, emax, new_x, abs(h), it, certified, lower,
                               levels, new_e)
    ext_e = np.asarray(f(ref), dtype=float) - best(ref)
    emax = float(np.abs(cand_e).max()) if cand_e.size else 0.0
    return RemezResult(best, emax, ref, abs(h), len(levels), False,
                       float(np.abs(ext_e).min()), levels, ext_e)
