"""Norms of 2pi-periodic functions.

L_p norms use composite Gauss-Legendre quadrature over [0, 2pi) with panels
split at known breakpoints; uniform norms use a dense grid followed by
successive parabolic refinement of the grid maxima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi

SMOOTH = "smooth"
KINK = "kink"
DISCONTINUOUS = "discontinuous"
_HINTS = (SMOOTH, KINK, DISCONTINUOUS)

# Geometric grading toward panel ends: ratio and number of levels.
_GRADING_RATIO = 0.15
_GRADING_LEVELS = 18


def dual_exponent(p: float) -> float:
    """p' with 1/p + 1/p' = 1 (p = 1 gives inf, p = inf gives 1)."""
    if not p >= 1:
        raise DomainError(f"exponent must be >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def cos_pnorm(p_prime: float) -> float:
    """||cos t||_{p'} over one period.

    Uses (2 sqrt(pi) Gamma((p'+1)/2) / Gamma(p'/2 + 1))^(1/p') in log form.
    """
    if math.isinf(p_prime):
        return 1.0
    if not p_prime >= 1:
        raise DomainError(f"p' must be >= 1, got {p_prime}")
    log_int = (
        math.log(2.0) + 0.5 * math.log(math.pi)
        + math.lgamma((p_prime + 1) / 2) - math.lgamma(p_prime / 2 + 1)
    )
    return math.exp(log_int / p_prime)


def _wrap(x):
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class PeriodicFunction:
    """A 2pi-periodic real function.

    The value at t is ``evaluator(t) + a0 / 2``. ``breakpoints`` lists points
    in [0, 2pi) where the function (or a power of it) is not smooth, ``freq``
    is its dominant frequency and sets default grid densities.
    """

    evaluator: Callable
    a0: float = 0.0
    hint: str = SMOOTH
    breakpoints: tuple = ()
    freq: int = 1

    def __post_init__(self):
        if self.hint not in _HINTS:
            raise DomainError(f"unknown smoothness hint {self.hint!r}")
        bps = tuple(sorted({float(b) % TWO_PI for b in self.breakpoints}))
        object.__setattr__(self, "breakpoints", bps)

    def __call__(self, t):
        t = _wrap(t)
        out = np.asarray(self.evaluator(t), dtype=float) + self.a0 / 2
        return float(out) if out.ndim == 0 else out

    def _combine(self, other, sign):
        if isinstance(other, (int, float)):
            return replace(self, a0=self.a0 + sign * 2.0 * other)
        if isinstance(other, PeriodicFunction):
            return PeriodicFunction(
                lambda t, f=self, g=other: f(t) + sign * g(t),
                hint=_worse_hint(self.hint, other.hint),
                breakpoints=self.breakpoints + other.breakpoints,
                freq=max(self.freq, other.freq),
            )
        if callable(other):
            return PeriodicFunction(
                lambda t, f=self, g=other: f(t) + sign * np.asarray(g(t), dtype=float),
                hint=self.hint, breakpoints=self.breakpoints, freq=self.freq,
            )
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, c):
        c = float(c)
        return PeriodicFunction(
            lambda t, f=self: c * f(t), hint=self.hint,
            breakpoints=self.breakpoints, freq=self.freq,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def _worse_hint(h1, h2):
    return max(h1, h2, key=_HINTS.index)


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule on [0, 2pi).

    ``panels`` uniform panels are cut further at every breakpoint.
    """

    panels: int = 32
    nodes_per_panel: int = 20
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        if self.panels < 1 or self.nodes_per_panel < 1:
            raise DomainError("panels and nodes_per_panel must be positive")

    def refined(self) -> "QuadratureSpec":
        return replace(self, panels=2 * self.panels)

    def edges(self) -> np.ndarray:
        base = np.linspace(0.0, TWO_PI, self.panels + 1)
        extra = np.asarray([b % TWO_PI for b in self.breakpoints], dtype=float)
        pts = np.unique(np.concatenate([base, extra]))
        keep = np.concatenate([[True], np.diff(pts) > 1e-13])
        pts = pts[keep]
        pts[-1] = TWO_PI
        return pts


def _unit_rule(nodes_per_panel: int, grade_left: bool, grade_right: bool):
    """Gauss-Legendre on [0, 1], subdivided geometrically toward graded ends."""
    if grade_left and grade_right:
        cuts = 0.5 * _GRADING_RATIO ** np.arange(_GRADING_LEVELS + 1)
        half = np.concatenate([[0.0], cuts[::-1]])
        edges = np.concatenate([half, 1.0 - half[-2::-1]])
    elif grade_left or grade_right:
        cuts = _GRADING_RATIO ** np.arange(_GRADING_LEVELS + 1)
        edges = np.concatenate([[0.0], cuts[::-1]])
        if grade_right:
            edges = 1.0 - edges[::-1]
    else:
        edges = np.array([0.0, 1.0])
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    lo = edges[:-1, None]
    width = np.diff(edges)[:, None]
    return (lo + width * (x + 1) / 2).ravel(), (width * w / 2).ravel()


def quadrature_rule(quad: QuadratureSpec, smoothing: bool = False):
    """Nodes and weights of the composite rule.

    With ``smoothing`` the panels next to each breakpoint are split
    geometrically toward it, which resolves algebraic singularities such as
    |cos t|^q at the zeros of cos.
    """
    edges = quad.edges()
    if smoothing and quad.breakpoints:
        bps = np.mod(np.asarray(quad.breakpoints, dtype=float), TWO_PI)
        dist = np.abs(edges[:, None] - bps[None, :])
        dist = np.minimum(dist, TWO_PI - dist)
        marked = dist.min(axis=1) < 1e-12
    else:
        marked = np.zeros(edges.size, dtype=bool)
    nodes, weights = [], []
    rules = {}
    for i in range(edges.size - 1):
        key = (bool(marked[i]), bool(marked[i + 1]))
        if key not in rules:
            rules[key] = _unit_rule(quad.nodes_per_panel, *key)
        u, wu = rules[key]
        width = edges[i + 1] - edges[i]
        nodes.append(edges[i] + width * u)
        weights.append(width * wu)
    return np.concatenate(nodes), np.concatenate(weights)


def integrate(func: Callable, quad: QuadratureSpec, smoothing: bool = False):
    """Integral of ``func`` over one period and an error estimate from panel doubling."""
    coarse_nodes, coarse_w = quadrature_rule(quad, smoothing)
    fine_nodes, fine_w = quadrature_rule(quad.refined(), smoothing)
    coarse = float(np.dot(coarse_w, func(coarse_nodes)))
    fine = float(np.dot(fine_w, func(fine_nodes)))
    return fine, abs(fine - coarse)


def default_quadrature(f: PeriodicFunction) -> QuadratureSpec:
    return QuadratureSpec(
        panels=max(16, 8 * f.freq), nodes_per_panel=20, breakpoints=f.breakpoints,
    )


def lp_norm(f: PeriodicFunction, p: float, quad: QuadratureSpec | None = None,
            full_output: bool = False):
    """(int_{-pi}^{pi} |f|^p)^(1/p); p = inf is the uniform norm.

    With ``full_output`` returns ``(norm, error_estimate)``.
    """
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    if math.isinf(p):
        val = sup_norm(f)
        return (val, 0.0) if full_output else val
    quad = quad or default_quadrature(f)
    integral, err = integrate(lambda t: np.abs(f(t)) ** p, quad, smoothing=f.hint == KINK)
    integral = max(integral, 0.0)
    norm = integral ** (1.0 / p)
    if full_output:
        # first-order propagation through x -> x^(1/p)
        if integral > 0:
            norm_err = norm * err / (p * integral)
        else:
            norm_err = err ** (1.0 / p)
        return norm, norm_err
    return norm


def refine_maxima(g: Callable, x: np.ndarray, h: float, iters: int = 32,
                  shrink: float = 3.0):
    """Successive parabolic refinement of local maxima of ``g``.

    ``g`` is vectorized; every returned value was actually evaluated, so the
    result never exceeds the true maximum.
    """
    x = np.array(x, dtype=float)
    best_x = x.copy()
    best_v = np.asarray(g(x), dtype=float).copy()
    step = np.full_like(x, h)
    for _ in range(iters):
        if np.all(step < 1e-14):
            break
        gm = g(best_x - step)
        gp = g(best_x + step)
        curv = gm - 2 * best_v + gp
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(curv < 0, 0.5 * step * (gm - gp) / curv, 0.0)
        d = np.clip(np.nan_to_num(d), -step, step)
        xv = best_x + d
        gv = g(xv)
        cand_x = np.stack([best_x, best_x - step, best_x + step, xv])
        cand_v = np.stack([best_v, gm, gp, gv])
        pick = np.argmax(cand_v, axis=0)
        cols = np.arange(x.shape[0])
        best_x = cand_x[pick, cols]
        best_v = cand_v[pick, cols]
        step = step / shrink
    return best_x, best_v


def grid_local_maxima(values: np.ndarray) -> np.ndarray:
    """Indices of cyclic local maxima of a sampled periodic sequence."""
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    return np.flatnonzero((values >= left) & (values >= right))


def sup_norm(f, grid_size: int | None = None) -> float:
    """max_t |f(t)| over one period.

    ``f`` is any vectorized callable; ``grid_size`` defaults to
    4096 * max(1, f.freq).
    """
    if grid_size is None:
        grid_size = 4096 * max(1, getattr(f, "freq", 1))
    if grid_size < 4:
        raise DomainError("grid_size must be at least 4")
    t = np.arange(grid_size) * (TWO_PI / grid_size)
    vals = np.abs(np.asarray(f(t), dtype=float))
    top = float(vals.max())
    if top == 0.0:
        return 0.0
    idx = grid_local_maxima(vals)
    idx = idx[vals[idx] >= 0.5 * top]
    _, refined = refine_maxima(lambda s: np.abs(np.asarray(f(s), dtype=float)),
                               t[idx], TWO_PI / grid_size)
    return max(top, float(refined.max()))
