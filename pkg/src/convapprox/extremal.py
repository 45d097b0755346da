"""Extremal witnesses for the lower bounds.

For the exponent p the witness derivative is

    phi_{n,p}(t) = ||cos||_{p'}^{1-p'} |cos nt|^{p'-1} sign cos nt     (1 < p < inf),
    phi_{n,inf}(t) = sign cos nt,

and for p = 1 a train of spikes of height (-1)^m / (2 delta) and width
delta / n centred at m pi / n. Convolving with the kernel gives the class
element f = F1 + F2, where F1 is the n-th harmonic and F2 collects the
harmonics 3n, 5n, ...  Since phi is (2pi/n)-periodic and changes sign under
a shift by pi/n, f only contains odd multiples of n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._trigsum import harmonic_projection, harmonic_sum
from .errors import CertificationError, ConfigurationError, DomainError, HypothesisViolation
from .norms import (
    DISCONTINUOUS, KINK, SMOOTH, TWO_PI, PeriodicFunction, QuadratureSpec, cos_pnorm,
    dual_exponent, quadrature_rule,
)
from .series import (
    DEFAULT_TAIL_EPS, BetaSequence, ConstantBeta, PsiSequence, lacunary_tail, psi_tail,
    psi_value,
)

MAX_HARMONIC = 2049


def one_minus_sinc(x: float) -> float:
    """1 - sin(x)/x without cancellation for small x."""
    if abs(x) < 1e-3:
        x2 = x * x
        return x2 / 6 - x2 * x2 / 120 + x2 ** 3 / 5040
    return 1.0 - math.sin(x) / x


def spike_factor(delta: float) -> float:
    """(2/delta) sin(delta/2): the first-harmonic weight of the p = 1 spike train."""
    return 1.0 - one_minus_sinc(delta / 2)


@dataclass(frozen=True)
class WitnessSpec:
    n: int
    p: float
    psi: PsiSequence
    beta: BetaSequence = ConstantBeta(0.0)
    delta: float | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not self.p >= 1:
            raise DomainError(f"p must lie in [1, inf], got {self.p}")
        if self.delta is not None and not 0 < self.delta < math.pi / 2:
            raise DomainError(f"delta must lie in (0, pi/2), got {self.delta}")

    @property
    def p_prime(self) -> float:
        return dual_exponent(self.p)

    def with_delta(self, delta):
        return WitnessSpec(self.n, self.p, self.psi, self.beta, delta)


@dataclass(frozen=True)
class ExtremalWitness:
    spec: WitnessSpec
    phi: PeriodicFunction
    f: PeriodicFunction
    F1: PeriodicFunction
    F2: PeriodicFunction
    points: np.ndarray
    coefficients: np.ndarray  # a_{jn} psi(jn), index j = 0..J
    phases: np.ndarray  # beta_{jn} pi / 2, index j = 0..J
    truncation_error: float

    @property
    def n(self):
        return self.spec.n

    @property
    def delta(self):
        return self.spec.delta


def _phi_profile(p: float, p_prime: float, delta: float | None):
    """phi_{1,p}(u); the order-n witness is phi_{1,p}(n t)."""
    if p == 1:
        if delta is None:
            raise ConfigurationError("the p = 1 witness needs delta")
        height = 1.0 / (2.0 * delta)

        def spikes(u):
            m = np.rint(u / math.pi)
            inside = np.abs(u - m * math.pi) < delta / 2
            sign = np.where(np.mod(m, 2) == 0, 1.0, -1.0)
            return np.where(inside, sign * height, 0.0)
        return spikes
    if math.isinf(p):
        return lambda u: np.sign(np.cos(u))
    scale = cos_pnorm(p_prime) ** (1.0 - p_prime)

    def profile(u):
        c = np.cos(u)
        return scale * np.abs(c) ** (p_prime - 1.0) * np.sign(c)
    return profile


def _phi_breakpoints(spec: WitnessSpec):
    n = spec.n
    if spec.p == 1:
        half = spec.delta / (2 * n)
        centres = np.arange(2 * n) * math.pi / n
        return tuple(np.concatenate([centres - half, centres + half]) % TWO_PI)
    return tuple((2 * np.arange(2 * n) + 1) * math.pi / (2 * n))


def phi_function(spec: WitnessSpec) -> PeriodicFunction:
    profile = _phi_profile(spec.p, spec.p_prime, spec.delta)
    n = spec.n
    if spec.p == 2:
        hint = SMOOTH
    elif spec.p == 1 or math.isinf(spec.p):
        hint = DISCONTINUOUS
    else:
        hint = KINK
    return PeriodicFunction(lambda t: profile(n * t), hint=hint,
                            breakpoints=_phi_breakpoints(spec), freq=n)


def phi_eval(spec: WitnessSpec, t):
    """Value of the witness derivative phi_{n,p} (or the p = 1 spike train) at t."""
    if spec.p == 1 and spec.delta is None:
        raise ConfigurationError("the p = 1 witness needs delta")
    out = _phi_profile(spec.p, spec.p_prime, spec.delta)(spec.n * np.asarray(t, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def _harmonics_quadrature(spec: WitnessSpec, j_max: int) -> np.ndarray:
    """(1/pi) int phi_{1,p}(u) cos(j u) du for j = 0..j_max by panel quadrature."""
    profile = _phi_profile(spec.p, spec.p_prime, spec.delta)
    if spec.p == 1:
        d = spec.delta / 2
        bps = (d, math.pi - d, math.pi + d, TWO_PI - d)
    else:
        bps = (math.pi / 2, 3 * math.pi / 2)
    quad = QuadratureSpec(panels=max(16, math.ceil(j_max * TWO_PI / 12)),
                          nodes_per_panel=24, breakpoints=bps)
    nodes, weights = quadrature_rule(quad, smoothing=spec.p not in (1, 2) and not math.isinf(spec.p))
    cos_mom, _ = harmonic_projection(nodes, weights * profile(nodes), j_max)
    return cos_mom / math.pi


def phi_harmonics(spec: WitnessSpec, j_max: int, method: str = "auto") -> np.ndarray:
    """Cosine coefficients a_{jn}(phi), j = 1..j_max.

    ``method="quadrature"`` integrates over one period. ``"auto"`` uses the
    exact values for p = 2 (a pure harmonic), p = inf (square wave) and the
    p = 1 spike train, and quadrature otherwise. Even j vanish by the
    half-period antisymmetry and are set to zero.
    """
    if j_max < 1:
        raise DomainError("j_max must be >= 1")
    if spec.p == 1 and spec.delta is None:
        raise ConfigurationError("the p = 1 witness needs delta")
    j = np.arange(1, j_max + 1)
    odd = j % 2 == 1
    if method == "quadrature":
        out = _harmonics_quadrature(spec, j_max)[1:]
    elif method == "auto":
        if spec.p == 2:
            out = np.where(j == 1, cos_pnorm(2.0) / math.pi, 0.0)
        elif math.isinf(spec.p):
            out = 4.0 / math.pi * np.where((j // 2) % 2 == 0, 1.0, -1.0) / j
        elif spec.p == 1:
            d = spec.delta
            out = 2.0 / (math.pi * j * d) * np.sin(j * d / 2)
        else:
            out = _harmonics_quadrature(spec, j_max)[1:]
    else:
        raise ConfigurationError(f"unknown method {method!r}")
    return np.where(odd, out, 0.0)


def alternation_points(n: int, beta_n: float) -> np.ndarray:
    """x_m = beta_n pi/(2n) + m pi/n, m = 0..2n-1."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return beta_n * math.pi / (2 * n) + np.arange(2 * n) * math.pi / n


def default_delta(n: int, psi: PsiSequence) -> float:
    """Largest delta = pi/2^j (j >= 2) whose spike loss (1 - (2/delta)sin(delta/2)) psi(n)
    stays within half of min(tail, psi(n) - tail)."""
    psi_n = psi_value(psi, n)
    tail = psi_tail(psi, n)
    budget = 0.5 * min(tail, psi_n - tail)
    delta = math.pi / 4
    for j in range(2, 60):
        delta = math.pi / 2 ** j
        if one_minus_sinc(delta / 2) * psi_n <= budget:
            break
    return delta


def _coefficient_bound(spec: WitnessSpec, j: int) -> float:
    """Upper bound for |a_{in}(phi)| over i > j."""
    if spec.p == 2:
        return 0.0
    if math.isinf(spec.p):
        return 4.0 / (math.pi * (j + 1))
    if spec.p == 1:
        return min(1.0, 2.0 / (spec.delta * (j + 1))) / math.pi
    return cos_pnorm(spec.p_prime) / math.pi


def _harmonic_cutoff(spec: WitnessSpec, amp1: float, tail_eps: float, max_harmonic: int):
    j = 1
    while True:
        bound = _coefficient_bound(spec, j) * lacunary_tail(spec.psi, spec.n, j)
        if bound <= tail_eps * abs(amp1) or j >= max_harmonic:
            return j, bound
        j = min(2 * j + 1, max_harmonic)


def build_witness(spec: WitnessSpec, tail_eps: float = DEFAULT_TAIL_EPS,
                  max_harmonic: int = MAX_HARMONIC) -> ExtremalWitness:
    """Construct phi, F1, F2 and f = F1 + F2 for the given parameters.

    Refuses (``HypothesisViolation``) when psi_tail(n) >= psi(n), or for p = 1
    when delta is too wide for the first harmonic to dominate the tail.
    """
    n, psi = spec.n, spec.psi
    psi_n = psi_value(psi, n)
    tail = psi_tail(psi, n)
    if not tail < psi_n:
        raise HypothesisViolation(
            f"theorem hypothesis violated: hypothesis (2) fails at n={n} "
            f"(tail {tail:.6g} >= psi(n) {psi_n:.6g})"
        )
    if spec.p == 1:
        if spec.delta is None:
            spec = spec.with_delta(default_delta(n, psi))
        if not spike_factor(spec.delta) * psi_n > tail:
            raise HypothesisViolation(
                f"theorem hypothesis violated: delta={spec.delta:.6g} too wide, "
                f"(2/delta)sin(delta/2) psi(n) <= tail"
            )
        a1 = spike_factor(spec.delta) / math.pi
    else:
        a1 = cos_pnorm(spec.p_prime) / math.pi

    amp1 = a1 * psi_n
    j_max, trunc = _harmonic_cutoff(spec, amp1, tail_eps, max_harmonic)
    a = phi_harmonics(spec, j_max)
    a[0] = a1
    j = np.arange(1, j_max + 1)
    coef = np.concatenate([[0.0], a * np.atleast_1d(psi_value(psi, j * n))])
    phases = np.concatenate([[0.0], np.atleast_1d(spec.beta.values(j * n)) * (math.pi / 2)])
    cos_part = coef * np.cos(phases)
    sin_part = coef * np.sin(phases)
    head = np.zeros_like(coef)
    head[1] = 1.0

    def series(mask):
        ca, sa = cos_part * mask, sin_part * mask
        return lambda t: harmonic_sum(t, ca, sa, step=n)

    f = PeriodicFunction(series(np.ones_like(coef)), hint=SMOOTH, freq=n)
    F1 = PeriodicFunction(series(head), hint=SMOOTH, freq=n)
    F2 = PeriodicFunction(series(1.0 - head - (np.arange(coef.size) == 0)), hint=SMOOTH, freq=n)
    points = alternation_points(n, float(spec.beta(n)))
    witness = ExtremalWitness(spec, phi_function(spec), f, F1, F2, points, coef, phases, trunc)

    values = f(points)
    expected = np.where(np.arange(2 * n) % 2 == 0, 1.0, -1.0)
    if not np.all(np.sign(values) == expected):
        raise CertificationError("witness does not alternate in sign at the points x_m")
    return witness


def alternation_lower_bound(f, points) -> float:
    """min |f(x_i)| when f alternates in sign on ``points``; a lower bound for E_n(f)_C
    whenever len(points) = 2n and the points lie in one period."""
    values = np.asarray(f(np.asarray(points, dtype=float)), dtype=float)
    signs = np.sign(values)
    if np.any(signs == 0) or np.any(signs[1:] == signs[:-1]):
        raise CertificationError("values do not alternate in sign on the given points")
    if len(values) % 2:
        raise CertificationError("an alternation set on the circle needs an even number of points")
    return float(np.min(np.abs(values)))


def vallee_poussin_lower(witness: ExtremalWitness) -> float:
    """Certified lower bound min_m |f(x_m)| for E_n(f)_C.

    The sampled values carry the series truncation error, which is subtracted.
    """
    values = witness.f(witness.points)
    expected = np.where(np.arange(values.size) % 2 == 0, 1.0, -1.0)
    if not np.all(np.sign(values) == expected):
        raise CertificationError("sign f(x_m) != (-1)^m; de la Vallee Poussin bound not valid")
    return max(0.0, float(np.min(np.abs(values))) - witness.truncation_error)
