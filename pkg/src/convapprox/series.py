"""Coefficient sequences psi(k), phase sequences beta_k and the generating kernel.

The kernel of a convolution class is

    Psi(t) = sum_{k>=1} psi(k) cos(k t - beta_k pi / 2),

and every bound in this package is phrased through psi(n) and the tail
sum_{k>n} psi(k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from ._trigsum import harmonic_sum
from .errors import ConfigurationError, DivergentTailError, DomainError

DEFAULT_TAIL_EPS = 1e-12

# Terms summed explicitly before the Euler-Maclaurin remainder takes over.
_POWER_DIRECT_TERMS = 2048
_MAX_KERNEL_TERMS = 2_000_000


class PsiSequence:
    """Base class for nonnegative coefficient sequences indexed from k = 1."""

    def values(self, k) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, k):
        return psi_value(self, k)

    def tail(self, n: int, eps: float = DEFAULT_TAIL_EPS) -> float:
        return psi_tail(self, n, eps)

    def describe(self) -> str:
        raise NotImplementedError

    @property
    def summable(self) -> bool:
        return True


@dataclass(frozen=True)
class PowerLaw(PsiSequence):
    """psi(k) = k^(-r): the Weyl-Nagy coefficients."""

    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"PowerLaw needs r > 0, got {self.r}")

    def values(self, k):
        k = np.asarray(k, dtype=float)
        return np.exp(-self.r * np.log(k))

    @property
    def summable(self):
        return self.r > 1

    def describe(self):
        return f"power:r={self.r:g}"


@dataclass(frozen=True)
class ExpPower(PsiSequence):
    """psi(k) = exp(-alpha k^r): generalized Poisson coefficients."""

    alpha: float
    r: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.r > 0):
            raise DomainError(f"ExpPower needs alpha > 0 and r > 0, got {self.alpha}, {self.r}")

    def values(self, k):
        k = np.asarray(k, dtype=float)
        return np.exp(-self.alpha * k ** self.r)

    def describe(self):
        return f"exp:alpha={self.alpha:g},r={self.r:g}"


@dataclass(frozen=True)
class Table(PsiSequence):
    """Finitely supported psi: values[k-1] for k <= len(values), 0 afterwards."""

    values_: tuple = field(default=())

    def __init__(self, values):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise DomainError("Table needs at least one value")
        if any(v < 0 or not math.isfinite(v) for v in vals):
            raise DomainError("Table values must be finite and nonnegative")
        object.__setattr__(self, "values_", vals)

    def values(self, k):
        k = np.asarray(k, dtype=np.int64)
        arr = np.asarray(self.values_)
        out = np.zeros(k.shape)
        inside = (k >= 1) & (k <= len(arr))
        out[inside] = arr[k[inside] - 1]
        return out

    def describe(self):
        return "table:" + ",".join(f"{v:g}" for v in self.values_)


class BetaSequence:
    """Phases beta_k, k >= 1."""

    def values(self, k) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, k):
        out = self.values(k)
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ConstantBeta(BetaSequence):
    beta: float = 0.0

    def values(self, k):
        return np.full(np.shape(k), float(self.beta)) if np.ndim(k) else float(self.beta)

    def describe(self):
        return f"const:{self.beta:g}"


@dataclass(frozen=True)
class BetaList(BetaSequence):
    """Explicit beta_1, beta_2, ...; the last entry repeats forever."""

    values_: tuple = field(default=())

    def __init__(self, values):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise DomainError("BetaList needs at least one value")
        object.__setattr__(self, "values_", vals)

    def values(self, k):
        arr = np.asarray(self.values_)
        idx = np.clip(np.asarray(k, dtype=np.int64), 1, len(arr)) - 1
        out = arr[idx]
        return float(out) if np.ndim(out) == 0 else out

    def describe(self):
        return "list:" + ",".join(f"{v:g}" for v in self.values_)


@dataclass(frozen=True)
class KernelSpec:
    psi: PsiSequence
    beta: BetaSequence = ConstantBeta(0.0)
    tail_eps: float = DEFAULT_TAIL_EPS


@dataclass(frozen=True)
class HypothesisCheck:
    """Outcome of one hypothesis: ``holds`` is ``lhs < rhs`` unless noted."""

    tag: str
    holds: bool
    lhs: float
    rhs: float
    note: str = ""

    def __bool__(self):
        return self.holds


def psi_value(psi: PsiSequence, k):
    """psi(k) for a positive integer k (or an array of them)."""
    karr = np.asarray(k)
    if np.any(karr < 1):
        raise DomainError(f"psi is indexed from k = 1, got {k}")
    out = psi.values(karr)
    return float(out) if np.ndim(out) == 0 else out


def _power_tail(r: float, n: int, eps: float) -> tuple[float, float]:
    """Tail of k^-r past n and an error bound for it.

    Terms n+1..K are summed directly (smallest first); the rest comes from the
    Euler-Maclaurin expansion, whose first omitted term bounds the error since
    t^-r is completely monotone.
    """
    k = np.arange(n + 1, n + 1 + _POWER_DIRECT_TERMS, dtype=float)
    terms = np.exp(-r * np.log(k))
    direct = math.fsum(terms[::-1])
    big_k = float(n + _POWER_DIRECT_TERMS)
    log_k = math.log(big_k)
    fk = math.exp(-r * log_k)
    rem = (
        math.exp((1 - r) * log_k) / (r - 1)
        - fk / 2
        + r * fk / big_k / 12
        - r * (r + 1) * (r + 2) * fk / big_k ** 3 / 720
    )
    err = r * (r + 1) * (r + 2) * (r + 3) * (r + 4) * fk / big_k ** 5 / 30240
    return direct + rem, err


def _exp_tail(alpha: float, r: float, n: int, eps: float) -> float:
    total = 0.0
    parts = []
    k = n + 1
    while True:
        t = math.exp(-alpha * k ** r)
        if t == 0.0:
            break
        parts.append(t)
        total += t
        if r >= 1:
            # consecutive ratios decrease, so the rest is below a geometric series
            q = math.exp(-alpha * ((k + 2) ** r - (k + 1) ** r))
            t_next = math.exp(-alpha * (k + 1) ** r)
            bound = t_next / (1.0 - q) if q < 1 else math.inf
        else:
            # integral test with the upper incomplete gamma function
            a = 1.0 / r
            bound = a * alpha ** (-a) * special.gamma(a) * special.gammaincc(a, alpha * k ** r)
        if bound <= eps and bound <= 1e-17 * total:
            break
        k += 1
    return math.fsum(reversed(parts))


@lru_cache(maxsize=4096)
def _tail_cached(psi: PsiSequence, n: int, eps: float) -> float:
    if isinstance(psi, Table):
        return math.fsum(psi.values_[n:])
    if isinstance(psi, PowerLaw):
        if psi.r <= 1:
            raise DivergentTailError(f"sum of k^-{psi.r:g} diverges (needs r > 1)")
        value, _ = _power_tail(psi.r, n, eps)
        return value
    if isinstance(psi, ExpPower):
        return _exp_tail(psi.alpha, psi.r, n, eps)
    raise ConfigurationError(f"unsupported psi sequence {psi!r}")


def psi_tail(psi: PsiSequence, n: int, eps: float = DEFAULT_TAIL_EPS) -> float:
    """sum_{k=n+1}^inf psi(k), accurate to ``eps`` absolutely (and to rounding relatively)."""
    if n < 0 or int(n) != n:
        raise DomainError(f"tail index must be a nonnegative integer, got {n}")
    if not eps > 0:
        raise DomainError("eps must be positive")
    return _tail_cached(psi, int(n), float(eps))


def power_tail_bracket(r: float, n: int) -> tuple[float, float]:
    """Tail of k^-r past n together with its Euler-Maclaurin error bound."""
    if r <= 1:
        raise DivergentTailError(f"sum of k^-{r:g} diverges (needs r > 1)")
    return _power_tail(float(r), int(n), DEFAULT_TAIL_EPS)


def lacunary_tail(psi: PsiSequence, n: int, j: int) -> float:
    """sum_{i>j} psi(i*n): the tail of psi restricted to multiples of n."""
    if isinstance(psi, PowerLaw):
        return n ** (-psi.r) * psi_tail(psi, j)
    if isinstance(psi, ExpPower):
        return psi_tail(ExpPower(psi.alpha * n ** psi.r, psi.r), j)
    if isinstance(psi, Table):
        vals = psi.values_
        return math.fsum(vals[i * n - 1] for i in range(j + 1, len(vals) // n + 1))
    raise ConfigurationError(f"unsupported psi sequence {psi!r}")


def hypothesis_check(psi: PsiSequence, n: int, which: str) -> HypothesisCheck:
    """Check one of the decay hypotheses at index n.

    ``which`` is one of ``"2"`` (tail below psi(n)), ``"17"`` (ratio
    psi(n+1)/psi(n), with the verdict taken from the family's limit),
    ``"18"`` (power law, (1+1/n)^-r < 1/(2+1/n)) or ``"25_25"``
    (exp-power, (1 + 1/(alpha r n^(r-1))) exp(-alpha r n^(r-1)) < 1).
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    tag = str(which).strip("() ")
    if tag == "2":
        lhs, rhs = psi_tail(psi, n), psi_value(psi, n)
        return HypothesisCheck("2", lhs < rhs, lhs, rhs)
    if tag == "17":
        num, den = psi_value(psi, n + 1), psi_value(psi, n)
        ratio = num / den if den > 0 else 0.0
        if isinstance(psi, PowerLaw):
            holds, note = False, "ratio tends to 1"
        elif isinstance(psi, ExpPower):
            holds = psi.r > 1
            note = "ratio tends to 0" if holds else f"ratio tends to {math.exp(-psi.alpha) if psi.r == 1 else 1:g}"
        else:
            holds, note = True, "finite support"
        return HypothesisCheck("17", holds, ratio, 0.0, note)
    if tag == "18":
        if not isinstance(psi, PowerLaw):
            raise ConfigurationError("hypothesis (18) applies to PowerLaw sequences only")
        lhs = (1 + 1 / n) ** (-psi.r)
        rhs = 1 / (2 + 1 / n)
        return HypothesisCheck("18", lhs < rhs, lhs, rhs)
    if tag == "25_25":
        if not isinstance(psi, ExpPower):
            raise ConfigurationError("hypothesis (25_25) applies to ExpPower sequences only")
        if psi.r <= 1:
            raise ConfigurationError("hypothesis (25_25) needs r > 1")
        lhs = exp_tail_factor(psi.alpha, psi.r, n)
        return HypothesisCheck("25_25", lhs < 1.0, lhs, 1.0)
    raise ConfigurationError(f"unknown hypothesis tag {which!r}")


def power_tail_bound(n: int, r: float) -> float:
    """n^-r (1+1/n)^-r (2+1/n): an upper bound for the power tail when r >= n+1."""
    return n ** (-r) * (1 + 1 / n) ** (-r) * (2 + 1 / n)


def exp_tail_factor(alpha: float, r: float, n: int) -> float:
    """(1 + 1/(alpha r n^(r-1))) exp(-alpha r n^(r-1))."""
    s = alpha * r * n ** (r - 1)
    return (1 + 1 / s) * math.exp(-s)


def exp_tail_bound(n: int, alpha: float, r: float) -> float:
    """Upper bound exp(-alpha n^r) times ``exp_tail_factor`` for the exp-power tail, r > 1."""
    return math.exp(-alpha * n ** r) * exp_tail_factor(alpha, r, n)


def truncation_order(psi: PsiSequence, eps: float) -> int:
    """Smallest N with sum_{k>N} psi(k) <= eps."""
    if isinstance(psi, Table):
        nz = [i + 1 for i, v in enumerate(psi.values_) if v > 0]
        return nz[-1] if nz else 1
    if isinstance(psi, PowerLaw) and psi.r <= 1:
        raise DivergentTailError(f"kernel with psi(k) = k^-{psi.r:g} is not absolutely convergent")
    hi = 1
    while psi_tail(psi, hi, eps) > eps:
        hi *= 2
        if hi > _MAX_KERNEL_TERMS:
            raise DomainError(
                f"{psi.describe()} needs more than {_MAX_KERNEL_TERMS} terms to reach tail {eps:g}"
            )
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if psi_tail(psi, mid, eps) > eps:
            lo = mid
        else:
            hi = mid
    return hi if psi_tail(psi, lo, eps) > eps else lo


def kernel_coefficients(spec: KernelSpec, k_max: int) -> list[tuple[float, float]]:
    """(psi(k), beta_k pi/2) for k = 1..k_max."""
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    k = np.arange(1, k_max + 1)
    amp = np.atleast_1d(psi_value(spec.psi, k))
    phase = np.atleast_1d(spec.beta.values(k)) * math.pi / 2
    return [(float(a), float(ph)) for a, ph in zip(amp, phase)]


def _kernel_arrays(spec: KernelSpec, order: int):
    k = np.arange(1, order + 1)
    amp = np.atleast_1d(psi_value(spec.psi, k))
    phase = np.atleast_1d(spec.beta.values(k)) * (math.pi / 2)
    a = np.concatenate([[0.0], amp * np.cos(phase)])
    b = np.concatenate([[0.0], amp * np.sin(phase)])
    return a, b


def kernel_eval(spec: KernelSpec, t):
    """Psi(t) truncated where the dropped tail is at most ``spec.tail_eps``."""
    if not spec.tail_eps > 0:
        raise DomainError("tail_eps must be positive")
    if not spec.psi.summable:
        raise DivergentTailError(
            f"{spec.psi.describe()} is not absolutely summable; the kernel series is not evaluated"
        )
    order = truncation_order(spec.psi, spec.tail_eps)
    a, b = _kernel_arrays(spec, order)
    return harmonic_sum(t, a, b)
