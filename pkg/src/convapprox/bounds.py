"""Two-sided bounds for best approximations of convolution classes and their reports.

With c = ||cos||_{p'} / pi and tail = sum_{k>n} psi(k), the class satisfies

    c (psi(n) - tail) <= E_n <= (Fourier-sum deviation) <= c (psi(n) + tail)

whenever tail < psi(n). Power-law and exp-power sequences get explicit
brackets in terms of n, r (and alpha).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .best_approx import remainder_sup, remez_trig
from .errors import ConfigurationError, DomainError, HypothesisViolation
from .extremal import WitnessSpec, build_witness, spike_factor, vallee_poussin_lower
from .norms import cos_pnorm, dual_exponent
from .series import (
    BetaSequence, ConstantBeta, ExpPower, PowerLaw, PsiSequence, exp_tail_factor,
    hypothesis_check, power_tail_bound, psi_tail, psi_value,
)


class Status(enum.Enum):
    OK = "ok"
    REFUSED = "refused"


def class_constant(p: float) -> float:
    """||cos t||_{p'} / pi."""
    return cos_pnorm(dual_exponent(p)) / math.pi


def _require_hypothesis_2(n, psi):
    check = hypothesis_check(psi, n, "2")
    if not check.holds:
        raise HypothesisViolation(
            f"hypothesis (2) violated at n={n}: tail {check.lhs:.6g} >= psi(n) {check.rhs:.6g}"
        )
    return check


def lower_bound(n: int, p: float, psi: PsiSequence) -> float:
    """c (psi(n) - tail); for p = 1 the constant is 1/pi."""
    _require_hypothesis_2(n, psi)
    return class_constant(p) * (psi_value(psi, n) - psi_tail(psi, n))


def upper_bound(n: int, p: float, psi: PsiSequence) -> float:
    """c sum_{k>=n} psi(k), an upper bound for the Fourier-sum deviation of the class."""
    return class_constant(p) * (psi_value(psi, n) + psi_tail(psi, n))


def spike_lower_bound(n: int, psi: PsiSequence, delta: float) -> float:
    """(1/pi)((2/delta) sin(delta/2) psi(n) - tail), the p = 1 bound at finite delta."""
    _require_hypothesis_2(n, psi)
    return (spike_factor(delta) * psi_value(psi, n) - psi_tail(psi, n)) / math.pi


def weyl_nagy_bounds(n: int, r: float, p: float) -> tuple[float, float]:
    """c n^-r (1 -/+ (2 + 1/n)(1 + 1/n)^-r)."""
    c = class_constant(p)
    spread = (2 + 1 / n) * (1 + 1 / n) ** (-r)
    base = n ** (-r)
    return c * base * (1 - spread), c * base * (1 + spread)


def exp_class_bounds(n: int, alpha: float, r: float, p: float) -> tuple[float, float]:
    """c exp(-alpha n^r) (1 -/+ (1 + 1/(alpha r n^(r-1))) exp(-alpha r n^(r-1)))."""
    c = class_constant(p)
    spread = exp_tail_factor(alpha, r, n)
    base = math.exp(-alpha * n ** r)
    return c * base * (1 - spread), c * base * (1 + spread)


def elliptic_K(q: float, tol: float = 1e-15) -> float:
    """Complete elliptic integral of the first kind with modulus q, via the AGM."""
    if not 0 <= q < 1:
        raise DomainError(f"elliptic_K needs 0 <= q < 1, got {q}")
    a, b = 1.0, math.sqrt((1.0 - q) * (1.0 + q))
    for _ in range(64):
        if abs(a - b) <= tol * a:
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return math.pi / (2 * a)


REFERENCE_TAGS = ("K", "S1", "S2", "Wp")


def reference_asymptotics(n: int, r: float, which: str, p: float = math.inf) -> float:
    """Leading term of the classical asymptotics of the Fourier-sum deviation.

    ``K``: (4/pi) ln n / n^r; ``S1``: (8/pi^2) K(e^{-r/n}) / n^r (r >= 1);
    ``S2``: (4/pi) / n^r; ``Wp``: (||cos||_{p'}/pi) / n^r.
    """
    if n < 2 or not r > 0:
        raise DomainError("reference asymptotics need n >= 2 and r > 0")
    scale = n ** (-r)
    if which == "K":
        return 4 / math.pi * math.log(n) * scale
    if which == "S1":
        if r < 1:
            raise DomainError("the elliptic-integral formula needs r >= 1")
        return 8 / math.pi ** 2 * elliptic_K(math.exp(-r / n)) * scale
    if which == "S2":
        return 4 / math.pi * scale
    if which == "Wp":
        return class_constant(p) * scale
    raise ConfigurationError(f"unknown reference tag {which!r}; expected one of {REFERENCE_TAGS}")


@dataclass
class BoundsReport:
    """Bounds, witness values and diagnostics for one parameter point."""

    n: int
    p: float
    psi: str
    beta: str
    status: Status = Status.OK
    reason: str = ""
    hypothesis: dict = field(default_factory=dict)
    lower: float | None = None
    upper: float | None = None
    witness_value: float | None = None
    witness_lower: float | None = None
    remainder: float | None = None
    certified: bool | None = None
    ratios: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def flat(self) -> dict:
        """Flat key-value record; absent values are ``None``."""
        rec = {
            "n": self.n, "p": _fmt_p(self.p), "psi": self.psi, "beta": self.beta,
            "status": self.status.value, "reason": self.reason,
        }
        for tag in ("2", "17", "18", "25_25"):
            rec[f"hyp_{tag}"] = self.hypothesis.get(tag)
        rec.update(lower=self.lower, witness_En=self.witness_value,
                   witness_vp_lower=self.witness_lower, upper=self.upper,
                   remainder=self.remainder, certified=self.certified)
        rec["ratio"] = self.ratios.get("ratio")
        rec["tau"] = self.ratios.get("tau")
        for key in sorted(self.ratios):
            if key not in ("ratio", "tau"):
                rec[key] = self.ratios[key]
        for key in sorted(self.extra):
            rec[key] = self.extra[key]
        for key in sorted(self.reference):
            rec[f"ref_{key}"] = self.reference[key]
        return rec


def _fmt_p(p):
    return "inf" if math.isinf(p) else (str(int(p)) if p == int(p) else repr(p))


def _hypotheses(n, psi):
    out = {"2": hypothesis_check(psi, n, "2").holds,
           "17": hypothesis_check(psi, n, "17").holds}
    if isinstance(psi, PowerLaw):
        out["18"] = hypothesis_check(psi, n, "18").holds
    if isinstance(psi, ExpPower) and psi.r > 1:
        out["25_25"] = hypothesis_check(psi, n, "25_25").holds
    return out


def bounds_report(n: int, p: float, psi: PsiSequence, beta: BetaSequence = ConstantBeta(0.0),
                  delta: float | None = None, tol: float = 1e-10,
                  with_witness: bool = True) -> BoundsReport:
    """Evaluate the two-sided bounds and, optionally, the witness values at one point.

    Points where tail >= psi(n) come back with ``status=REFUSED``.
    """
    report = BoundsReport(n=n, p=p, psi=psi.describe(), beta=beta.describe())
    try:
        report.hypothesis = _hypotheses(n, psi)
    except DomainError as exc:
        report.status, report.reason = Status.REFUSED, str(exc)
        return report
    if not report.hypothesis["2"]:
        report.status, report.reason = Status.REFUSED, "hypothesis (2) violated"
        return report

    c = class_constant(p)
    psi_n = psi_value(psi, n)
    tail = psi_tail(psi, n)
    report.lower = lower_bound(n, p, psi)
    report.upper = upper_bound(n, p, psi)
    report.ratios["tau"] = tail / psi_n
    report.ratios["bound_gap"] = report.upper - report.lower

    if isinstance(psi, PowerLaw) and n >= 2:
        report.reference["S2"] = reference_asymptotics(n, psi.r, "S2")
        report.reference["Wp"] = reference_asymptotics(n, psi.r, "Wp", p)
        report.reference["K"] = reference_asymptotics(n, psi.r, "K")
        if psi.r >= 1:
            report.reference["S1"] = reference_asymptotics(n, psi.r, "S1")
        if psi.r >= n + 1 and report.hypothesis.get("18"):
            lo, hi = weyl_nagy_bounds(n, psi.r, p)
            report.extra.update(thm4_lower=lo, thm4_upper=hi)
    if isinstance(psi, ExpPower) and report.hypothesis.get("25_25"):
        lo, hi = exp_class_bounds(n, psi.alpha, psi.r, p)
        report.extra.update(thm6_lower=lo, thm6_upper=hi)

    if not with_witness:
        return report
    witness = build_witness(WitnessSpec(n, p, psi, beta, delta))
    result = remez_trig(witness.f, n, tol=tol, initial=witness.points)
    report.witness_value = result.value
    report.witness_lower = vallee_poussin_lower(witness)
    report.remainder = remainder_sup(witness.f, n - 1)
    report.certified = result.certified
    report.ratios["ratio"] = result.value / (c * psi_n)
    report.ratios["residual"] = (result.value - c * psi_n) / tail if tail > 0 else 0.0
    if p == 1:
        report.extra["delta"] = witness.delta
        report.extra["spike_lower"] = spike_lower_bound(n, psi, witness.delta)
    if "thm4_lower" in report.extra:
        report.ratios["power_residual"] = (
            (result.value * n ** psi.r - c) / (1 + 1 / n) ** (-psi.r)
        )
    if "thm6_lower" in report.extra:
        report.ratios["exp_residual"] = (
            (result.value * math.exp(psi.alpha * n ** psi.r) - c)
            / exp_tail_factor(psi.alpha, psi.r, n)
        )
    return report


def weyl_nagy_report(n: int, r: float, p: float, beta: BetaSequence = ConstantBeta(0.0),
                     **kwargs) -> BoundsReport:
    """Report for psi(k) = k^-r with the explicit n, r bracket.

    Requires r >= n+1 and (1 + 1/n)^-r < 1/(2 + 1/n); checks that the explicit
    bracket encloses the tail-based one and that the tail bound
    n^-r (1+1/n)^-r (2+1/n) holds.
    """
    psi = PowerLaw(r)
    if r < n + 1:
        raise HypothesisViolation(f"the explicit power-law bracket needs r >= n+1 (r={r}, n={n})")
    check = hypothesis_check(psi, n, "18")
    if not check.holds:
        raise HypothesisViolation(
            f"hypothesis (18) violated: (1+1/n)^-r = {check.lhs:.6g} >= {check.rhs:.6g}"
        )
    report = bounds_report(n, p, psi, beta, **kwargs)
    tail = psi_tail(psi, n)
    bound = power_tail_bound(n, r)
    report.extra["tail"] = tail
    report.extra["tail_bound"] = bound
    report.extra["tail_bound_ok"] = tail < bound
    report.extra["thm4_encloses"] = (
        report.extra["thm4_lower"] <= report.lower and report.upper <= report.extra["thm4_upper"]
    )
    return report


def exp_class_report(n: int, alpha: float, r: float, p: float,
                     beta: BetaSequence = ConstantBeta(0.0), **kwargs) -> BoundsReport:
    """Report for psi(k) = exp(-alpha k^r), r > 1, with the explicit bracket."""
    if not r > 1 or not alpha > 0:
        raise HypothesisViolation(f"the exp-power bracket needs r > 1 and alpha > 0 (r={r}, alpha={alpha})")
    psi = ExpPower(alpha, r)
    check = hypothesis_check(psi, n, "25_25")
    if not check.holds:
        raise HypothesisViolation(f"hypothesis (25_25) violated: {check.lhs:.6g} >= 1")
    report = bounds_report(n, p, psi, beta, **kwargs)
    tail = psi_tail(psi, n)
    bound = math.exp(-alpha * n ** r) * exp_tail_factor(alpha, r, n)
    report.extra["tail"] = tail
    report.extra["tail_bound"] = bound
    report.extra["tail_bound_ok"] = tail < bound
    report.extra["thm6_encloses"] = (
        report.extra["thm6_lower"] <= report.lower and report.upper <= report.extra["thm6_upper"]
    )
    return report
