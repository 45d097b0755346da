import math

import numpy as np
import pytest

from convapprox.best_approx import remez_trig
from convapprox.errors import ConfigurationError, DomainError, HypothesisViolation
from convapprox.extremal import (
    WitnessSpec, alternation_lower_bound, alternation_points, build_witness, default_delta,
    one_minus_sinc, phi_eval, phi_function, phi_harmonics, spike_factor, vallee_poussin_lower,
)
from convapprox.norms import cos_pnorm, integrate, lp_norm, QuadratureSpec, sup_norm
from convapprox.series import BetaList, ConstantBeta, ExpPower, PowerLaw, psi_tail, psi_value

import oracles

INF = math.inf


def spec(n=3, p=INF, r=None, beta=0.0, delta=None):
    return WitnessSpec(n, p, PowerLaw(r or n + 1), ConstantBeta(beta), delta)


class TestPhi:
    @pytest.mark.parametrize("p", [1.25, 2, 3, INF])
    def test_unit_norm(self, p):
        s = spec(2, p)
        assert np.isclose(lp_norm(phi_function(s), p), 1.0, rtol=1e-9)

    def test_spike_unit_mass(self):
        s = spec(2, 1, delta=math.pi / 8)
        assert np.isclose(lp_norm(phi_function(s), 1), 1.0, rtol=1e-12)

    @pytest.mark.parametrize("p", [1.5, 2, 4, INF])
    def test_extremal_pairing(self, p):
        # int phi(t) cos(nt) dt = ||cos||_{p'}, equality in Hoelder's inequality
        s = spec(2, p)
        phi = phi_function(s)
        val, _ = integrate(lambda t: phi(t) * np.cos(2 * t),
                           QuadratureSpec(panels=64, breakpoints=phi.breakpoints), smoothing=p not in (2, INF))
        assert np.isclose(val, cos_pnorm(s.p_prime), rtol=1e-9)

    def test_square_wave_values(self):
        assert phi_eval(spec(1, INF), 0.0) == 1.0
        assert phi_eval(spec(1, INF), math.pi) == -1.0

    def test_p1_needs_delta(self):
        with pytest.raises(ConfigurationError):
            phi_eval(spec(2, 1), 0.0)

    def test_invalid_spec(self):
        with pytest.raises(DomainError):
            WitnessSpec(0, 2, PowerLaw(2))
        with pytest.raises(DomainError):
            WitnessSpec(2, 2, PowerLaw(2), delta=2.0)


class TestHarmonics:
    @pytest.mark.parametrize("p", [1.25, 1.5, 3, 6])
    def test_generic_p_vs_gamma_formula(self, p):
        s = spec(2, p)
        got = phi_harmonics(s, 15, method="quadrature")
        q = s.p_prime - 1
        scale = cos_pnorm(s.p_prime) ** (1 - s.p_prime)
        want = [scale * oracles.cos_power_harmonic(q, j) if j % 2 else 0.0 for j in range(1, 16)]
        assert np.allclose(got, want, rtol=1e-9, atol=1e-12)

    def test_square_wave_exact_vs_quadrature(self):
        s = spec(2, INF)
        assert np.allclose(phi_harmonics(s, 21), phi_harmonics(s, 21, "quadrature"), atol=1e-12)

    def test_spike_exact_vs_quadrature(self):
        s = spec(2, 1, delta=math.pi / 16)
        assert np.allclose(phi_harmonics(s, 21), phi_harmonics(s, 21, "quadrature"), atol=1e-12)

    def test_pure_harmonic(self):
        a = phi_harmonics(spec(2, 2), 7)
        assert np.isclose(a[0], 1 / math.sqrt(math.pi)) and np.allclose(a[1:], 0)

    def test_first_harmonic_is_class_constant(self):
        for p in (1.5, 3):
            s = spec(2, p)
            assert np.isclose(phi_harmonics(s, 1)[0], cos_pnorm(s.p_prime) / math.pi, rtol=1e-10)


class TestSinc:
    def test_small_argument(self):
        x = 1e-5
        assert np.isclose(one_minus_sinc(x), x * x / 6, rtol=1e-9)
        assert np.isclose(spike_factor(0.5), 4 * math.sin(0.25))


class TestWitness:
    def test_alternation_points(self):
        x = alternation_points(3, 1.0)
        assert x.size == 6 and np.isclose(x[0], math.pi / 6) and np.allclose(np.diff(x), math.pi / 3)

    @pytest.mark.parametrize("p", [1, 1.5, 2, INF])
    @pytest.mark.parametrize("beta", [0.0, 1.0, 0.5])
    def test_sign_alternation(self, p, beta):
        w = build_witness(spec(3, p, beta=beta))
        values = w.f(w.points)
        assert np.all(np.sign(values) == (-1.0) ** np.arange(6))

    def test_decomposition(self):
        w = build_witness(spec(2, 1.5))
        t = np.linspace(0, 7, 50)
        assert np.allclose(w.f(t), w.F1(t) + w.F2(t), atol=1e-15)
        assert np.allclose(w.F1(t), cos_pnorm(w.spec.p_prime) / math.pi * 2 ** -3.0 * np.cos(2 * t))

    def test_antiperiodic(self):
        w = build_witness(spec(3, INF, beta=0.3))
        t = np.linspace(0, 2, 17)
        assert np.allclose(w.f(t + math.pi / 3), -w.f(t), atol=1e-15)

    def test_best_approximation_is_zero(self):
        w = build_witness(spec(2, INF))
        res = remez_trig(w.f, 2)
        assert np.isclose(res.value, sup_norm(w.f), rtol=1e-10)
        assert res.best.max_coefficient() < 1e-9

    def test_vallee_poussin_below_value(self):
        for p in (1, 2, INF):
            w = build_witness(spec(4, p))
            assert vallee_poussin_lower(w) <= sup_norm(w.f) * (1 + 1e-12)

    def test_refuses_when_tail_dominates(self):
        with pytest.raises(HypothesisViolation):
            build_witness(WitnessSpec(1, 2, PowerLaw(1.5)))

    def test_refuses_wide_delta(self):
        # admissible, but a wide spike loses too much of the first harmonic
        from convapprox.series import Table
        psi = Table([1.0, 0.95])
        n = 1
        assert psi_tail(psi, n) < psi_value(psi, n)
        with pytest.raises(HypothesisViolation):
            build_witness(WitnessSpec(n, 1, psi, delta=1.5))

    def test_default_delta_budget(self):
        psi = PowerLaw(3)
        d = default_delta(2, psi)
        tail, psi_n = psi_tail(psi, 2), psi_value(psi, 2)
        assert one_minus_sinc(d / 2) * psi_n <= 0.5 * min(tail, psi_n - tail)

    def test_varying_beta(self):
        w = build_witness(WitnessSpec(2, INF, PowerLaw(3), BetaList([0, 0.5, 1])))
        assert np.isclose(w.points[0], 0.5 * math.pi / 4)

    def test_alternation_lower_bound(self):
        assert np.isclose(alternation_lower_bound(lambda t: np.cos(2 * t), np.arange(4) * math.pi / 2 + 0.1), math.cos(0.2))
        from convapprox.errors import CertificationError
        with pytest.raises(CertificationError):
            alternation_lower_bound(np.cos, np.array([0.0, 0.1, 3.0, 3.1]))
