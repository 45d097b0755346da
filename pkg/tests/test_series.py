import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from convapprox.errors import ConfigurationError, DivergentTailError, DomainError
from convapprox.series import (
    BetaList, ConstantBeta, ExpPower, KernelSpec, PowerLaw, Table, exp_tail_bound,
    hypothesis_check, kernel_coefficients, kernel_eval, lacunary_tail, power_tail_bound,
    power_tail_bracket, psi_tail, psi_value, truncation_order,
)

import oracles


class TestPsi:
    def test_values(self):
        assert np.isclose(psi_value(PowerLaw(2), 3), 1 / 9)
        assert np.isclose(psi_value(ExpPower(1, 2), 2), math.exp(-4))
        assert np.allclose(psi_value(Table([3, 2, 1]), np.arange(1, 6)), [3, 2, 1, 0, 0])

    def test_index_from_one(self):
        with pytest.raises(DomainError):
            psi_value(PowerLaw(2), 0)

    @pytest.mark.parametrize("bad", [
        lambda: PowerLaw(0), lambda: ExpPower(0, 1), lambda: ExpPower(1, -1), lambda: Table([1, -1]),
    ])
    def test_invalid_parameters(self, bad):
        with pytest.raises(DomainError):
            bad()

    def test_describe(self):
        assert PowerLaw(3).describe() == "power:r=3"
        assert ConstantBeta(1).describe() == "const:1"

    def test_beta_list_repeats_last(self):
        beta = BetaList([0, 1, 2])
        assert np.allclose(beta.values(np.arange(1, 6)), [0, 1, 2, 2, 2])


class TestTail:
    @pytest.mark.parametrize("r,n", [(1.5, 1), (2, 1), (3, 2), (5, 4), (9, 8), (2.2, 50), (16, 4)])
    def test_power_vs_hurwitz_zeta(self, r, n):
        assert np.isclose(psi_tail(PowerLaw(r), n), oracles.power_tail(r, n), rtol=1e-12, atol=1e-300)

    def test_basel(self):
        assert np.isclose(psi_tail(PowerLaw(2), 0), math.pi ** 2 / 6, rtol=1e-14)

    def test_frozen_power_value(self):
        # sum_{k>4} k^-5, frozen from the Hurwitz zeta oracle
        assert np.isclose(psi_tail(PowerLaw(5), 4), 5.859663059213666e-4, rtol=1e-12)

    @pytest.mark.parametrize("alpha,r,n", [(1, 1, 1), (0.3, 1, 2), (1, 2, 2), (0.5, 0.5, 3), (2, 1.5, 1)])
    def test_exp_vs_brute_force(self, alpha, r, n):
        got = psi_tail(ExpPower(alpha, r), n)
        want = oracles.exp_tail(alpha, r, n, terms=200000 if r < 1 else 2000)
        assert np.isclose(got, want, rtol=1e-11)

    def test_geometric_closed_form(self):
        q = math.exp(-0.7)
        assert np.isclose(psi_tail(ExpPower(0.7, 1), 3), q ** 4 / (1 - q), rtol=1e-13)

    def test_table(self):
        assert psi_tail(Table([4, 3, 2, 1]), 2) == 3.0
        assert psi_tail(Table([4, 3]), 5) == 0.0

    def test_divergent(self):
        with pytest.raises(DivergentTailError):
            psi_tail(PowerLaw(1), 3)

    def test_bracket_error_tiny(self):
        value, err = power_tail_bracket(1.5, 1)
        assert err < 1e-15 * value

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1.1, 12), st.integers(1, 40))
    def test_recursion(self, r, n):
        psi = PowerLaw(r)
        assert np.isclose(psi_tail(psi, n - 1), psi_value(psi, n) + psi_tail(psi, n), rtol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.2, 3), st.floats(1.0, 3), st.integers(1, 6))
    def test_exp_tail_below_bound(self, alpha, r, n):
        psi = ExpPower(alpha, r)
        if r > 1:
            assert psi_tail(psi, n) <= exp_tail_bound(n, alpha, r) * (1 + 1e-12)

    def test_power_tail_bound(self):
        for n in (2, 4, 8):
            assert psi_tail(PowerLaw(n + 1), n) < power_tail_bound(n, n + 1)

    def test_lacunary(self):
        psi = PowerLaw(3)
        want = sum((i * 2) ** -3.0 for i in range(4, 200000))
        assert np.isclose(lacunary_tail(psi, 2, 3), want, rtol=1e-9)
        psi = ExpPower(1, 2)
        want = sum(math.exp(-(i * 3) ** 2) for i in range(2, 10))
        assert np.isclose(lacunary_tail(psi, 3, 1), want, rtol=1e-13)
        assert lacunary_tail(Table([1, 2, 3, 4, 5, 6]), 2, 1) == 10.0


class TestHypotheses:
    def test_tail_dominance(self):
        check = hypothesis_check(PowerLaw(5), 4, "2")
        assert check.holds and np.isclose(check.rhs, 4 ** -5.0)
        assert not hypothesis_check(PowerLaw(1.5), 1, "2")

    def test_power_margin(self):
        check = hypothesis_check(PowerLaw(5), 4, "18")
        assert check.holds
        assert np.isclose(check.lhs, 0.32768) and np.isclose(check.rhs, 1 / 2.25)

    def test_exp_margin(self):
        check = hypothesis_check(ExpPower(1, 2), 2, "25_25")
        assert check.holds and np.isclose(check.lhs, 1.25 * math.exp(-4))

    def test_ratio(self):
        check = hypothesis_check(PowerLaw(2), 3, "17")
        assert not check.holds and np.isclose(check.lhs, 9 / 16)
        assert hypothesis_check(ExpPower(1, 2), 3, "17").holds
        assert not hypothesis_check(ExpPower(1, 1), 3, "17").holds

    def test_incompatible_family(self):
        with pytest.raises(ConfigurationError):
            hypothesis_check(ExpPower(1, 2), 2, "18")
        with pytest.raises(ConfigurationError):
            hypothesis_check(PowerLaw(3), 2, "25_25")
        with pytest.raises(ConfigurationError):
            hypothesis_check(PowerLaw(3), 2, "99")


class TestKernel:
    def test_power_two_closed_form(self):
        t = np.linspace(0, 2 * np.pi, 9)
        want = np.pi ** 2 / 6 - np.pi * t / 2 + t ** 2 / 4
        # truncation error is bounded by the tail, about 1/N for r = 2
        got = kernel_eval(KernelSpec(PowerLaw(2), ConstantBeta(0), 1e-6), t)
        assert np.allclose(got, want, atol=1e-6)

    @pytest.mark.parametrize("beta", [0.0, 1.0])
    def test_poisson_closed_form(self, beta):
        alpha = 0.5
        t = np.linspace(0.1, 6, 11)
        z = math.exp(-alpha) * np.exp(1j * t)
        s = z / (1 - z)
        want = s.real if beta == 0 else s.imag
        got = kernel_eval(KernelSpec(ExpPower(alpha, 1), ConstantBeta(beta), 1e-14), t)
        assert np.allclose(got, want, atol=1e-12)

    def test_at_zero(self):
        got = kernel_eval(KernelSpec(ExpPower(1, 1)), 0.0)
        assert np.isclose(got, 1 / (math.e - 1), atol=1e-12)

    def test_coefficients(self):
        coefs = kernel_coefficients(KernelSpec(PowerLaw(2), ConstantBeta(1)), 3)
        assert len(coefs) == 3
        assert np.isclose(coefs[1][0], 0.25)

    def test_divergent_kernel(self):
        with pytest.raises(DivergentTailError):
            kernel_eval(KernelSpec(PowerLaw(1)), 0.5)

    def test_truncation_order_guard(self):
        with pytest.raises(DomainError):
            truncation_order(PowerLaw(1.01), 1e-15)
