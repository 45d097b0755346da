"""Independent reference computations used by the tests.

Everything here goes through scipy or brute-force summation so that it shares
no code with the package.
"""

import math

import numpy as np
from scipy import integrate, special


def power_tail(r, n):
    """sum_{k>n} k^-r via the Hurwitz zeta function."""
    return float(special.zeta(r, n + 1))


def exp_tail(alpha, r, n, terms=2000):
    k = np.arange(n + 1, n + 1 + terms, dtype=float)
    return math.fsum(np.exp(-alpha * k ** r)[::-1])


def cos_pnorm(q):
    """(int_0^{2pi} |cos t|^q dt)^(1/q) by adaptive quadrature on quarter periods."""
    val, _ = integrate.quad(lambda t: np.cos(t) ** q, 0, math.pi / 2, epsabs=1e-300, epsrel=1e-13, limit=200)
    return (4 * val) ** (1 / q)


def ellipk(q):
    """int_0^{pi/2} (1 - q^2 sin^2)^(-1/2) by adaptive quadrature."""
    val, _ = integrate.quad(lambda th: 1 / math.sqrt(1 - (q * math.sin(th)) ** 2), 0, math.pi / 2,
                            epsabs=1e-300, epsrel=1e-13, limit=200)
    return val


def cos_power_harmonic(q, j):
    """(1/pi) int_0^{2pi} |cos u|^q sign(cos u) cos(j u) du for odd j.

    Uses int_0^{pi/2} cos^q u cos(ju) du = pi Gamma(q+1) / (2^(q+1) Gamma((q+j)/2+1) Gamma((q-j)/2+1));
    for odd j the integrand has the same integral over each quarter period.
    """
    logabs = (math.log(math.pi) + math.lgamma(q + 1) - (q + 1) * math.log(2)
              - math.lgamma((q + j) / 2 + 1))
    rg = special.rgamma((q - j) / 2 + 1)
    quarter = math.exp(logabs) * rg
    return 4 * quarter / math.pi


def minimax_lp(fvals, t, n):
    """Discrete minimax error of trig polynomials of order n-1 on the grid t (linear program)."""
    from scipy.optimize import linprog

    k = np.arange(1, n)
    basis = np.hstack([np.ones((t.size, 1)), np.cos(np.outer(t, k)), np.sin(np.outer(t, k))])
    m = basis.shape[1]
    c = np.zeros(m + 1)
    c[-1] = 1.0
    ones = np.ones((t.size, 1))
    a_ub = np.vstack([np.hstack([basis, -ones]), np.hstack([-basis, -ones])])
    b_ub = np.concatenate([fvals, -fvals])
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * m + [(0, None)], method="highs")
    return res.fun
