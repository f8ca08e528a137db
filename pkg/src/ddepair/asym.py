"""Asymptotic and limiting formulas.

For large u:

    p(u) ~ sum_n (-1)^n/n! * Q_n(0, -b)/Gamma(-beta - n) * u^(-beta-1-n)
    q(u) ~ sum_n binom(beta, n) * Q_n(0, b) * u^(beta - n)

and for small u (``Re alpha_0 < 0``)

    q(u) ~ u^alpha_0 * Gamma(-alpha_0)/Gamma(-beta) * prod_j (v_j e^gamma)^alpha_j.

When beta is a negative integer the p-series terminates: p agrees with the
polynomial ``r_beta`` up to a superexponentially small error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError, ValidationError
from .special import binom_general, gamma_c, nearest_integer, qn_values, rgamma_c


@dataclass(frozen=True)
class AsymptoticSeries:
    """``sum_n c_n u^(lead - n)`` truncated after ``N`` terms.

    ``coefficients`` holds ``c_0..c_N``: one more than the partial sum uses,
    so the first omitted term is available as an error estimate.
    ``phi_scale`` is ``1/v_m`` when beta is an integer, in which case the
    remainder is ``O(exp(-phi(u)))`` with ``phi(u) = phi_scale * u log u + O(u)``.
    """

    coefficients: np.ndarray
    lead: complex
    N: int
    kind: str
    phi_scale: float | None = None

    def term(self, n: int, u):
        u = np.asarray(u, dtype=float)
        return self.coefficients[n] * u ** (self.lead - n)

    def evaluate(self, u, N: int | None = None):
        N = self.N if N is None else N
        if N > len(self.coefficients):
            raise ValidationError(f"series holds {len(self.coefficients)} coefficients, asked for {N}")
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape, dtype=complex)
        for n in range(N):
            out = out + self.term(n, u)
        return out if out.ndim else complex(out)

    def error_estimate(self, u, N: int | None = None) -> float:
        N = self.N if N is None else N
        return float(np.max(np.abs(self.term(N, u))))

    def phi(self, u):
        if self.phi_scale is None:
            return None
        return self.phi_scale * u * math.log(u)

    def optimal_truncation(self, u: float) -> int:
        """The N in ``1..len-1`` minimising ``|term(N)|``."""
        mags = [abs(complex(self.term(n, u))) for n in range(1, len(self.coefficients))]
        return 1 + int(np.argmin(mags))


def _integer_beta_phi(params):
    return 1.0 / params.vm if nearest_integer(params.beta, 1e-12) is not None else None


def p_series(params, N: int = 4) -> AsymptoticSeries:
    """Large-u expansion of p(u, a, b): coefficients ``c_0..c_N``.

    ``1/Gamma(-beta - n)`` is taken as the entire reciprocal, so ``c_n`` is
    exactly zero for integer ``beta >= -n``.
    """
    if N < 1:
        raise ValidationError("N must be at least 1")
    Q = qn_values(params, 0.0, N, sign=-1)
    beta = params.beta
    c = np.array(
        [(-1) ** n / math.factorial(n) * Q[n] * rgamma_c(-beta - n) for n in range(N + 1)],
        dtype=complex,
    )
    return AsymptoticSeries(c, -beta - 1, N, "p", _integer_beta_phi(params))


def r_beta_poly(params) -> Polynomial:
    """The polynomial that p(u) equals up to ``O(exp(-phi(u)))`` when beta is a negative integer.

    Coefficients in ascending powers of u; degree ``-beta - 1``.
    """
    k = nearest_integer(params.beta, 1e-12)
    if k is None or k >= 0:
        raise DomainError(f"r_beta needs beta a negative integer, got {params.beta}")
    deg = -k - 1
    Q = qn_values(params, 0.0, deg, sign=-1)
    coef = np.zeros(deg + 1, dtype=complex)
    for n in range(deg + 1):
        coef[deg - n] = (-1) ** n / math.factorial(n) * Q[n] / math.factorial(deg - n)
    if np.all(coef.imag == 0):
        coef = coef.real
    return Polynomial(coef)


def q_series(params, N: int = 4) -> AsymptoticSeries:
    """Large-u expansion of q*: coefficients ``binom(beta, n) Q_n(0, b)`` for n = 0..N."""
    if N < 1:
        raise ValidationError("N must be at least 1")
    Q = qn_values(params, 0.0, N, sign=1)
    c = np.array([binom_general(params.beta, n) * Q[n] for n in range(N + 1)], dtype=complex)
    return AsymptoticSeries(c, params.beta, N, "q", _integer_beta_phi(params))


def q_series_inf(params, u: float, N: int) -> complex:
    """Partial sum ``sum_{n<N} binom(beta, n) Q_n(0, b) u^(beta - n)``."""
    if not u > 0:
        raise ValidationError("u must be positive")
    s = q_series(params, N)
    if N == 1:
        # leading term exactly; avoids any roundoff in u**beta * 1
        return complex(u ** params.beta)
    return complex(s.evaluate(u))


def q_zero_asym(params) -> tuple[complex, complex]:
    """``(alpha_0, K)`` with ``q*(u) ~ K u^alpha_0`` as ``u -> 0+``; needs ``Re alpha_0 < 0``."""
    a0 = params.alpha0
    if not a0.real < 0:
        raise DomainError(f"the small-u law is only established for Re(alpha_0) < 0 (got {a0})")
    # prod_j (v_j e^gamma)^alpha_j is 1/c0
    return a0, gamma_c(-a0) * rgamma_c(-params.beta) / params.c0


def p_zero_coefficient(params) -> complex:
    """``Gamma(-beta)/Gamma(-alpha_0) prod_j (v_j e^gamma)^(-alpha_j)``: p-hat's ``u^(-alpha_0-1)`` coefficient on (0, v_1]."""
    return gamma_c(-params.beta) * rgamma_c(-params.alpha0) * params.c0
