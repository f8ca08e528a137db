"""Scalar special functions: Ein, complex Gamma, and the Q_n generating series."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import EinOverflowError, GammaPoleError, ValidationError
from .quadrature import adaptive_gk

EULER_GAMMA = 0.57721566490153286060651209008240243

# |z| below this uses the Taylor series; above it the E1 route.  The series
# loses about log10(e^|z|) digits to cancellation, so keep it small.
EIN_SERIES_RADIUS = 2.0
_EIN_TERMS = 34
_EIN_OVERFLOW = 700.0


def _ein_series(z):
    # sum_{k>=1} (-1)^(k+1) z^k / (k k!), nested from the tail
    acc = np.zeros_like(z)
    for k in range(_EIN_TERMS, 0, -1):
        acc = z * (((-1) ** (k + 1)) / (k * math.factorial(k)) + acc)
    return acc


def ein(z):
    """Entire exponential integral ``Ein(z) = int_0^z (1 - e^-t)/t dt``.

    Accepts scalars or arrays.  Real input gives real output.  Raises
    :class:`EinOverflowError` when ``Re z < -700``.
    """
    arr = np.asarray(z)
    is_real = not np.iscomplexobj(arr)
    zc = arr.astype(complex)
    if np.any(zc.real < -_EIN_OVERFLOW):
        raise EinOverflowError(f"Ein overflows for Re z < -{_EIN_OVERFLOW:g}")
    out = np.empty_like(zc)
    small = np.abs(zc) <= EIN_SERIES_RADIUS
    out[small] = _ein_series(zc[small])
    big = ~small
    neg_axis = big & (zc.imag == 0) & (zc.real < 0)
    rest = big & ~neg_axis
    if np.any(neg_axis):
        x = -zc.real[neg_axis]
        out[neg_axis] = EULER_GAMMA + np.log(x) - sp.expi(x)
    if np.any(rest):
        w = zc[rest]
        if is_real:
            out[rest] = EULER_GAMMA + np.log(w.real) + sp.exp1(w.real)
        else:
            out[rest] = EULER_GAMMA + np.log(w) + sp.exp1(w)
    if is_real:
        out = out.real
    if np.ndim(z) == 0:
        return out[()] if is_real else complex(out[()])
    return out


def nearest_integer(z, tol=1e-9):
    """Return the integer within ``tol`` of the complex number ``z``, or None."""
    z = complex(z)
    n = round(z.real)
    if abs(z - n) <= tol:
        return int(n)
    return None


def gamma_c(z) -> complex:
    """Complex Gamma function; raises :class:`GammaPoleError` at 0, -1, -2, ..."""
    z = complex(z)
    n = nearest_integer(z, 1e-14)
    if n is not None and n <= 0:
        raise GammaPoleError(n)
    return complex(sp.gamma(z))


def rgamma_c(z) -> complex:
    """``1/Gamma(z)``, entire; exactly zero at the poles of Gamma."""
    z = complex(z)
    n = nearest_integer(z, 1e-14)
    if n is not None and n <= 0:
        return 0j
    return complex(sp.rgamma(z))


def binom_general(beta, n: int) -> complex:
    """Generalized binomial coefficient ``binom(beta, n)`` as a finite product.

    Exactly zero when beta is a non-negative integer smaller than n; no
    Gamma poles are touched for negative integer beta.
    """
    beta = complex(beta)
    k = nearest_integer(beta, 0.0)
    if k is not None and 0 <= k < n:
        return 0j
    out = 1 + 0j
    for i in range(n):
        out *= (beta - i) / (i + 1)
    return out


@dataclass(frozen=True)
class PowerSeriesCoeffs:
    """Taylor coefficients ``c_0..c_N`` about z = 0 (``c_k = f^(k)(0)/k!``)."""

    coeffs: np.ndarray

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def derivatives(self) -> np.ndarray:
        """``f^(k)(0)`` for k = 0..N, i.e. ``k! c_k``."""
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.coeffs * fact


def qn_coeffs(params, u, N: int, sign: int = 1) -> PowerSeriesCoeffs:
    """Taylor coefficients of ``exp{u z - sign * sum_j alpha_j int_0^z (e^{v_j t}-1)/t dt}``.

    ``Q_n(u, sign*b) = n! * coeffs[n]``.  The exponent's series is
    ``g(z) = sum_k g_k z^k`` with ``g_1 = u - sign*sum alpha_j v_j`` and
    ``g_k = -sign*sum alpha_j v_j^k/(k k!)``; the exponential follows from
    ``n c_n = sum_{k=1}^n k g_k c_{n-k}``.
    """
    if N < 0:
        raise ValidationError(f"series order must be non-negative, got {N}")
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    if N > 60:
        warnings.warn(
            f"Q_n for n up to {N}: factorial growth makes n! c_n inaccurate in double precision",
            RuntimeWarning,
            stacklevel=2,
        )
    alphas = np.asarray(params.b, dtype=complex)
    shifts = np.asarray(params.shifts[1:], dtype=float)
    g = np.zeros(N + 1, dtype=complex)
    for k in range(1, N + 1):
        g[k] = -sign * np.sum(alphas * shifts**k) / (k * math.factorial(k))
    if N >= 1:
        g[1] += u
    c = np.zeros(N + 1, dtype=complex)
    c[0] = 1.0
    kg = np.arange(N + 1) * g
    for n in range(1, N + 1):
        c[n] = np.dot(kg[1 : n + 1], c[n - 1 :: -1][:n]) / n
    return PowerSeriesCoeffs(c)


def qn_values(params, u, N: int, sign: int = 1) -> np.ndarray:
    """``[Q_0(u, sign*b), ..., Q_N(u, sign*b)]``."""
    return qn_coeffs(params, u, N, sign).derivatives()


def exp_power_integral(u: float, r: float, lam: float) -> float:
    """``int_1^u e^(lam t) t^(-r) dt`` by adaptive quadrature."""
    if u <= 1:
        return 0.0
    res = adaptive_gk(lambda t: np.exp(lam * t) * t ** (-r), 1.0, u, abs_tol=1e-300, rel_tol=1e-12)
    return float(np.real(res.value))


def exp_power_bound(u: float, r: float, lam: float) -> float:
    """``e^(lam u) u^(-r) / (lam - max(r, 0))``, an upper bound for :func:`exp_power_integral` when ``lam > max(r, 0)``."""
    rp = max(r, 0.0)
    if not lam > rp:
        raise ValidationError(f"need lam > max(r, 0), got lam={lam}, r={r}")
    return math.exp(lam * u) * u ** (-r) / (lam - rp)
