"""The adjoint pairing of the advanced and retarded equations.

For q solving ``u q'(u) = sum_j alpha_j q(u + v_j)`` and p solving
``(u p(u))' = -sum_j alpha_j p(u - v_j)`` with the same coefficients,

    A(u) = u p(u) q(u) - sum_{j>=1} alpha_j int_{u - v_j}^u p(t) q(t + v_j) dt

is constant: differentiating, the boundary terms of the integrals cancel
both equations exactly.  With ``p_hat = Gamma(-beta) p(u, a, b)`` and
``q = q*`` the constant is 1, and ``u p_hat q*`` tends to 1 at both ends.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import DomainError, NormalizationError, ValidationError
from .pfun import p_solution
from .qstar import qstar_many
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .special import gamma_c, nearest_integer

_WINDOW_DEGREE = 24


@dataclass(frozen=True)
class AdjointReport:
    grid: np.ndarray
    A_estimates: np.ndarray
    A_mean: complex
    max_dev: float
    limit_at_zero: complex | None = None
    limit_at_inf: complex | None = None


@dataclass(frozen=True)
class UpqLimits:
    limit_zero: complex | None
    zero_covered: bool
    limit_inf: complex
    limit_inf_richardson: complex
    U: float


def normalization(params, bypass: bool = False) -> complex:
    """``Gamma(-beta)``, the factor turning p(u, a, b) into the partner of q*."""
    if bypass:
        return 1.0 + 0j
    n = nearest_integer(params.beta, 1e-9)
    if n is not None and n >= 0:
        raise NormalizationError(
            f"beta = {params.beta} is a non-negative integer: Gamma(-beta) has a pole, so p cannot be normalised"
        )
    return gamma_c(-params.beta)


def _complex_median(z):
    z = np.asarray(z)
    return complex(np.median(z.real), np.median(z.imag))


def adjoint_terms(params, u_grid, sol=None, cfg: QuadratureConfig = DEFAULT_CONFIG, bypass_normalization=False):
    """``A(u)`` on ``u_grid``; returns ``(A, solution)``.

    q* is interpolated on each window ``[u - v_j + v_j, u + v_j]`` by a
    Chebyshev series (it is smooth there), so one vectorised q* call serves
    every window; the p side is integrated panel by panel.
    """
    grid = np.atleast_1d(np.asarray(u_grid, dtype=float))
    if np.any(grid <= params.vm):
        raise ValidationError(f"grid points must exceed v_m = {params.vm}")
    gam = normalization(params, bypass_normalization)
    if sol is None:
        sol = p_solution(params, float(grid.max()), cfg)
    t, _ = np.polynomial.chebyshev.chebgauss(_WINDOW_DEGREE + 1)
    windows = [(u, j) for u in grid for j in range(1, params.m + 1)]
    pts = [grid]
    for u, j in windows:
        v = params.shifts[j]
        pts.append(u + (t + 1.0) * v / 2.0)  # q*(x) for x in [u, u + v]
    allpts = np.concatenate(pts)
    qvals, _, _ = qstar_many(params, allpts, cfg)
    q_at = qvals[: len(grid)]
    out = np.empty(len(grid), dtype=complex)
    for i, u in enumerate(grid):
        out[i] = u * sol(u) * q_at[i]
    off = len(grid)
    for u, j in windows:
        v = params.shifts[j]
        al = params.alphas[j]
        vals = qvals[off : off + len(t)]
        off += len(t)
        coef = C.chebfit(t, vals, _WINDOW_DEGREE)

        def weight(s, coef=coef, u=u, v=v):
            # s in [u - v, u]  ->  q*(s + v), with s + v mapped onto [-1, 1] over [u, u + v]
            return C.chebval(2.0 * (s + v - u) / v - 1.0, coef)

        i = int(np.flatnonzero(grid == u)[0])
        out[i] -= al * sol.integrate(weight, u - v, u)
    return gam * out, sol


def adjoint_constant(
    params,
    u_grid,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    bypass_normalization: bool = False,
    sol=None,
    with_limits: bool = False,
) -> AdjointReport:
    """Estimate the adjoint constant on ``u_grid``; see :func:`adjoint_terms`.

    ``A_mean`` is the median of the estimates.  ``bypass_normalization``
    drops the ``Gamma(-beta)`` factor, which allows ``beta = 0`` pairings
    such as Dickman's function with ``q = 1``.
    """
    A, sol = adjoint_terms(params, u_grid, sol, cfg, bypass_normalization)
    mean = _complex_median(A)
    dev = float(np.max(np.abs(A - mean)))
    lim0 = liminf = None
    if with_limits:
        lim = upq_limits(params, cfg)
        lim0, liminf = lim.limit_zero, lim.limit_inf
    return AdjointReport(np.atleast_1d(np.asarray(u_grid, dtype=float)), A, mean, dev, lim0, liminf)


def symbolic_zero_limit():
    """``u * (small-u law of p_hat) * (small-u law of q*)`` simplified symbolically.

    Returns the sympy expression, which reduces to the integer 1 for any
    alpha_0, beta and shift data.
    """
    import sympy as sp

    u, a0, beta, g = sp.symbols("u alpha0 beta gamma", positive=True)
    alphas = sp.symbols("alpha1:4")
    vs = sp.symbols("v1:4", positive=True)
    prod = sp.Mul(*[(v * sp.exp(g)) ** al for al, v in zip(alphas, vs)])
    q_law = u**a0 * sp.gamma(-a0) / sp.gamma(-beta) * prod
    p_law = u ** (-a0 - 1) * sp.gamma(-beta) / sp.gamma(-a0) * sp.Mul(
        *[(v * sp.exp(g)) ** (-al) for al, v in zip(alphas, vs)]
    )
    return sp.simplify(sp.powsimp(u * p_law * q_law, force=True))


def upq_limits(params, cfg: QuadratureConfig = DEFAULT_CONFIG, U_large: float = 60.0, sol=None) -> UpqLimits:
    """Limits of ``u p_hat(u) q*(u)`` at 0+ and at infinity.

    The 0+ limit is the product of the two small-u laws, simplified
    symbolically; it is only covered for ``Re alpha_0 < 0`` and is ``None``
    otherwise.  The limit at infinity is the value at ``U_large`` together
    with a Richardson estimate from ``U_large/2`` assuming a ``1/u``
    correction.
    """
    gam = normalization(params)
    covered = params.alpha0.real < 0
    lim0 = None
    if covered:
        expr = symbolic_zero_limit()
        if expr != 1:
            raise DomainError(f"small-u laws do not telescope: got {expr}")
        lim0 = 1 + 0j
    if sol is None:
        sol = p_solution(params, U_large, cfg)
    us = np.array([U_large / 2, U_large])
    q, _, _ = qstar_many(params, us, cfg)
    f = gam * us * sol(us) * q
    rich = 2 * f[1] - f[0]
    return UpqLimits(lim0, covered, complex(f[1]), complex(rich), U_large)
