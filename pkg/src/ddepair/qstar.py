"""The canonical solution q* of ``u q'(u) = sum_j alpha_j q(u + v_j)``.

Three representations:

* polynomial: ``beta = n`` a non-negative integer gives ``q* = Q_n(u, b)``;
* Laplace integral (``Re beta < 0``)::

      q*(u) = 1/Gamma(-beta) int_0^inf x^(-beta-1) exp{-u x + sum_j alpha_j Ein(v_j x)} dx

* Hankel contour (everything else)::

      q*(u) = Gamma(beta+1)/(2 pi i) int_H z^(-beta-1) exp{u z + sum_j alpha_j Ein(-v_j z)} dz

The ``*_many`` variants integrate a whole vector of ``u`` values on one
adaptive mesh, which keeps finite differences across nearby ``u`` smooth.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import exp1

from .errors import RepresentationError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, adaptive_gk, gauss_legendre
from .special import EULER_GAMMA, ein, gamma_c, nearest_integer, qn_values, rgamma_c

INTEGER_BETA_TOL = 1e-9
_NEAR_INTEGER_WARN = 1e-6

__all__ = [
    "QuadratureConfig",
    "QstarValue",
    "qstar",
    "qstar_many",
    "qstar_laplace",
    "qstar_hankel",
    "qstar_polynomial",
    "dde_residual",
    "integral_form_constant",
]


@dataclass(frozen=True)
class QstarValue:
    value: complex
    representation_used: str
    est_error: float


def polynomial_degree(params) -> int | None:
    """``n`` if beta is (within 1e-9) the non-negative integer n, else None."""
    n = nearest_integer(params.beta, INTEGER_BETA_TOL)
    return n if n is not None and n >= 0 else None


def _exponent_sum(params, x):
    """``sum_{j>=1} alpha_j Ein(v_j x)`` on a 1-d array of abscissae."""
    out = np.zeros(np.shape(x), dtype=complex)
    for al, v in zip(params.b, params.shifts[1:]):
        out += al * ein(v * x)
    return out


def _laplace_cutoff(params, u_min, abs_tol):
    # integrand ~ x^(-Re alpha_0 - 1) e^(-u x) prod (v_j e^gamma)^(Re alpha_j) at large x
    p = -params.alpha0.real - 1.0
    logc = sum(al.real * (math.log(v) + EULER_GAMMA) for al, v in zip(params.b, params.shifts[1:]))
    X = max(1.0, 2.0 * p / u_min)
    target = math.log(abs_tol) - 5.0
    while True:
        rate = u_min - max(p, 0.0) / X
        if rate > 0:
            # Ein(y) = gamma + log y + E1(y), E1 > 0 decreasing
            slack = sum(max(al.real, 0.0) * float(exp1(v * X)) for al, v in zip(params.b, params.shifts[1:]))
            log_tail = p * math.log(X) - u_min * X + logc + slack - math.log(rate)
            if log_tail < target:
                return X
        X *= 1.25


def _laplace_many(params, us, cfg):
    beta = params.beta
    if not beta.real < 0:
        raise RepresentationError(
            f"Laplace representation needs Re(beta) < 0, got beta = {beta}", hint="hankel"
        )
    us = np.asarray(us, dtype=float)
    X = cfg.laplace_cutoff or _laplace_cutoff(params, float(us.min()), cfg.abs_tol)
    pref = rgamma_c(-beta)
    s = -beta - 1.0

    def plain(x):
        base = s * np.log(x) + _exponent_sum(params, x)
        return np.exp(base[None, :] - us[:, None] * x[None, :])

    # x = t^k on [0, x1] removes the x^(-beta-1) endpoint singularity when -1 < Re beta < 0
    k = 1.0 / -beta.real if beta.real > -1.0 else 1.0
    x1 = min(1.0, X)

    def substituted(t):
        t = np.maximum(t, 1e-300)
        x = t**k
        base = (s * k + (k - 1.0)) * np.log(t) + _exponent_sum(params, x) + math.log(k)
        return np.exp(base[None, :] - us[:, None] * x[None, :])

    kw = dict(abs_tol=cfg.abs_tol / 2, rel_tol=cfg.rel_tol, max_subdivisions=cfg.max_subdivisions)
    head = adaptive_gk(substituted, 0.0, x1 ** (1.0 / k), **kw)
    total, err = head.value, head.error
    if X > x1:
        tail = adaptive_gk(plain, x1, X, **kw)
        total = total + tail.value
        err += tail.error
    return pref * total, abs(pref) * err


def _hankel_many(params, us, cfg):
    beta = params.beta
    n = nearest_integer(beta, INTEGER_BETA_TOL)
    if n is not None and n >= 0:
        raise RepresentationError(
            f"beta = {beta} is a non-negative integer; q* is the polynomial Q_{n}", hint="polynomial"
        )
    if n is not None:
        raise RepresentationError(
            f"Gamma(beta+1) has a pole at beta = {n}; use the Laplace representation", hint="laplace"
        )
    k = nearest_integer(beta, _NEAR_INTEGER_WARN)
    if k is not None:
        warnings.warn(
            f"beta = {beta} is within {_NEAR_INTEGER_WARN:g} of the integer {k}; the Hankel value is ill-conditioned",
            RuntimeWarning,
            stacklevel=3,
        )
    us = np.asarray(us, dtype=float)
    u_min, u_max = float(us.min()), float(us.max())
    rho = cfg.hankel_radius or min(1.0, 1.0 / u_max)
    L = cfg.hankel_ray_length or _ray_length(params, u_min, rho, cfg.abs_tol)
    s = -beta - 1.0

    def rays(x):
        # lower side: log z = log x - i pi, traversed inward; upper side: log x + i pi, outward
        common = _exponent_sum(params, x)
        logx = np.log(x)
        lower = np.exp(s * (logx - 1j * np.pi) + common)
        upper = np.exp(s * (logx + 1j * np.pi) + common)
        return (lower - upper)[None, :] * np.exp(-us[:, None] * x[None, :])

    def circle(theta):
        z = rho * np.exp(1j * theta)
        base = s * (math.log(rho) + 1j * theta) + _exponent_sum(params, -z)
        vals = np.exp(base[None, :] + us[:, None] * z[None, :])
        return vals * (1j * z)[None, :]

    kw = dict(abs_tol=cfg.abs_tol / 2, rel_tol=cfg.rel_tol, max_subdivisions=cfg.max_subdivisions)
    ray = adaptive_gk(rays, rho, L, **kw)
    circ = adaptive_gk(circle, -np.pi, np.pi, **kw)
    pref = gamma_c(beta + 1.0) / (2j * np.pi)
    return pref * (ray.value + circ.value), abs(pref) * (ray.error + circ.error)


def _ray_length(params, u_min, rho, abs_tol):
    sum_re = sum(abs(al.real) for al in params.b)
    power = abs(params.beta.real) + 1.0 + sum_re
    logc = EULER_GAMMA * sum_re + sum(abs(al.real) * math.log(v) for al, v in zip(params.b, params.shifts[1:]))
    target = math.log(abs_tol) - 5.0
    L = rho + 1.0
    while -u_min * L + power * math.log(L) + logc > target:
        L *= 1.25
    return L


def qstar_laplace(params, u: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """q*(u) from the Laplace integral (``Re beta < 0``)."""
    val, _ = _laplace_many(params, [u], cfg)
    return complex(val[0])


def qstar_hankel(params, u: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """q*(u) from the Hankel contour: circle ``|z| = rho`` plus the two rays along the cut."""
    val, _ = _hankel_many(params, [u], cfg)
    return complex(val[0])


def qstar_polynomial(params, u):
    n = polynomial_degree(params)
    if n is None:
        raise RepresentationError(f"beta = {params.beta} is not a non-negative integer")
    u = np.asarray(u, dtype=float)
    return np.array([qn_values(params, x, n)[n] for x in u.ravel()]).reshape(u.shape)


def representation_for(params) -> str:
    if polynomial_degree(params) is not None:
        return "polynomial"
    if params.beta.real < 0:
        return "laplace"
    return "hankel"


def qstar_many(params, us: Sequence[float], cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Evaluate q* at every ``u`` in ``us``; returns ``(values, est_error, representation)``."""
    us = np.atleast_1d(np.asarray(us, dtype=float))
    if np.any(us <= 0):
        raise RepresentationError("q* is defined for u > 0 only")
    rep = representation_for(params)
    if rep == "polynomial":
        return qstar_polynomial(params, us), 0.0, rep
    if rep == "laplace":
        vals, err = _laplace_many(params, us, cfg)
    else:
        vals, err = _hankel_many(params, us, cfg)
    return vals, float(err), rep


def qstar(params, u: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> QstarValue:
    """q*(u), dispatching on beta: polynomial, Laplace (Re beta < 0) or Hankel."""
    vals, err, rep = qstar_many(params, [u], cfg)
    return QstarValue(complex(vals[0]), rep, err)


def dde_residual(params, u: float, h: float = 1e-3, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``|u q*'(u) - sum_j alpha_j q*(u + v_j)|`` with a 5-point central difference."""
    if not (u > h > 0):
        raise RepresentationError("dde_residual needs u > h > 0")
    n = polynomial_degree(params)
    if n is not None:
        # exact: d/du Q_n(u, b) = n Q_{n-1}(u, b); differencing would only add rounding
        deriv = n * qn_values(params, u, n)[n - 1] if n > 0 else 0.0
        rhs = sum(al * qn_values(params, u + v, n)[n] for al, v in zip(params.alphas, params.shifts))
        return float(abs(u * deriv - rhs))
    stencil = u + h * np.array([-2.0, -1.0, 1.0, 2.0])
    shifted = u + np.asarray(params.shifts)
    vals, _, _ = qstar_many(params, np.concatenate([stencil, shifted]), cfg)
    fm2, fm1, fp1, fp2 = vals[:4]
    deriv = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    rhs = np.dot(np.asarray(params.alphas), vals[4:])
    return float(abs(u * deriv - rhs))


def integral_form_constant(params, u_grid: Sequence[float], cfg: QuadratureConfig = DEFAULT_CONFIG, nodes: int = 24):
    """``A(u) = u q*(u) - sum_j c_j int_{v_{j-1}}^{v_j} q*(u+t) dt`` with ``c_j = sum_{i>=j} alpha_i``.

    Returns ``(mean A, max |A(u) - mean|)``.  The integrated form comes from
    telescoping ``(u q)'`` and is only constant when beta = -1; otherwise a
    RuntimeWarning is issued and the deviation reports the u-dependence.
    """
    grid = np.asarray(u_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(grid <= 0):
        raise RepresentationError("u_grid needs at least two positive points")
    if nearest_integer(params.beta, INTEGER_BETA_TOL) != -1:
        warnings.warn("integrated form applies only to beta = -1", RuntimeWarning, stacklevel=2)
    alphas = np.asarray(params.alphas)
    c = np.cumsum(alphas[::-1])[::-1][1:]  # c_j for j = 1..m
    x, w = gauss_legendre(nodes)
    pts, wts, owners = [grid], [], []
    for j in range(1, params.m + 1):
        lo, hi = params.shifts[j - 1], params.shifts[j]
        t = lo + (hi - lo) * x
        pts.append((grid[:, None] + t[None, :]).ravel())
        wts.append(c[j - 1] * (hi - lo) * w)
    allvals, _, _ = qstar_many(params, np.concatenate(pts), cfg)
    n = len(grid)
    A = grid * allvals[:n]
    offset = n
    for wj in wts:
        block = allvals[offset : offset + n * nodes].reshape(n, nodes)
        A = A - block @ wj
        offset += n * nodes
    mean = complex(np.mean(A))
    return mean, float(np.max(np.abs(A - mean)))
