"""Non-canonical solutions of ``(u q(u))' = kappa q(u) - kappa q(u + 1)``.

Solved forward, ``q(u + 1) = ((kappa - 1) q(u) - u q'(u)) / kappa`` maps a
polynomial piece on ``[T, T+1]`` to a polynomial piece of the same degree on
``[T+1, T+2]``.  Any seed other than a multiple of the canonical solution
develops sign changes and outgrows every exponential; extending a fit of
the canonical solution itself shows how fast fit errors are amplified.
Solved backward (decreasing u), the same equations are well conditioned;
:func:`backward_extend` handles general shifts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import chebyshev as C

from .errors import CoefficientOverflowError, DomainError, ValidationError

SAMPLES_PER_UNIT = 256


@dataclass(frozen=True)
class PiecewisePoly:
    """Pieces ``(a, b, c)`` meaning ``sum_k c[k] (u - a)^k`` on ``[a, b)``."""

    pieces: tuple

    @property
    def degree(self) -> int:
        return max(len(c) for _, _, c in self.pieces) - 1

    @property
    def start(self) -> float:
        return self.pieces[0][0]

    @property
    def end(self) -> float:
        return self.pieces[-1][1]

    @classmethod
    def single(cls, a, b, coeffs):
        return cls(((float(a), float(b), np.asarray(coeffs, dtype=float)),))

    @classmethod
    def fit(cls, f, a, b, degree, samples=200):
        """Least-squares fit of ``f`` on ``[a, b]`` by a degree-``degree`` polynomial centred at a."""
        x = np.linspace(a, b, samples)
        p = Polynomial.fit(x - a, np.real(f(x)), degree).convert()
        coef = np.zeros(degree + 1)
        coef[: len(p.coef)] = p.coef
        return cls.single(a, b, coef)

    @classmethod
    def bump(cls, T, order=4):
        """``(u - T)^order (T + 1 - u)^order`` on ``[T, T+1]``."""
        p = Polynomial([0, 1]) ** order * Polynomial([1, -1]) ** order
        return cls.single(T, T + 1, p.coef)

    def piece_index(self, u):
        lefts = np.array([p[0] for p in self.pieces])
        return np.clip(np.searchsorted(lefts, u, side="right") - 1, 0, len(self.pieces) - 1)

    def __call__(self, u):
        scalar = np.ndim(u) == 0
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty(u.shape)
        idx = self.piece_index(u)
        for k in np.unique(idx):
            a, _, c = self.pieces[k]
            sel = idx == k
            out[sel] = np.polynomial.polynomial.polyval(u[sel] - a, c)
        return float(out[0]) if scalar else out

    def rounding_bound(self, u):
        """Bound on the rounding error of ``self(u)``: ``8 eps sum_k |c_k| |u - a|^k``."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty(u.shape)
        idx = self.piece_index(u)
        for k in np.unique(idx):
            a, _, c = self.pieces[k]
            sel = idx == k
            out[sel] = np.polynomial.polynomial.polyval(np.abs(u[sel] - a), np.abs(c))
        return 8 * np.finfo(float).eps * len(self.pieces[0][2]) * out

    def __add__(self, other):
        if [p[:2] for p in self.pieces] != [p[:2] for p in other.pieces]:
            raise ValidationError("pieces must share their intervals")
        out = []
        for (a, b, c), (_, _, d) in zip(self.pieces, other.pieces):
            n = max(len(c), len(d))
            out.append((a, b, np.pad(c, (0, n - len(c))) + np.pad(d, (0, n - len(d)))))
        return PiecewisePoly(tuple(out))

    def scaled(self, s):
        return PiecewisePoly(tuple((a, b, s * c) for a, b, c in self.pieces))


def _step(a, b, c, kappa):
    """Image on ``[a+1, b+1)`` of the piece ``sum c_k (u - a)^k`` on ``[a, b)``."""
    k = np.arange(len(c))
    nxt = np.zeros_like(c)
    nxt[:-1] = a * k[1:] * c[1:]
    return ((kappa - 1 - k) * c - nxt) / kappa


def forward_extend(kappa: float, seed: PiecewisePoly, steps: int) -> PiecewisePoly:
    """Continue ``seed`` (given on ``[T, T+1]``) to ``[T, T+1+steps]``.

    Each step costs one order of smoothness at the junctions: a seed that
    vanishes to order r at both ends gives a differentiable extension for
    about r steps, after which the pieces jump at the integers.  With a
    fixed-degree seed the per-step growth factor tends to ``|kappa-1-d|/kappa``.
    """
    if not kappa > 0:
        raise ValidationError("kappa must be positive")
    if steps < 1:
        raise ValidationError("steps must be at least 1")
    T = seed.start
    if not T > 0:
        raise DomainError("the seed interval must lie in u > 0")
    if abs(seed.end - T - 1) > 1e-12:
        raise ValidationError("seed must cover exactly one unit interval [T, T+1]")
    pieces = list(seed.pieces)
    last = list(seed.pieces)
    for n in range(1, steps + 1):
        new = []
        for a, b, c in last:
            with np.errstate(over="ignore", invalid="ignore"):
                d = _step(a, b, c, kappa)
            if not np.all(np.isfinite(d)):
                raise CoefficientOverflowError(
                    f"coefficients overflowed at extension step {n}", last_valid_step=n - 1
                )
            new.append((a + 1, b + 1, d))
        pieces.extend(new)
        last = new
    return PiecewisePoly(tuple(pieces))


def sign_changes(q, interval, samples_per_unit: int = SAMPLES_PER_UNIT) -> int:
    """Strict sign alternations of ``q`` on ``interval``.

    A uniform grid is merged with the real roots of every polynomial piece
    meeting the interval, and q is sampled at the midpoints between
    consecutive merged points, so simple roots are never missed and double
    roots are not counted.  Samples smaller than the evaluation rounding
    bound count as zero.
    """
    lo, hi = map(float, interval)
    n = max(2, int(math.ceil((hi - lo) * samples_per_unit)) + 1)
    pts = [np.linspace(lo, hi, n)]
    if isinstance(q, PiecewisePoly):
        for a, b, c in q.pieces:
            if b <= lo or a >= hi:
                continue
            trimmed = np.trim_zeros(np.asarray(c, dtype=float), "b")
            if len(trimmed) > 1:
                r = Polynomial(trimmed).roots()
                r = r[np.abs(r.imag) <= 1e-9 * (1 + np.abs(r.real))].real + a
                pts.append(r[(r > max(a, lo)) & (r < min(b, hi))])
    x = np.unique(np.concatenate(pts))
    mids = 0.5 * (x[:-1] + x[1:])
    vals = np.real(q(mids))
    if isinstance(q, PiecewisePoly):
        # samples inside the Horner rounding bound have no reliable sign
        vals = np.where(np.abs(vals) <= q.rounding_bound(mids), 0.0, vals)
    s = np.sign(vals[vals != 0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@dataclass(frozen=True)
class OscillationReport:
    lefts: np.ndarray
    max_abs: np.ndarray
    sign_changes: np.ndarray
    first_sign_change: int | None
    growth_exponents: np.ndarray

    def settled_index(self):
        """Smallest k such that every interval from k on has a sign change (None if the last has none)."""
        k = None
        for n in range(len(self.sign_changes) - 1, -1, -1):
            if self.sign_changes[n] >= 1:
                k = n
            else:
                break
        return k

    def exceeds_exponential(self, lam: float, last: int = 4) -> bool:
        """``max|q| > exp(lam * u_left)`` on each of the last ``last`` intervals."""
        tail = slice(len(self.lefts) - last, None)
        return bool(np.all(self.growth_exponents[tail] > lam * self.lefts[tail]))

    def growth_ratios(self, last: int = 4) -> np.ndarray:
        """``max|q|`` ratios between consecutive intervals over the last ``last`` steps."""
        return self.max_abs[-last:] / self.max_abs[-last - 1 : -1]


def oscillation_report(q: PiecewisePoly) -> OscillationReport:
    """Per unit interval ``[T+n, T+n+1)``: max |q|, sign changes, log max |q|."""
    T = q.start
    count = int(round(q.end - T))
    lefts = T + np.arange(count, dtype=float)
    mx, sc = [], []
    for lo in lefts:
        u = np.linspace(lo, lo + 1, SAMPLES_PER_UNIT + 1)
        mx.append(float(np.max(np.abs(q(u[:-1] + 0.5 / SAMPLES_PER_UNIT)))))
        sc.append(sign_changes(q, (lo, lo + 1)))
    mx = np.array(mx)
    sc = np.array(sc, dtype=int)
    first = int(np.flatnonzero(sc)[0]) if np.any(sc) else None
    with np.errstate(divide="ignore"):
        growth = np.log(mx)
    return OscillationReport(lefts, mx, sc, first, growth)


@dataclass(frozen=True)
class BackwardSolution:
    """q on ``[lo, T + v_m]``: Chebyshev pieces below T, the seed above."""

    lo: float
    T: float
    pieces: tuple
    seed: object

    def __call__(self, u):
        scalar = np.ndim(u) == 0
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty(u.shape, dtype=complex)
        hi = u >= self.T
        if np.any(hi):
            out[hi] = self.seed(u[hi])
        low = ~hi
        if np.any(low):
            if not self.pieces:
                raise DomainError("no backward steps taken yet")
            # pieces run downward from T; tops are decreasing
            tops = np.array([b for _, b, _ in self.pieces])
            idx = np.clip(len(tops) - 1 - np.searchsorted(tops[::-1], u[low], side="left"), 0, len(tops) - 1)
            vals = np.empty(idx.shape, dtype=complex)
            for k in np.unique(idx):
                a, b, c = self.pieces[k]
                sel = idx == k
                vals[sel] = C.chebval((2 * u[low][sel] - a - b) / (b - a), c)
            out[low] = vals
        return complex(out[0]) if scalar else out

    def samples(self, n_per_step: int = 10):
        grid = np.concatenate([np.linspace(a, b, n_per_step, endpoint=False) for a, b, _ in reversed(self.pieces)] + [[self.T]])
        return grid, self(grid)


def backward_extend(params, seed, h: float, steps: int, T: float | None = None, degree: int = 20) -> BackwardSolution:
    """Integrate the advanced equation from ``[T, T + v_m]`` down to ``T - steps h``.

    On each step ``[u - h, u]`` the integrating factor turns the equation into

        q(s) = s^alpha_0 [u^-alpha_0 q(u) - int_s^u t^(-alpha_0-1) sum_{j>=1} alpha_j q(t + v_j) dt]

    whose right side only involves already-known values because ``h <= v_1``.
    ``seed`` is a :class:`PiecewisePoly` or any vectorised callable on
    ``[T, T + v_m]``.
    """
    if steps < 1:
        raise ValidationError("steps must be at least 1")
    if not 0 < h <= params.v1:
        raise ValidationError(f"need 0 < h <= v_1 = {params.v1}")
    if T is None:
        if not isinstance(seed, PiecewisePoly):
            raise ValidationError("T is required when the seed is a plain callable")
        T = seed.start
    if T - steps * h <= 0:
        raise DomainError(f"backward steps would reach u = {T - steps * h} <= 0")
    a0 = params.alpha0
    t, _ = C.chebgauss(degree + 1)
    sol = BackwardSolution(T, T, (), seed)
    top = T
    q_top = complex(np.asarray(seed(np.array([T])))[0])
    for n in range(1, steps + 1):
        lo = T - n * h
        s = lo + (t + 1) * h / 2
        forcing = np.zeros(len(s), dtype=complex)
        for al, v in zip(params.b, params.shifts[1:]):
            forcing += al * sol(s + v)
        cf = C.chebfit(t, s ** (-a0 - 1) * forcing, degree)
        # int_s^top = (h/2) [I(1) - I(t)]
        ci = C.chebint(cf)
        integral = (C.chebval(1.0, ci) - C.chebval(t, ci)) * h / 2
        vals = s**a0 * (top ** (-a0) * q_top - integral)
        coef = C.chebfit(t, vals, degree)
        sol = BackwardSolution(lo, T, sol.pieces + ((lo, top, coef),), seed)
        q_top = complex(C.chebval(-1.0, coef))
        top = lo
    return sol


@dataclass(frozen=True)
class CanonicalCheck:
    fit_error: float
    abs_dev: np.ndarray
    rel_dev: np.ndarray
    amplification: np.ndarray
    sign_changes: np.ndarray


def canonical_extension_check(kappa=1.0, T=5.0, degree=8, steps=3, scale=1.0, cfg=None) -> CanonicalCheck:
    """Fit ``scale * q*`` on ``[T, T+1]``, extend forward and compare with ``scale * q*``.

    ``amplification[n]`` is the sup deviation on ``[T+n+1, T+n+2]`` divided by
    the sup fit error.  Each step applies ``q -> -u q'/kappa + ...``, so it
    costs roughly one derivative of the fit error.
    """
    from .params import preset
    from .qstar import qstar_many
    from .quadrature import DEFAULT_CONFIG

    cfg = DEFAULT_CONFIG if cfg is None else cfg
    params = preset("iwaniec", kappa)

    def f(u):
        return scale * qstar_many(params, np.atleast_1d(u), cfg)[0].real

    seed = PiecewisePoly.fit(f, T, T + 1, degree)
    xs = np.linspace(T, T + 1, 401)
    fit_err = float(np.max(np.abs(seed(xs) - f(xs))))
    ext = forward_extend(kappa, seed, steps)
    ad, rd, sc = [], [], []
    for n in range(1, steps + 1):
        xs = np.linspace(T + n, T + n + 1, 401)
        ref = f(xs)
        dev = np.abs(ext(xs[:-1]) - ref[:-1])
        ad.append(float(dev.max()))
        rd.append(float(np.max(dev / np.abs(ref[:-1]))))
        sc.append(sign_changes(ext, (T + n, T + n + 1)))
    ad = np.array(ad)
    return CanonicalCheck(fit_err, ad, np.array(rd), ad / fit_err, np.array(sc, dtype=int))
