"""The retarded solution p(u, a, b) of ``(u p(u))' = -sum_j alpha_j p(u - v_j)``.

Normalisation: ``p = 0`` for ``u <= 0`` and ``p = C0/Gamma(1-a) u^(-a)`` on
``(0, v_1]``; p is continuous from the left everywhere, and
``p(u, a+1, b) = d/du p(u, a, b)``.

Construction (``Re a < 1``) is by the method of steps on panels between
consecutive combination points ``sum_j n_j v_j``.  On a panel with left end
``s`` the solution is stored as

    p(u) = F(u) + (u - s)^(k - a) H(u)

with F and H Chebyshev series and k the order to which the singular part
vanishes at ``s`` (0 on the first panel, 1 elsewhere).  The split is exact:
every singular term that the marching generates at ``s`` has the form
``(u - s)^(k - a) * analytic``, so F and H stay analytic and the
interpolants converge spectrally.  For
``Re a >= 1`` the base solution with ``a - n`` is differentiated ``n`` times
panel by panel (``lift``), or evaluated pointwise through the recursion
``p(u, a+1) = -(a/u) p(u, a) - (1/u) sum_j alpha_j p(u - v_j, a)``
(``lift_a``).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import DomainError, HorizonError, ValidationError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, adaptive_gk, gauss_legendre, singular_moment
from .special import ein, nearest_integer, rgamma_c

BREAKPOINT_CAP = 10_000
_DEGREES = (16, 32, 64, 128)


@dataclass(frozen=True)
class Panel:
    left: float
    right: float
    F: np.ndarray
    H: np.ndarray
    degree: int
    tail: float = 0.0
    order: int = 1

    def _t(self, u):
        return (2.0 * u - self.left - self.right) / (self.right - self.left)


def combination_points(shifts, U, cap=BREAKPOINT_CAP):
    """Sorted sums ``sum_{j>=1} n_j v_j`` in ``(0, U)``, plus the pure multiples.

    Returns ``(points, pure)``; ``pure`` marks points equal to some ``n v_j``.
    Generation is breadth-first by total count ``sum n_j``; beyond ``cap``
    points the deepest generations are dropped with a warning.
    """
    vs = [float(v) for v in shifts[1:]]
    tol = 1e-12 * max(1.0, U)
    pure = set()
    for v in vs:
        n = 1
        while n * v < U - tol:
            pure.add(n * v)
            n += 1
    points = set(pure)
    frontier = {0.0}
    truncated = False
    while frontier:
        nxt = set()
        for s in frontier:
            for v in vs:
                t = s + v
                if t < U - tol:
                    nxt.add(t)
        nxt = {round(t, 12) for t in nxt}
        points |= nxt
        if len(points) > cap:
            truncated = True
            break
        frontier = nxt
    if truncated:
        warnings.warn(
            f"more than {cap} combination points below U = {U}; deeper generations were dropped",
            RuntimeWarning,
            stacklevel=2,
        )
    pts = np.array(sorted(points))
    if len(pts):
        keep = np.concatenate([[True], np.diff(pts) > tol])
        pts = pts[keep]
    pure_arr = np.array(sorted(pure))
    is_pure = np.array([bool(len(pure_arr)) and np.min(np.abs(pure_arr - p)) <= tol for p in pts], dtype=bool)
    return pts, is_pure


@lru_cache(maxsize=None)
def _cheb_nodes(n):
    k = np.arange(n)
    t = np.cos(np.pi * (k + 0.5) / n)
    # values -> coefficients for first-kind nodes
    T = np.cos(np.outer(np.arange(n), np.pi * (k + 0.5) / n))
    M = (2.0 / n) * T
    M[0] *= 0.5
    return t, M


def _fit(values, n):
    _, M = _cheb_nodes(n)
    return M @ values


def _rel_tail(*coeff_sets):
    scale = max(float(np.max(np.abs(c))) for c in coeff_sets)
    if scale == 0.0:
        return 0.0
    return max(float(np.max(np.abs(c[-3:]))) for c in coeff_sets) / scale


@dataclass(frozen=True)
class PiecewiseSolution:
    """p(u, a, b) on ``(0, horizon]`` as a list of :class:`Panel`.

    Calling the object evaluates p; ``side="right"`` gives right limits at
    panel boundaries (the stored function itself is left-continuous).
    """

    params: object
    horizon: float
    panels: tuple
    breakpoints: np.ndarray
    pure_multiples: np.ndarray
    lifts: int = 0
    note: str | None = None
    _lefts: np.ndarray = field(init=False, repr=False, compare=False)
    _rights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_lefts", np.array([p.left for p in self.panels]))
        object.__setattr__(self, "_rights", np.array([p.right for p in self.panels]))

    @property
    def a(self) -> complex:
        return self.params.a

    def panel_index(self, u, side="left"):
        u = np.asarray(u, dtype=float)
        if side == "left":
            idx = np.searchsorted(self._rights, u, side="left")
        elif side == "right":
            idx = np.searchsorted(self._lefts, u, side="right") - 1
        else:
            raise ValidationError(f"side must be 'left' or 'right', got {side!r}")
        return np.clip(idx, 0, len(self.panels) - 1)

    def _check_horizon(self, u, side):
        u = np.asarray(u, dtype=float)
        over = u > self.horizon * (1 + 1e-13) if side == "left" else u >= self.horizon * (1 + 1e-13)
        if np.any(over):
            need = float(np.max(u))
            raise HorizonError(
                f"solution built up to U = {self.horizon}, asked for u = {need}", required_horizon=need
            )

    def _eval_in(self, k, u, part="both", deriv=False):
        """Evaluate panel ``k`` at ``u`` (may sit a hair outside it)."""
        pan = self.panels[k]
        t = pan._t(u)
        x = np.maximum(u - pan.left, 0.0)
        scale = 2.0 / (pan.right - pan.left)
        e = pan.order - self.a
        if deriv:
            F = C.chebval(t, C.chebder(pan.F)) * scale if len(pan.F) > 1 else np.zeros_like(t)
            H = C.chebval(t, pan.H)
            dH = C.chebval(t, C.chebder(pan.H)) * scale if len(pan.H) > 1 else np.zeros_like(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                sing = x ** (e - 1) * (e * H + x * dH)
            sing = np.where(x > 0, sing, 0.0)
            return F + sing
        F = C.chebval(t, pan.F)
        if part == "F":
            return F
        H = C.chebval(t, pan.H)
        if part == "H":
            return H
        if part == "G":
            return x**pan.order * H
        with np.errstate(divide="ignore", invalid="ignore"):
            sing = np.where(x > 0, x**e * H, 0.0)
        if np.any(x == 0):
            sing = np.where(x == 0, _zero_power_limit(-e, H), sing)
        return F + sing

    def __call__(self, u, side="left"):
        scalar = np.ndim(u) == 0
        u = np.atleast_1d(np.asarray(u, dtype=float))
        self._check_horizon(u, side)
        out = np.zeros(u.shape, dtype=complex)
        pos = u > 0 if side == "left" else u >= 0
        if np.any(pos):
            idx = self.panel_index(u[pos], side)
            vals = np.zeros(idx.shape, dtype=complex)
            for k in np.unique(idx):
                sel = idx == k
                vals[sel] = self._eval_in(k, u[pos][sel])
            out[pos] = vals
        return complex(out[0]) if scalar else out

    def derivative(self, u):
        """Left derivative of p from the panel interpolants."""
        scalar = np.ndim(u) == 0
        u = np.atleast_1d(np.asarray(u, dtype=float))
        self._check_horizon(u, "left")
        out = np.zeros(u.shape, dtype=complex)
        pos = u > 0
        idx = self.panel_index(u[pos])
        vals = np.zeros(idx.shape, dtype=complex)
        for k in np.unique(idx):
            sel = idx == k
            vals[sel] = self._eval_in(k, u[pos][sel], deriv=True)
        out[pos] = vals
        return complex(out[0]) if scalar else out

    def residual(self, u):
        """``d/du[u p(u)] + sum_j alpha_j p(u - v_j)`` with the derivative from the interpolant."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        r = self(u) + u * self.derivative(u)
        for al, v in zip(self.params.alphas, self.params.shifts):
            r = r + al * self(u - v)
        return r

    def integrate(self, weight, lo, hi, nodes=32):
        """``int_lo^hi weight(u) p(u) du`` panel by panel.

        ``weight`` must be smooth on ``[lo, hi]``; endpoint singularities of p
        at panel left ends are handled by geometric grading.
        """
        self._check_horizon(np.array([hi]), "left")
        lo = max(lo, 0.0)
        if hi <= lo:
            return 0j
        x, w = gauss_legendre(nodes)
        total = 0j
        first = int(self.panel_index(lo, side="right"))
        last = int(self.panel_index(hi, side="left"))
        for k in range(first, last + 1):
            pan = self.panels[k]
            s0, s1 = max(lo, pan.left), min(hi, pan.right)
            if s1 <= s0:
                continue
            us = s0 + (s1 - s0) * x
            total += np.dot(weight(us) * self._eval_in(k, us, "F"), w) * (s1 - s0)

            def g(xs, pan=pan, k=k):
                u = pan.left + xs
                return weight(u) * self._eval_in(k, u, "H")

            total += _anchored_integral(g, self.a - pan.order, s0 - pan.left, s1 - pan.left)
        return complex(total)

    def lift(self, n=1) -> "PiecewiseSolution":
        """The solution for ``a + n`` (same b) by differentiating every panel ``n`` times."""
        sol = self
        for _ in range(n):
            a = sol.a
            panels = []
            for pan in sol.panels:
                h = pan.right - pan.left
                scale = 2.0 / h
                dF = C.chebder(pan.F) * scale if len(pan.F) > 1 else np.zeros(1, dtype=complex)
                dH = C.chebder(pan.H) * scale if len(pan.H) > 1 else np.zeros(1, dtype=complex)
                k = pan.order
                if abs(k - a) < 1e-14:
                    # d/du [x^0 H] = H' = x^((k+1) - (a+1)) H'
                    newH, k = dH, k + 1
                else:
                    # d/du [x^(k-a) H] = x^(k-a-1) ((k-a) H + x H'),  x = (t + 1) h / 2
                    newH = C.chebadd((k - a) * pan.H, C.chebmul(np.array([h / 2, h / 2]), dH))
                panels.append(
                    replace(pan, F=np.asarray(dF, dtype=complex), H=np.asarray(newH, dtype=complex), order=k)
                )
            sol = PiecewiseSolution(
                sol.params.with_alpha0(sol.params.alpha0 + 1),
                sol.horizon,
                tuple(panels),
                sol.breakpoints,
                sol.pure_multiples,
                sol.lifts + 1,
                sol.note,
            )
        return sol

    def max_tail(self) -> float:
        return max(p.tail for p in self.panels)


def _zero_power_limit(a, H=None):
    """``lim_{x->0+} x^(-a) H`` for H finite at 0."""
    H = 1.0 if H is None else H
    if a == 0:
        return H
    if a.real < 0:
        return 0.0 * H
    return np.where(H == 0, 0.0, np.inf) if np.ndim(H) else (0.0 if H == 0 else np.inf)


def _anchored_integral(g, a, s0, s1):
    """``int_{s0}^{s1} x^(-a) g(x) dx`` for smooth g; x = 0 may be singular (``Re a < 1``)."""
    if s0 > 0.25 * s1:
        x, w = gauss_legendre(32)
        xs = s0 + (s1 - s0) * x
        return np.dot(np.asarray(g(xs)) * xs ** (-a), w) * (s1 - s0)
    if not a.real < 1:
        raise DomainError(f"p is not integrable at an anchor (local exponent {-a})")
    out = singular_moment(g, a, s1)
    if s0 > 0:
        out -= singular_moment(g, a, s0)
    return out


def _first_panel(params, right, d):
    G0 = params.c0 * rgamma_c(1 - params.a)
    return Panel(0.0, right, np.zeros(1, dtype=complex), np.array([G0], dtype=complex), 0, order=0)


def solve_p(params, U: float, cfg: QuadratureConfig = DEFAULT_CONFIG, degree: int = 16) -> PiecewiseSolution:
    """Method-of-steps construction of p(u, a, b) on ``(0, U]`` for ``Re a < 1``.

    Each panel runs from one combination point to the next, so its length is
    at most ``v_1``.  On a panel starting at ``s``::

        u^a p(u) = s^a p(s) - int_s^u t^(a-1) sum_j alpha_j p(t - v_j) dt

    The history term splits into an analytic part A and a part
    ``(t - s)^(-a) B``; the latter integrates to ``(u-s)^(1-a) J(u)`` with
    ``J(u) = int_0^1 tau^(-a) B(s + (u-s) tau) dtau``.  Interpolant degrees
    double (up to 128) until the Chebyshev tail drops below ``cfg.rel_tol``.
    """
    a = params.a
    if not a.real < 1:
        raise DomainError(
            f"solve_p needs Re(a) < 1 (got a = {a}); build the base with a - n and use lift_a or PiecewiseSolution.lift"
        )
    if not U > 0:
        raise ValidationError("horizon U must be positive")
    v1 = params.v1
    if U <= v1:
        pan = _first_panel(params, U, degree)
        return PiecewiseSolution(
            params, U, (pan,), np.array([]), np.array([]), note="U <= v_1: closed form on (0, U] only"
        )
    pts, is_pure = combination_points(params.shifts, U)
    edges = np.concatenate([[0.0], pts, [U]])
    tol = 1e-12 * max(1.0, U)
    panels = [_first_panel(params, edges[1], degree)]
    for k in range(1, len(edges) - 1):
        sol_so_far = PiecewiseSolution(params, edges[k], tuple(panels), pts, pts[is_pure])
        panels.append(_march_panel(sol_so_far, edges[k], edges[k + 1], cfg, degree, tol))
    return PiecewiseSolution(params, U, tuple(panels), pts, pts[is_pure])


def _history_terms(sol, lo, hi, tol):
    """Per shift: None (history is zero), ('anchored', k) or ('smooth', k)."""
    out = []
    for v in sol.params.shifts[1:]:
        w_lo, w_hi = lo - v, hi - v
        if w_hi <= tol:
            out.append(None)
            continue
        k = int(sol.panel_index(0.5 * (w_lo + w_hi)))
        kind = "anchored" if abs(sol.panels[k].left - w_lo) <= tol else "smooth"
        out.append((kind, k))
    return out


def _march_panel(sol, lo, hi, cfg, degree, tol):
    params = sol.params
    a = params.a
    p_lo = sol(lo)
    terms = _history_terms(sol, lo, hi, tol)
    # lifting differentiates the panels, so aim well below rel_tol
    rel = max(min(cfg.rel_tol, 1e-13), 4e-15)
    for d in _DEGREES:
        if d < degree:
            continue
        n = d + 1
        t, _ = _cheb_nodes(n)
        u = lo + (t + 1.0) * (hi - lo) / 2.0
        A = np.zeros(n, dtype=complex)
        B = np.zeros(n, dtype=complex)
        weight = u ** (a - 1.0)
        for al, v, term in zip(params.b, params.shifts[1:], terms):
            if term is None:
                continue
            kind, k = term
            if kind == "anchored":
                A += al * weight * sol._eval_in(k, u - v, "F")
                B += al * weight * sol._eval_in(k, u - v, "G")
            else:
                A += al * weight * sol._eval_in(k, u - v)
        cA = _fit(A, n)
        cB = _fit(B, n)
        IA = C.chebval(t, C.chebint(cA, lbnd=-1)) * (hi - lo) / 2.0
        x = u - lo
        if np.any(B != 0):
            def g(tau):
                arg = lo + x[:, None] * tau[None, :]
                return C.chebval((2.0 * arg - lo - hi) / (hi - lo), cB)

            J = singular_moment(g, a, 1.0)
        else:
            J = np.zeros(n, dtype=complex)
        upow = u ** (-a)
        F = upow * (lo**a * p_lo - IA)
        H = -upow * J  # G = x H
        cF = _fit(F, n)
        cH = _fit(H, n)
        tail = _rel_tail(cF, cH, cA, cB) if np.any(cH) or np.any(cF) else 0.0
        if tail <= rel or d == _DEGREES[-1]:
            if tail > rel:
                warnings.warn(
                    f"panel [{lo:.6g}, {hi:.6g}]: Chebyshev tail {tail:.2e} above {rel:.1e} at degree {d}",
                    RuntimeWarning,
                    stacklevel=3,
                )
            return Panel(lo, hi, cF, cH, d, tail, order=1)


def p_solution(params, U: float, cfg: QuadratureConfig = DEFAULT_CONFIG, degree: int = 16) -> PiecewiseSolution:
    """p(u, a, b) on ``(0, U]`` for any a: solve the base ``a - n`` and lift ``n`` times."""
    n = lift_count(params.a)
    base = solve_p(params.with_alpha0(params.alpha0 - n), U, cfg, degree)
    return base.lift(n) if n else base


def lift_count(a) -> int:
    """Smallest ``n >= 0`` with ``Re(a) - n < 1``."""
    return max(0, math.floor(complex(a).real))


def lift_a(params, u: float, n_lift: int, base: PiecewiseSolution, side: str = "left") -> complex:
    """p(u, a, b) from the base solution for ``a - n_lift`` via

        p(x, c+1) = -(c/x) p(x, c) - (1/x) sum_j alpha_j p(x - v_j, c)

    applied ``n_lift`` times with point values only.  ``side="left"`` gives
    the (stored) left limit at breakpoints, ``side="right"`` the right limit.
    """
    if n_lift < 0:
        raise ValidationError("n_lift must be non-negative")
    a_base = base.params.a
    if abs(a_base + n_lift - params.a) > 1e-12 or tuple(base.params.b) != tuple(params.b):
        raise ValidationError("base must solve the same b with a replaced by a - n_lift")
    if u <= 0 and not (side == "right" and u == 0):
        return 0j
    if u > base.horizon:
        raise HorizonError(f"base solved to U = {base.horizon}, lift needs u = {u}", required_horizon=u)
    b = params.b
    shifts = params.shifts[1:]

    @lru_cache(maxsize=None)
    def level(x, k):
        if x < 0 or (x == 0 and side == "left"):
            return 0j
        if k == 0:
            return base(x, side=side)
        if x == 0:
            # right limit at 0 of the lifted function: x^(-(a_base+k)) behaviour
            r = rgamma_c(1 - (a_base + k))
            return 0j if r == 0 else complex(r * params.c0 * _zero_power_limit(a_base + k))
        c = a_base + k - 1
        out = -(c / x) * level(x, k - 1)
        for al, v in zip(b, shifts):
            out -= (al / x) * level(round(x - v, 13), k - 1)
        return out

    return complex(level(round(float(u), 13), n_lift))


@dataclass(frozen=True)
class DiscontinuityReport:
    location: float
    n: int
    j: int
    kind: str
    local_exponent: complex | None
    predicted_coefficient: complex | None
    measured_jump: complex | None = None


def discontinuities(params, U: float, base: PiecewiseSolution | None = None) -> list[DiscontinuityReport]:
    """Candidate discontinuities ``n v_j <= U`` classified by the value of a.

    * ``Re a`` not an integer: algebraic blow-up ``(u - n v_j)^(n-a)`` for ``0 <= n < Re a``;
    * ``Re a`` a non-negative integer, a not real: the same, plus bounded
      oscillatory behaviour at ``n = Re a``;
    * a a positive integer: finite jumps at ``n v_j``, ``1 <= n <= a``
      (some may cancel when m > 1);
    * a = 0: a single finite jump at 0.

    With ``base`` (the solution for ``a - lift_count(a)``) the jump
    ``p(x+) - p(x-)`` is measured at every finite candidate.
    """
    a = complex(params.a)
    shifts = params.shifts
    c0 = params.c0
    re_int = nearest_integer(a.real, 1e-12)
    a_int = nearest_integer(a, 1e-12)
    reports = {}

    def add(loc, n, j, kind, expo, coef):
        key = round(loc, 12)
        if key in reports and reports[key].n <= n:
            return
        reports[key] = DiscontinuityReport(loc, n, j, kind, expo, coef)

    def blowup_coef(n, j):
        al, v = params.alphas[j], shifts[j]
        return (-al) ** n * c0 / (math.factorial(n) * v**n) * rgamma_c(n - a + 1)

    if a_int is not None and a_int == 0:
        add(0.0, 0, 1, "finite_jump", None, None)
    elif a_int is not None and a_int > 0:
        for j in range(1, params.m + 1):
            for n in range(1, a_int + 1):
                if n * shifts[j] <= U:
                    add(n * shifts[j], n, j, "finite_jump", None, None)
    elif a_int is not None:
        pass  # negative integer a: p continuous everywhere
    else:
        top = re_int if re_int is not None else math.ceil(a.real)
        for j in range(1, params.m + 1):
            for n in range(0, max(top, 0)):
                if n * shifts[j] <= U and n < a.real:
                    add(n * shifts[j], n, j, "algebraic_blowup", n - a, blowup_coef(n, j))
            if re_int is not None and re_int >= 0 and re_int * shifts[j] <= U:
                add(re_int * shifts[j], re_int, j, "bounded_oscillatory", re_int - a, None)

    out = sorted(reports.values(), key=lambda r: r.location)
    if base is not None:
        n_lift = lift_count(a)
        measured = []
        for r in out:
            if r.kind != "finite_jump":
                measured.append(r)
                continue
            left = lift_a(params, r.location, n_lift, base, side="left")
            right = lift_a(params, r.location, n_lift, base, side="right")
            measured.append(replace(r, measured_jump=right - left))
        out = measured
    return out


def laplace_rhs(params, s) -> complex:
    """``s^beta exp{-sum_j alpha_j Ein(v_j s)}``."""
    s = complex(s)
    expo = sum(al * ein(v * s) for al, v in zip(params.b, params.shifts[1:]))
    return complex(np.exp(params.beta * np.log(s) - expo))


def p_laplace_check(params, s, sol: PiecewiseSolution, cfg: QuadratureConfig = DEFAULT_CONFIG, tail_terms: int = 4):
    """Compare ``int_0^inf e^(-s u) p(u) du`` with ``s^beta exp{-sum alpha_j Ein(v_j s)}``.

    The integral runs panel by panel up to the horizon U; the remainder
    ``int_U^inf`` uses the asymptotic series for p.  Returns
    ``(lhs, rhs, |lhs - rhs|)``.  Raises :class:`HorizonError` when the
    remainder cannot be pinned down to ``1e-3 * abs_tol``-scale accuracy.
    """
    from .asym import p_series

    s = complex(s)
    if not params.a.real < 1:
        raise DomainError("the Laplace identity is stated for Re(a) < 1")
    if not s.real > 0:
        raise DomainError("need Re(s) > 0")
    U = sol.horizon
    body = sol.integrate(lambda u: np.exp(-s * u), 0.0, U)
    series = p_series(params, tail_terms)
    # a non-integer beta series is divergent; its error at U stands in for the truncation error
    mismatch = abs(sol(U) - series.evaluate(U))
    tail_err = (mismatch + abs(series.term(tail_terms, U))) * math.exp(-s.real * U) / s.real
    if tail_err > 1e-7:
        need = U
        while (abs(series.term(tail_terms, need)) + mismatch) * math.exp(-s.real * need) / s.real > 1e-7:
            need *= 1.25
        raise HorizonError(
            f"horizon U = {U} leaves a Laplace tail uncertainty of {tail_err:.2e}", required_horizon=need
        )
    span = 40.0 / s.real

    def tail_integrand(u):
        return np.exp(-s * u) * series.evaluate(u)

    tail = adaptive_gk(tail_integrand, U, U + span, abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol).value
    lhs = complex(body + tail)
    rhs = laplace_rhs(params, s)
    return lhs, rhs, abs(lhs - rhs)
