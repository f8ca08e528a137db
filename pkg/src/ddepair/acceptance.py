"""End-to-end acceptance checks.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order and is what ``ddepair check-all`` and the acceptance test suite call.
Thresholds are fixed here and are not configurable.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .adjoint import adjoint_constant, normalization, upq_limits
from .asym import p_series, q_series, q_series_inf
from .oscillab import PiecewisePoly, canonical_extension_check, forward_extend, oscillation_report
from .params import make_params, preset
from .pfun import lift_a, lift_count, p_laplace_check, p_solution, solve_p
from .qstar import dde_residual, qstar_hankel, qstar_laplace, qstar_many
from .special import EULER_GAMMA, exp_power_bound, exp_power_integral

SUITE_BUDGET = 180.0


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name} ({self.seconds:.2f} s) {self.detail}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "detail": {k: _jsonable(v) for k, v in self.detail.items()},
        }


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(np.real(v)), float(np.imag(v))]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _timed(fn):
    def wrapper():
        t0 = time.perf_counter()
        res = fn()
        res.seconds = time.perf_counter() - t0
        if "runtime_limit" in res.detail:
            within = res.seconds < res.detail["runtime_limit"]
            res.detail["within_runtime"] = within
            res.passed = res.passed and within
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def dickman_trapezoid(u_end: float, h: float = 1e-5) -> float:
    """Dickman's rho at ``u_end`` by trapezoidal marching of ``u rho'(u) = -rho(u-1)``.

    An independent oracle: uniform mesh aligned with the integers, each unit
    interval done with one cumulative sum since the delayed values are known.
    """
    n = int(round(1 / h))
    prev = np.ones(n + 1)  # rho on [0, 1]
    val = 1.0
    k = 1
    while k < u_end - 1e-12:
        u = k + h * np.arange(n + 1)
        f = prev / u
        inc = -0.5 * h * (f[1:] + f[:-1])
        cur = np.concatenate([[prev[-1]], prev[-1] + np.cumsum(inc)])
        prev = cur
        k += 1
        val = cur[-1]
    frac = u_end - (k - 1)
    if abs(frac - 1.0) > 1e-12:
        val = float(np.interp(u_end, (k - 1) + h * np.arange(n + 1), prev))
    return float(val)


@_timed
def check_dickman_closed_form():
    """e^gamma p(2, 0, b) = 1 - ln 2."""
    sol = solve_p(preset("dickman"), 3.0)
    val = math.exp(EULER_GAMMA) * sol(2.0)
    err = abs(val - (1 - math.log(2)))
    return CheckResult(1, "Dickman closed form at u=2", err <= 1e-8, detail={"value": val, "error": err, "runtime_limit": 1.0})


@_timed
def check_dickman_depth():
    """e^gamma p(3, 0, b) against the trapezoid oracle."""
    sol = solve_p(preset("dickman"), 3.0)
    val = (math.exp(EULER_GAMMA) * sol(3.0)).real
    oracle = dickman_trapezoid(3.0, 1e-5)
    err = abs(val - oracle)
    return CheckResult(2, "Dickman rho(3) vs trapezoid oracle", err <= 1e-6, detail={"value": val, "oracle": oracle, "error": err, "runtime_limit": 5.0})


@_timed
def check_buchstab():
    P = preset("buchstab")
    base = solve_p(P.with_alpha0(P.alpha0 - 1), 10.0)
    us = np.linspace(1.0, 2.0, 41)[1:]
    dev = max(abs(math.exp(-EULER_GAMMA) * lift_a(P, u, 1, base) - 1 / u) for u in us)
    omega10 = math.exp(-EULER_GAMMA) * lift_a(P, 10.0, 1, base)
    err10 = abs(omega10 - math.exp(-EULER_GAMMA))
    ok = dev <= 1e-10 and err10 <= 1e-6
    return CheckResult(3, "Buchstab 1/u on (1,2] and omega(10)", ok, detail={"max_dev_1_2": dev, "omega10_error": err10, "runtime_limit": 5.0})


@_timed
def check_wheeler():
    W = make_params((1, 1, -2), (0, 1, 2))
    n = lift_count(W.a)
    base = solve_p(W.with_alpha0(W.alpha0 - n), 3.0)
    l2, r2 = lift_a(W, 2.0, n, base, "left"), lift_a(W, 2.0, n, base, "right")
    l1, r1 = lift_a(W, 1.0, n, base, "left"), lift_a(W, 1.0, n, base, "right")
    eg = math.exp(EULER_GAMMA)
    jump2, jump1 = abs(r2 - l2), abs(r1 - l1)
    lim_err = max(abs(l2 - eg), abs(r2 - eg))
    ok = jump2 <= 1e-8 and jump1 >= 0.1 and lim_err <= 1e-6
    return CheckResult(4, "Wheeler jump cancellation at u=2", ok, detail={"jump_at_2": jump2, "jump_at_1": jump1, "limit_error_at_2": lim_err})


def random_parameter_sets(count=10, seed=20240611):
    """Parameter sets with ``Re beta`` in (-2, 0), away from -1, with complex alphas."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m = int(rng.integers(1, 4))
        shifts = np.concatenate([[0.0], np.cumsum(rng.uniform(0.4, 1.2, m))])
        b = rng.uniform(-0.8, 0.8, m) + 1j * rng.uniform(-0.3, 0.3, m)
        beta = complex(rng.uniform(-1.9, -0.1), rng.uniform(-0.3, 0.3))
        if abs(beta.real + 1) < 0.1 or np.any(np.abs(b) < 0.05):
            continue
        alpha0 = beta - b.sum()
        out.append(make_params([alpha0, *b], shifts))
    return out


@_timed
def check_representations():
    worst = 0.0
    for P in random_parameter_sets():
        for u in (1.0, 5.0, 10.0):
            worst = max(worst, abs(qstar_laplace(P, u) - qstar_hankel(P, u)))
    return CheckResult(5, "Laplace vs Hankel representation", worst <= 1e-8, detail={"max_diff": worst, "runtime_limit": 30.0})


@_timed
def check_residuals():
    cases = {
        "iwaniec(1)": (preset("iwaniec", 1.0), 1e-6),
        "iwaniec(1/2)": (preset("iwaniec", 0.5), 1e-6),
        "beta=0": (make_params((1, -1), (0, 1)), 1e-12),
        "beta=1": (make_params((2, -1), (0, 1)), 1e-12),
    }
    detail, ok = {}, True
    for name, (P, tol) in cases.items():
        r = max(dde_residual(P, u) for u in (2.0, 5.0, 10.0))
        detail[name] = r
        ok = ok and r <= tol
    return CheckResult(6, "DDE residual of q*", ok, detail=detail)


@_timed
def check_laplace():
    detail, ok = {}, True
    for name, P in (("dickman", preset("dickman")), ("buchstab-base", make_params((-1, -1), (0, 1)))):
        sol = solve_p(P, 25.0)
        dev = max(p_laplace_check(P, s, sol)[2] for s in (0.5, 1.0, 2.0))
        detail[name] = dev
        ok = ok and dev <= 1e-6
    return CheckResult(7, "Laplace transform of p", ok, detail=detail)


# numerical floor for a bracket whose omitted term vanishes identically
ASYM_FLOOR = 1e-10


@_timed
def check_asymptotics():
    P = preset("iwaniec", 0.5)
    gam = normalization(P)
    sol = p_solution(P, 15.0)
    phat = gam * sol(15.0)
    ps = p_series(P, 3)
    p_ok, p_gaps = True, []
    for N in (1, 2, 3):
        gap = abs(phat - gam * ps.evaluate(15.0, N))
        bound = 2 * abs(gam * complex(ps.term(N, 15.0)))
        p_gaps.append((gap, bound))
        p_ok = p_ok and gap <= bound + ASYM_FLOOR
    q20 = qstar_many(P, [20.0])[0][0]
    qs = q_series(P, 3)
    q_ok, q_gaps = True, []
    for N in (1, 2, 3):
        gap = abs(q20 - q_series_inf(P, 20.0, N))
        bound = 2 * abs(complex(qs.term(N, 20.0)))
        q_gaps.append((gap, bound))
        q_ok = q_ok and gap <= bound
    return CheckResult(8, "asymptotic series brackets", p_ok and q_ok, detail={"p_gap_bound": p_gaps, "q_gap_bound": q_gaps})


@_timed
def check_adjoint():
    grid = np.arange(3.0, 9.0)
    devs = {}
    for name, k in (("iwaniec(1)", 1.0), ("iwaniec(1/2)", 0.5)):
        devs[name] = adjoint_constant(preset("iwaniec", k), grid).max_dev
    lim = upq_limits(preset("iwaniec", 0.5), U_large=60.0)
    ok = all(d <= 1e-6 for d in devs.values()) and lim.limit_zero == 1 and abs(lim.limit_inf - 1) <= 0.02
    return CheckResult(9, "adjoint constant and up*q limits", ok, detail={**devs, "limit_zero": lim.limit_zero, "limit_inf": lim.limit_inf})


@_timed
def check_oscillation():
    q = forward_extend(1.0, PiecewisePoly.bump(5.0), 8)
    rep = oscillation_report(q)
    # from index k on: a sign change in every interval and max|q| above e^(2 u)
    big = rep.growth_exponents > 2 * rep.lefts
    k = None
    for n in range(len(rep.lefts) - 1, -1, -1):
        if rep.sign_changes[n] >= 1 and big[n]:
            k = n
        else:
            break
    wild_ok = k is not None and k <= 8
    canon = canonical_extension_check(1.0, 5.0, 8, 3)
    canon_ok = bool(np.all(canon.amplification <= 10.0))
    detail = {
        "settled_from": k,
        "sign_changes": rep.sign_changes,
        "log_max_abs": rep.growth_exponents,
        "canonical_fit_error": canon.fit_error,
        "canonical_amplification": canon.amplification,
        "canonical_rel_dev": canon.rel_dev,
        "canonical_sign_changes": canon.sign_changes,
    }
    return CheckResult(10, "oscillation dichotomy", wild_ok and canon_ok, detail=detail)


@_timed
def check_exp_integral_bound():
    rng = np.random.default_rng(7)
    bad = 0
    for _ in range(100):
        u = rng.uniform(1.0, 20.0)
        r = rng.uniform(-3.0, 3.0)
        lam = max(r, 0.0) + rng.uniform(0.01, 3.0)
        if exp_power_integral(u, r, lam) > exp_power_bound(u, r, lam):
            bad += 1
    return CheckResult(11, "exponential integral inequality", bad == 0, detail={"violations": bad})


CHECKS = (
    check_dickman_closed_form,
    check_dickman_depth,
    check_buchstab,
    check_wheeler,
    check_representations,
    check_residuals,
    check_laplace,
    check_asymptotics,
    check_adjoint,
    check_oscillation,
    check_exp_integral_bound,
)


def run_all(callback=None) -> list[CheckResult]:
    """Run every check; the last result is the whole-suite timing check."""
    t0 = time.perf_counter()
    results = []
    for chk in CHECKS:
        res = chk()
        results.append(res)
        if callback:
            callback(res)
    total = time.perf_counter() - t0
    res = CheckResult(12, "whole suite runtime", total < SUITE_BUDGET, total, {"budget": SUITE_BUDGET})
    results.append(res)
    if callback:
        callback(res)
    return results
