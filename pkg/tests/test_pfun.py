import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddepair import (
    EULER_GAMMA,
    DomainError,
    HorizonError,
    discontinuities,
    lift_a,
    make_params,
    p_laplace_check,
    p_solution,
    preset,
    solve_p,
)
from ddepair.acceptance import dickman_trapezoid
from ddepair.pfun import combination_points, laplace_rhs, lift_count
from oracles import P_HALF, RHO

EG = math.exp(EULER_GAMMA)


@pytest.fixture(scope="module")
def dickman():
    return solve_p(preset("dickman"), 12.0)


@pytest.fixture(scope="module")
def buchstab_base():
    return solve_p(make_params((-1, -1), (0, 1)), 12.0)


def test_dickman_second_interval(dickman):
    for u in np.linspace(1.0, 2.0, 11)[1:]:
        assert abs(EG * dickman(u) - (1 - math.log(u))) <= 1e-12


@pytest.mark.parametrize("u, ref", list(RHO.items()))
def test_dickman_rho_table(dickman, u, ref):
    # forward marching cancels O(rho(u-1)) quantities, so accuracy is absolute
    assert abs(EG * dickman(u) - ref) <= 1e-15 + 1e-11 * ref


def test_dickman_trapezoid_oracle(dickman):
    assert abs(EG * dickman(3.0) - dickman_trapezoid(3.0)) <= 1e-6


@pytest.mark.parametrize("u, ref", list(P_HALF.items()))
def test_half_integer_a_second_panel(u, ref):
    sol = solve_p(make_params((-0.5, -0.7), (0, 1)), 3.0)
    assert abs(sol(u) - ref) <= 1e-12 * abs(ref)


def test_first_panel_closed_form():
    sol = solve_p(make_params((-1, -1), (0, 1)), 2.0)
    assert sol(0.3) == pytest.approx(EG, rel=1e-14)
    assert sol(1.0) == pytest.approx(EG, rel=1e-14)
    assert sol(0.0) == 0 and sol(-1.0) == 0


def test_trivial_horizon_note():
    sol = solve_p(preset("dickman"), 0.5)
    assert len(sol.panels) == 1 and sol.note


def test_domain_errors():
    with pytest.raises(DomainError, match="lift"):
        solve_p(preset("buchstab"), 3.0)
    with pytest.raises(HorizonError):
        solve_p(preset("dickman"), 3.0)(3.5)


def test_panels_tile_and_short():
    P = make_params((-0.2, -0.5, 0.3), (0, 0.7, 1.9))
    sol = solve_p(P, 6.0)
    lefts = [p.left for p in sol.panels]
    rights = [p.right for p in sol.panels]
    assert lefts[0] == 0 and rights[-1] == pytest.approx(6.0)
    assert np.allclose(lefts[1:], rights[:-1], rtol=0, atol=0)
    assert max(r - l for l, r in zip(lefts, rights)) <= P.v1 + 1e-12
    for x in (0.7, 1.4, 1.9, 2.6):
        assert any(abs(x - b) < 1e-12 for b in sol.breakpoints)


def test_combination_points():
    pts, pure = combination_points((0.0, 1.0, 1.5), 3.0)
    assert np.allclose(pts, [1.0, 1.5, 2.0, 2.5])
    assert list(pure) == [True, True, True, False]


def test_left_continuity_at_breakpoints():
    P = make_params((-0.4, -0.8), (0, 1))  # a = 0.6: blow-up only at 0
    sol = solve_p(P, 4.0)
    for b in (1.0, 2.0, 3.0):
        assert sol(b) == sol(b, side="left")
        assert abs(sol(b) - sol(b - 1e-9)) < 1e-6


@pytest.mark.parametrize(
    "alphas, shifts",
    [((-1, 1), (0, 1)), ((-0.5, -0.7), (0, 1)), ((-0.7 + 0.2j, -0.6, 0.4), (0, 0.8, 1.7)), ((-2, 0.5), (0, 1))],
)
def test_residual_between_breakpoints(alphas, shifts):
    P = make_params(alphas, shifts)
    sol = solve_p(P, 6.0)
    bps = np.concatenate([[0.0], sol.breakpoints])
    us = [u for u in np.linspace(0.05, 6.0, 120) if np.min(np.abs(bps - u)) > 1e-3]
    assert max(abs(sol.residual(u)) for u in us) <= 1e-7


def test_buchstab_lift(buchstab_base):
    P = preset("buchstab")
    assert lift_a(P, 1.5, 1, buchstab_base) == pytest.approx(EG / 1.5, rel=1e-12)
    assert lift_a(P, 0.5, 1, buchstab_base) == 0
    assert abs(math.exp(-EULER_GAMMA) * lift_a(P, 10.0, 1, buchstab_base) - math.exp(-EULER_GAMMA)) <= 1e-6


def test_panel_lift_matches_pointwise(buchstab_base):
    P = preset("buchstab")
    lifted = buchstab_base.lift(1)
    for u in (1.3, 2.5, 4.2, 7.7):
        assert abs(lifted(u) - lift_a(P, u, 1, buchstab_base)) <= 1e-9


def test_p_solution_dispatch():
    assert lift_count(0.5) == 0 and lift_count(1.0) == 1 and lift_count(2.7 + 1j) == 2
    sol = p_solution(preset("buchstab"), 4.0)
    assert sol(1.5) == pytest.approx(EG / 1.5, rel=1e-9)


def test_wheeler_limits():
    W = make_params((1, 1, -2), (0, 1, 2))
    base = solve_p(W.with_alpha0(W.alpha0 - 2), 3.0)
    assert abs(lift_a(W, 2.0, 2, base, "left") - EG) <= 1e-6
    assert abs(lift_a(W, 2.0, 2, base, "right") - EG) <= 1e-6


def test_discontinuity_cases():
    reps = discontinuities(make_params((-0.5, -0.7), (0, 1)), 3.0)
    assert len(reps) == 1
    assert reps[0].location == 0 and reps[0].kind == "algebraic_blowup"
    assert reps[0].local_exponent == pytest.approx(-0.5)

    reps = discontinuities(preset("buchstab"), 3.0)
    assert [(r.location, r.kind) for r in reps] == [(1.0, "finite_jump")]

    reps = discontinuities(preset("dickman"), 3.0)
    assert [(r.location, r.kind) for r in reps] == [(0.0, "finite_jump")]

    reps = discontinuities(make_params((1 + 0.5j, -1), (0, 1)), 3.0)  # Re a = 2, a complex
    kinds = {r.location: r.kind for r in reps}
    assert kinds == {0.0: "algebraic_blowup", 1.0: "algebraic_blowup", 2.0: "bounded_oscillatory"}

    assert discontinuities(make_params((-3, 1), (0, 1)), 3.0) == []


def test_wheeler_jumps():
    W = make_params((1, 1, -2), (0, 1, 2))
    base = solve_p(W.with_alpha0(W.alpha0 - 2), 3.0)
    reps = {r.location: r for r in discontinuities(W, 3.0, base)}
    assert set(reps) == {1.0, 2.0}
    assert abs(reps[2.0].measured_jump) <= 1e-8
    assert abs(reps[1.0].measured_jump) >= 0.1


def test_single_shift_jumps_do_not_cancel():
    P = make_params((2, -1), (0, 1))  # a = 3, m = 1
    base = solve_p(P.with_alpha0(P.alpha0 - 3), 4.0)
    for r in discontinuities(P, 3.5, base):
        assert abs(r.measured_jump) > 1e-3


def test_blowup_exponent():
    # p(u, 1.5, b) near u = 1 behaves like (u - 1)^(1 - a)
    P = make_params((0.5, -0.7), (0, 1))
    base = solve_p(P.with_alpha0(P.alpha0 - 1), 2.0)
    eps = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    vals = np.array([abs(lift_a(P, 1 + e, 1, base, "right")) for e in eps])
    slope = np.polyfit(np.log(eps), np.log(vals), 1)[0]
    assert abs(slope - (1 - 1.5)) <= 0.02
    rep = [r for r in discontinuities(P, 2.0) if r.location == 1.0][0]
    assert rep.local_exponent == pytest.approx(1 - 1.5)
    assert abs(vals[-1] / eps[-1] ** -0.5 - abs(rep.predicted_coefficient)) <= 0.02 * abs(rep.predicted_coefficient)


def test_superexponential_decay(dickman):
    # log rho(u) / (u log u) tends to -1, far below any linear rate
    us = np.arange(6.0, 12.5, 1.0)
    logs = np.log(np.abs([dickman(u) for u in us]))
    ratios = logs / (us * np.log(us))
    assert np.all(np.diff(logs) < 0)
    assert np.all(np.diff(np.diff(logs)) < 0)  # concave in u: slope keeps steepening
    assert np.all((-1.5 < ratios) & (ratios < -0.5))


def test_laplace_examples(dickman, buchstab_base):
    P = preset("dickman")
    assert laplace_rhs(P, 1.0) == pytest.approx(math.exp(-0.79659959929705313), rel=1e-14)
    for s in (0.5, 1.0, 2.0, 20.0):
        assert p_laplace_check(P, s, dickman)[2] <= 1e-6
        assert p_laplace_check(make_params((-1, -1), (0, 1)), s, buchstab_base)[2] <= 1e-6


def test_laplace_short_horizon():
    P = make_params((-0.5, -0.7), (0, 1))
    with pytest.raises(HorizonError) as exc:
        p_laplace_check(P, 0.05, solve_p(P, 3.0))
    assert exc.value.required_horizon > 3.0


@given(st.floats(-0.9, 0.9), st.floats(-1.5, 1.5).filter(lambda x: abs(x) > 0.05), st.floats(0.5, 1.5))
def test_laplace_random_small_horizon_large_s(a, al, v):
    P = make_params((a - 1, al), (0, v))
    sol = solve_p(P, 4.0)
    assert p_laplace_check(P, 20.0, sol)[2] <= 1e-6
