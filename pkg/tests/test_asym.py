import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddepair import DomainError, ValidationError, make_params, p_series, preset, q_series, q_series_inf, q_zero_asym, qstar, r_beta_poly
from ddepair.asym import p_zero_coefficient
from ddepair.pfun import p_solution
from ddepair.special import gamma_c


def test_c0_is_reciprocal_gamma():
    P = make_params((0.3 + 0.1j, -0.9, 0.2), (0, 1, 2.5))
    assert abs(p_series(P, 2).coefficients[0] - 1 / gamma_c(-P.beta)) <= 1e-14


def test_r_beta_examples():
    assert r_beta_poly(preset("buchstab")) == np.polynomial.Polynomial([1.0])
    assert np.allclose(r_beta_poly(make_params((-1, -1), (0, 1))).coef, [1.0, 1.0], atol=1e-15)
    assert np.allclose(r_beta_poly(make_params((0.5, -0.7, -0.8), (0, 1, 3))).coef, [1.0])
    with pytest.raises(DomainError):
        r_beta_poly(make_params((-0.5, -0.25), (0, 1)))
    with pytest.raises(DomainError):
        r_beta_poly(make_params((1, -1), (0, 1)))


@pytest.mark.parametrize("beta", [-1, -2, -3])
def test_cn_vanish_for_integer_beta(beta):
    P = make_params((beta - 0.4 - 0.3, 0.4, 0.3), (0, 1, 1.6))
    c = p_series(P, 6).coefficients
    for n in range(7):
        if beta >= -n:
            assert c[n] == 0
        else:
            assert c[n] != 0


def test_series_equals_r_beta_for_negative_integer():
    P = make_params((-1.5, -0.5), (0, 1.3))  # beta = -2
    s = p_series(P, 4)
    r = r_beta_poly(P)
    for u in (3.0, 7.0):
        assert s.evaluate(u) == pytest.approx(r(u), rel=1e-14)


def test_q_series_basics():
    P = make_params((1, -1), (0, 1))
    assert q_series_inf(P, 3.7, 1) == 1.0
    assert np.all(q_series(P, 5).coefficients[1:] == 0)
    Q = preset("iwaniec", 0.5)
    assert q_series_inf(Q, 7.0, 1) == 7.0**Q.beta
    with pytest.raises(ValidationError):
        q_series(Q, 0)
    with pytest.raises(ValidationError):
        p_series(Q, 0)


@given(st.floats(0.2, 3.0).filter(lambda k: abs(k - round(k)) > 0.05), st.floats(1.0, 50.0))
def test_q_series_n1_is_power(kappa, u):
    P = preset("iwaniec", kappa)
    assert q_series_inf(P, u, 1) == complex(u**P.beta)


def test_q_series_brackets_qstar():
    P = preset("iwaniec", 1.0)
    q = qstar(P, 20.0).value
    assert abs(q - q_series_inf(P, 20.0, 3)) <= 2 * abs(q_series(P, 3).term(3, 20.0))


@pytest.mark.parametrize("alphas", [(-0.5, -0.25), (-0.2, -0.6), (-1.1 + 0.2j, 0.4)])
def test_p_series_brackets_solution(alphas):
    P = make_params(alphas, (0, 1))
    sol = p_solution(P, 16.0)
    s = p_series(P, 3)
    u = 15.0
    for N in (1, 2, 3):
        assert abs(sol(u) - s.evaluate(u, N)) <= 2 * abs(s.term(N, u)) + 1e-10


def test_optimal_truncation_and_phi():
    s = p_series(make_params((-0.5, -0.25), (0, 1)), 12)
    N = s.optimal_truncation(3.0)
    assert 1 <= N <= 12
    assert s.phi(10.0) is None
    d = p_series(preset("dickman"), 3)
    assert d.phi(10.0) == pytest.approx(10 * math.log(10))


def test_q_zero_law():
    P = preset("iwaniec", 0.5)
    expo, K = q_zero_asym(P)
    assert expo == -0.5
    assert abs(K - math.sqrt(math.pi) * math.exp(-0.5772156649015329 / 2)) <= 1e-14
    u = 1e-3
    assert abs(qstar(P, u).value * u**0.5 / K - 1) <= 0.02
    with pytest.raises(DomainError):
        q_zero_asym(preset("iwaniec", 1.0))


@given(
    st.complex_numbers(max_magnitude=2).filter(lambda z: z.real < -0.05),
    st.floats(-1, 1).filter(lambda x: abs(x) > 0.05),
    st.floats(0.3, 2.0),
)
def test_reciprocity(a0, al, v):
    P = make_params((a0, al), (0, v))
    if abs(P.beta - round(P.beta.real)) < 1e-3 and round(P.beta.real) >= 0:
        return
    if abs(P.alpha0 - round(P.alpha0.real)) < 1e-3:
        return
    _, K = q_zero_asym(P)
    assert abs(K * p_zero_coefficient(P) - 1) <= 1e-12
