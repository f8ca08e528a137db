import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddepair import (
    RepresentationError,
    dde_residual,
    integral_form_constant,
    make_params,
    preset,
    qstar,
    qstar_hankel,
    qstar_laplace,
    qstar_many,
)
from ddepair.asym import q_series, q_series_inf
from oracles import QSTAR_HANKEL, QSTAR_LAPLACE


@pytest.mark.parametrize("alphas, shifts, u, ref", QSTAR_LAPLACE)
def test_laplace_oracle(alphas, shifts, u, ref):
    P = make_params(alphas, shifts)
    assert abs(qstar_laplace(P, u) - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("alphas, shifts, u, ref", QSTAR_HANKEL)
def test_hankel_oracle(alphas, shifts, u, ref):
    P = make_params(alphas, shifts)
    r = qstar(P, u)
    assert r.representation_used == "hankel"
    assert abs(r.value - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("alphas, shifts, u, ref", QSTAR_LAPLACE[2:])
def test_hankel_agrees_on_laplace_oracles(alphas, shifts, u, ref):
    assert abs(qstar_hankel(make_params(alphas, shifts), u) - ref) <= 1e-9 * abs(ref)


def test_hankel_rejects_negative_integer_beta():
    with pytest.raises(RepresentationError, match="pole"):
        qstar_hankel(preset("iwaniec", 1.0), 1.0)


def test_polynomial_cases():
    r = qstar(make_params((1, -1), (0, 1)), 7.0)
    assert r.value == 1.0 and r.representation_used == "polynomial" and r.est_error == 0
    assert qstar(make_params((2, -1), (0, 1)), 7.0).value == pytest.approx(8.0, abs=1e-13)


def test_wrong_representation():
    with pytest.raises(RepresentationError):
        qstar_laplace(make_params((2.5, -1), (0, 1)), 1.0)


def test_dispatch_near_integer_beta_warns():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        qstar(make_params((1 + 1e-7, -1), (0, 1)), 2.0)
    assert any(issubclass(x.category, RuntimeWarning) for x in w)


@pytest.mark.parametrize("alphas", [(0, -1), (-0.5, -0.5), (-0.5, -0.25), (0.4, -0.3, -0.8)])
def test_positive_convex_log_convex(alphas):
    P = make_params(alphas, (0, 1, 2)[: len(alphas)])
    u = np.linspace(0.5, 12, 60)
    vals = qstar_many(P, u)[0]
    assert np.all(vals.imag == 0)
    q = vals.real
    assert np.all(q > 0)
    assert np.all(np.diff(q, 2) >= -1e-9)
    assert np.all(np.diff(np.log(q), 2) >= -1e-9)


@pytest.mark.parametrize("kappa", [0.5, 1.0, 1.5])
def test_large_u_normalisation(kappa):
    # q*(u) ~ u^beta with relative corrections bracketed by the next term
    P = preset("iwaniec", kappa)
    q50 = qstar(P, 50.0).value
    assert abs(q50 - q_series_inf(P, 50.0, 3)) <= 2 * abs(q_series(P, 3).term(3, 50.0))
    c1 = q_series(P, 2).coefficients[1]
    assert abs(q50 * 50.0 ** (-P.beta) - 1) <= 5 * abs(c1) / 50.0


@pytest.mark.parametrize(
    "name, kappa", [("iwaniec", 1.0), ("iwaniec", 0.5), ("iwaniec", 2.5), ("dickman", None), ("buchstab", None)]
)
def test_residual(name, kappa):
    P = preset(name, kappa)
    for u in (2.0, 5.0, 10.0):
        assert dde_residual(P, u) <= 1e-6


def test_integral_form_constant():
    P = preset("iwaniec", 1.0)
    mean, dev = integral_form_constant(P, [2.0, 5.0, 10.0])
    assert dev <= 1e-7
    assert mean.real > 0
    assert integral_form_constant(preset("iwaniec", 2.0), [3.0, 6.0, 9.0])[1] <= 1e-7
    with pytest.warns(RuntimeWarning, match="beta = -1"):
        _, dev2 = integral_form_constant(make_params((1, -1), (0, 1)), [1.0, 2.0])
    assert dev2 == pytest.approx(0.5, abs=1e-12)  # A(u) = u + 1 on {1, 2}


@given(
    st.floats(-1.8, -0.1).filter(lambda b: abs(b + 1) > 0.05),
    st.floats(-0.8, 0.8).filter(lambda x: abs(x) > 0.05),
    st.floats(0.5, 1.5),
    st.floats(0.8, 6.0),
)
def test_representations_agree(beta, alpha1, v, u):
    P = make_params((beta - alpha1, alpha1), (0, v))
    lap, han = qstar_laplace(P, u), qstar_hankel(P, u)
    assert abs(lap - han) <= 1e-8 * max(1.0, abs(lap))


@given(st.floats(1.0, 10.0))
def test_conjugate_parameters(u):
    P = make_params((0.3 + 0.4j, -1.1 - 0.2j), (0, 1))
    Q = make_params((0.3 - 0.4j, -1.1 + 0.2j), (0, 1))
    a, b = qstar(P, u).value, qstar(Q, u).value
    assert abs(a - b.conjugate()) <= 1e-10 * abs(a)


def test_iwaniec_one_at_ten():
    P = preset("iwaniec", 1.0)
    r = qstar(P, 10.0)
    assert r.representation_used == "laplace"
    assert abs(10.0 * r.value - 1) <= 0.12


def test_hankel_at_beta_minus_half():
    # beta = -1/2 stand-in for the iwaniec(1/2) example, whose beta is -1
    P = make_params((0.0, -0.5), (0, 1))
    v = qstar_hankel(P, 20.0)
    assert abs(20.0**0.5 * v - 1) <= 0.08
    assert abs(v - qstar_laplace(P, 20.0)) <= 1e-8
