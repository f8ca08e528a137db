import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddepair import AccuracyError, QuadratureConfig, ValidationError
from ddepair.quadrature import adaptive_gk, gl_integrate, singular_moment


def test_gk_smooth():
    r = adaptive_gk(np.exp, 0.0, 1.0, abs_tol=1e-14, rel_tol=1e-14)
    assert r.value == pytest.approx(math.e - 1, rel=1e-14)


def test_gk_vector_and_complex():
    r = adaptive_gk(lambda x: np.stack([np.exp(1j * x), x**2]), 0.0, math.pi, 1e-13, 1e-13)
    assert r.value[0] == pytest.approx(2j, abs=1e-13)
    assert r.value[1] == pytest.approx(math.pi**3 / 3, rel=1e-13)


def test_gk_breakpoints():
    r = adaptive_gk(np.abs, -1.0, 2.0, 1e-14, 1e-14, breakpoints=[0.0])
    assert r.value == pytest.approx(2.5, rel=1e-14)
    assert r.intervals == 2


def test_gk_budget_exhausted():
    with pytest.raises(AccuracyError) as exc:
        adaptive_gk(lambda x: np.sin(1 / x), 1e-9, 1.0, 1e-15, 1e-15, max_subdivisions=8)
    assert exc.value.estimate is not None


@given(st.floats(-2.5, 0.999), st.floats(0.1, 3.0))
def test_singular_moment_power(a, h):
    # int_0^h x^-a e^x dx against the series sum h^(k+1-a) / (k! (k+1-a))
    got = singular_moment(np.exp, a, h)
    ref = sum(h ** (k + 1 - a) / (math.factorial(k) * (k + 1 - a)) for k in range(60))
    assert abs(got - ref) <= 1e-12 * abs(ref) * max(1.0, 1 / (1 - a))


def test_singular_moment_complex_exponent():
    a = 0.4 + 0.7j
    got = singular_moment(lambda x: np.ones_like(x), a, 2.0)
    assert abs(got - 2.0 ** (1 - a) / (1 - a)) <= 1e-13


def test_gl():
    assert gl_integrate(lambda x: x**7, 0.0, 2.0, 8) == pytest.approx(32.0, rel=1e-14)


def test_config_validation():
    with pytest.raises(ValidationError):
        QuadratureConfig(abs_tol=0)
    with pytest.raises(ValidationError):
        QuadratureConfig(hankel_radius=1.0, hankel_ray_length=0.5)
    with pytest.raises(ValidationError):
        QuadratureConfig(max_subdivisions=0)
