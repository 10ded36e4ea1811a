import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import Polynomial
from scipy import special

from esp import specfun
from esp.errors import ParameterError

alphas = st.floats(-0.95, 8.0)
zs = st.floats(-1.0, 1.0)


@given(n=st.integers(0, 12), a=alphas, z=st.floats(0.0, 30.0))
def test_laguerre_matches_scipy(n, a, z):
    ref = special.eval_genlaguerre(n, a, z)
    assert specfun.laguerre(n, a, z) == pytest.approx(ref, rel=1e-9, abs=1e-9 * math.exp(z / 2))


@given(n=st.integers(0, 12), a=alphas, b=alphas, z=zs)
def test_jacobi_matches_scipy(n, a, b, z):
    ref = special.eval_jacobi(n, a, b, z)
    scale = max(1.0, abs(special.eval_jacobi(n, a, b, 1.0)), abs(special.eval_jacobi(n, a, b, -1.0)))
    assert specfun.jacobi(n, a, b, z) == pytest.approx(ref, abs=1e-11 * scale)


def test_low_degrees_explicit():
    assert specfun.laguerre(0, 0.3, 5.0) == 1.0
    assert specfun.laguerre(1, 0.3, 5.0) == pytest.approx(1.3 - 5.0)
    assert specfun.jacobi(1, 2.0, 1.0, 1.0) == pytest.approx(3.0)  # P_1(1) = alpha + 1
    assert specfun.jacobi(1, 2.0, 1.0, -1.0) == pytest.approx(-2.0)  # -(beta + 1)


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_polynomial_form_agrees_with_pointwise(n):
    z = np.linspace(-1, 1, 11)
    P = specfun.jacobi_poly(n, 0.5, 1.5)
    assert isinstance(P, Polynomial) and P.degree() == n
    np.testing.assert_allclose(P(z), specfun.jacobi(n, 0.5, 1.5, z), atol=1e-12)
    L = specfun.laguerre_poly(n, 2.0)
    np.testing.assert_allclose(L(3 * z + 3), specfun.laguerre(n, 2.0, 3 * z + 3), atol=1e-10)


def test_array_input_keeps_shape():
    z = np.zeros((3, 4))
    assert specfun.laguerre(0, 1.0, z).shape == (3, 4)
    assert specfun.jacobi(3, 1.0, 2.0, z).shape == (3, 4)


@pytest.mark.parametrize("call", [
    lambda: specfun.laguerre(-1, 0.0, 1.0),
    lambda: specfun.laguerre(1.5, 0.0, 1.0),
    lambda: specfun.laguerre(2, -1.0, 1.0),
    lambda: specfun.jacobi(2, -1.5, 0.0, 0.1),
    lambda: specfun.log_gamma(0.0),
])
def test_invalid_arguments(call):
    with pytest.raises(ParameterError):
        call()


@settings(max_examples=50)
@given(x=st.floats(1e-3, 150.0))
def test_log_gamma(x):
    assert specfun.log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-13, abs=1e-13)
