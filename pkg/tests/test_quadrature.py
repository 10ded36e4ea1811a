import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from esp.errors import ConvergenceError, ParameterError
from esp.quadrature import QuadratureRule, RuleKind, gauss_nodes, integrate

INF = QuadratureRule(kind=RuleKind.TRUNCATED_INFINITE)


def test_gauss_nodes_integrate_polynomials_exactly():
    x, w = gauss_nodes(15)
    assert w.sum() == pytest.approx(2.0, abs=1e-14)
    assert (w * x**28).sum() == pytest.approx(2 / 29, rel=1e-13)
    with pytest.raises(ValueError):
        x[0] = 1.0  # cached arrays are read-only


@settings(max_examples=30)
@given(k=st.integers(0, 10), a=st.floats(-3, 0), b=st.floats(0.1, 3))
def test_monomials(k, a, b):
    val, err = integrate(lambda x: x**k, (a, b))
    exact = (b ** (k + 1) - a ** (k + 1)) / (k + 1)
    assert val == pytest.approx(exact, rel=1e-12, abs=1e-12)


def test_gaussian_whole_line():
    val, _ = integrate(lambda x: np.exp(-x * x), (-math.inf, math.inf), INF)
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_half_line_gamma():
    val, _ = integrate(lambda x: x**3 * np.exp(-x), (0.0, math.inf), INF)
    assert val == pytest.approx(6.0, rel=1e-12)


def test_left_infinite():
    val, _ = integrate(lambda x: np.exp(x), (-math.inf, 0.0), INF)
    assert val == pytest.approx(1.0, rel=1e-12)


def test_deterministic_bits():
    f = lambda x: np.sin(3 * x) * np.exp(-x)  # noqa: E731
    assert integrate(f, (0, 7))[0] == integrate(f, (0, 7))[0]


def test_slow_tail_raises_with_estimates():
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: 1.0 / (1.0 + x), (0.0, math.inf), INF)
    assert len(info.value.estimates) == 2


def test_rejects_bad_input():
    with pytest.raises(ParameterError):
        integrate(lambda x: x, (1.0, 0.0))
    with pytest.raises(ParameterError):
        integrate(lambda x: x, (0.0, math.inf))  # needs the truncated rule
    with pytest.raises(ParameterError):
        QuadratureRule(panels=0)
