import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from esp import specfun
from esp.errors import ParameterError
from esp.xform import (
    Characteristics, EndpointTag, Interval, WavefunctionFactory, exponential_map,
    ev_functional, identity_map, jacobi_characteristics, laguerre_characteristics,
    make_spec, make_wavefunction, quadratic_map, schrodinger_residual, schwarzian, sine_map,
    tanh_map,
)

MAPS = {
    "quadratic": (quadratic_map(0.7), 0.3, 3.0),
    "exponential": (exponential_map(1.3), -2.0, 2.0),
    "sine": (sine_map(1.5), -0.9, 0.9),
    "tanh": (tanh_map(0.8), -2.5, 2.5),
}


@pytest.mark.parametrize("name", MAPS)
def test_map_derivatives_against_differences(name):
    cmap, lo, hi = MAPS[name]
    r = np.linspace(lo, hi, 13)
    h = 1e-5
    for f, df in ((cmap.g, cmap.g1), (cmap.g1, cmap.g2), (cmap.g2, cmap.g3)):
        num = (f(r + h) - f(r - h)) / (2 * h)
        np.testing.assert_allclose(df(r), num, rtol=1e-7, atol=1e-8)


def test_schwarzian_closed_forms():
    spec = make_spec(identity_map(2.0, 1.0), laguerre_characteristics(1.0, 1), Interval(0, 1))
    np.testing.assert_allclose(schwarzian(spec, np.array([0.2, 0.7])), 0.0)
    p = 1.5
    spec = make_spec(sine_map(p), jacobi_characteristics(1.0, 2.0, 1), Interval(-1, 1))
    r = np.array([-0.5, 0.1, 0.6])
    expected = -p * p - 1.5 * (p * np.tan(p * r)) ** 2
    np.testing.assert_allclose(schwarzian(spec, r), expected, rtol=1e-12)


def _classical_laguerre(alpha, n):
    return Characteristics(
        M=lambda g: (alpha + 1) / g - 1,
        J=lambda g: n / g + 0 * g,
        int_M=lambda g: (alpha + 1) * np.log(g) - g,
        dM=lambda g: -(alpha + 1) / g**2,
    )


@settings(max_examples=30, deadline=None)
@given(omega=st.floats(0.3, 5.0), ell=st.integers(0, 4), n=st.integers(0, 5))
def test_classical_laguerre_regenerates_the_oscillator(omega, ell, n):
    # Laguerre characteristics with g = omega r^2 / 2 give the 3D oscillator
    alpha = ell + 0.5
    spec = make_spec(quadratic_map(omega / 2), _classical_laguerre(alpha, n),
                     Interval(0, np.inf, EndpointTag.REGULAR, EndpointTag.INFINITE))
    r = np.linspace(0.2, 6.0, 40)
    E = omega * (2 * n + ell + 1.5)
    V = 0.25 * omega**2 * r**2 + ell * (ell + 1) / r**2
    np.testing.assert_allclose(ev_functional(spec, 3, r) + E, V, rtol=1e-10, atol=1e-10)


def test_wavefunction_from_factory_solves_the_radial_equation():
    omega, ell, n = 1.5, 1, 2
    alpha = ell + 0.5
    spec = make_spec(quadratic_map(omega / 2), _classical_laguerre(alpha, n),
                     Interval(0, np.inf, EndpointTag.REGULAR, EndpointTag.INFINITE))
    psi = make_wavefunction(WavefunctionFactory(spec, Q=lambda g: specfun.laguerre(n, alpha, g), D=3))
    E = omega * (2 * n + ell + 1.5)
    V = lambda r: 0.25 * omega**2 * r**2 + ell * (ell + 1) / r**2  # noqa: E731
    r = np.linspace(0.3, 5.0, 50)
    res = schrodinger_residual(V, E, psi, 3, r, scale=1e-3 * np.max(np.abs(E * psi(r))))
    assert np.max(res) < 1e-6
    assert isinstance(psi(1.0), float)


@pytest.mark.parametrize("ch, g", [
    (laguerre_characteristics(1.7, 3), np.linspace(0.2, 8.0, 15)),
    (jacobi_characteristics(1.5, 0.5, 2), np.linspace(-0.9, 0.9, 15)),
])
def test_analytic_m_prime_matches_difference(ch, g):
    h = 1e-6
    np.testing.assert_allclose(ch.dM(g), (ch.M(g + h) - ch.M(g - h)) / (2 * h), rtol=1e-6)


def test_numeric_m_prime_fallback():
    ch = jacobi_characteristics(1.5, 0.5, 2)
    with_dm = make_spec(sine_map(), ch, Interval(-1.5, 1.5))
    no_dm = make_spec(sine_map(), Characteristics(ch.M, ch.J, ch.int_M, ch.singular), Interval(-1.5, 1.5))
    r = np.linspace(-1.2, 1.2, 21)
    np.testing.assert_allclose(ev_functional(no_dm, 1, r), ev_functional(with_dm, 1, r), rtol=1e-6)


def test_dimension_term():
    spec = make_spec(quadratic_map(1.0), laguerre_characteristics(1.0, 1), Interval(0, 5))
    r = np.array([0.5, 1.0])
    d = ev_functional(spec, 5, r) - ev_functional(spec, 3, r)
    np.testing.assert_allclose(d, -8 / (4 * r**2))
    np.testing.assert_allclose(ev_functional(spec, 1, r), ev_functional(spec, 3, r))


def test_interval():
    iv = Interval(0.0, 1.0)
    assert iv.contains([0.1, 0.9]) and not iv.contains([0.0, 0.5])
    assert iv.interior(3).tolist() == [0.25, 0.5, 0.75]
    with pytest.raises(ParameterError):
        Interval(1.0, 1.0)
