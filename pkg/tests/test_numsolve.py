import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import eigvalsh_tridiagonal

from esp import catalog, numsolve
from esp.errors import ParameterError, SolverError
from esp.numsolve import Boundary, GridSpec, ReducedProblem
from esp.xform import EndpointTag, Interval


def harmonic():
    # -u'' + r^2 u = E u on the half line, u(0) = 0: E = 3, 7, 11, ...
    return ReducedProblem(
        W=lambda r: np.square(np.asarray(r, dtype=float)),
        domain=Interval(0.0, np.inf, EndpointTag.REGULAR, EndpointTag.INFINITE),
        boundary=Boundary.MIXED_ORIGIN_DECAY,
        window=(0.0, 10.0),
        left_power=1.0,
        label="harmonic",
    )


def test_sturm_bisection_matches_lapack():
    prob = harmonic()
    grid = GridSpec(0.0, 10.0, 1201)
    ours = numsolve.fd_spectrum(prob, grid, 6)
    d, e2 = numsolve._fd_matrix(prob, grid)
    ref = eigvalsh_tridiagonal(d, -np.sqrt(e2), select="i", select_range=(0, 5))
    np.testing.assert_allclose(ours, ref, rtol=1e-12)


@settings(max_examples=15, deadline=None)
@given(coef=st.lists(st.floats(-5, 5), min_size=3, max_size=3), k=st.integers(1, 5))
def test_sturm_bisection_random_potentials(coef, k):
    a, b, c = coef
    prob = ReducedProblem(
        W=lambda r: a * np.sin(3 * r) + b * r + c * r * r,
        domain=Interval(0.0, 2.0), boundary=Boundary.DIRICHLET_BOTH, window=(0.0, 2.0),
    )
    grid = GridSpec(0.0, 2.0, 601)
    d, e2 = numsolve._fd_matrix(prob, grid)
    ref = eigvalsh_tridiagonal(d, -np.sqrt(e2), select="i", select_range=(0, k - 1))
    np.testing.assert_allclose(numsolve.fd_spectrum(prob, grid, k), ref, rtol=1e-11, atol=1e-9)


def test_richardson_beats_plain_fd():
    prob = harmonic()
    grid = GridSpec(0.0, 10.0, 1001)
    plain = numsolve.fd_spectrum(prob, grid, 3)
    ex, fine = numsolve.fd_spectrum_richardson(prob, grid, 3)
    exact = np.array([3.0, 7.0, 11.0])
    assert np.all(np.abs(np.array(ex) - exact) < 0.01 * np.abs(np.array(plain) - exact))
    assert np.all(np.abs(np.array(fine) - exact) < np.abs(np.array(plain) - exact))


def test_numerov_levels_and_nodes():
    prob = harmonic()
    grid = GridSpec(0.0, 10.0, 2001)
    fdv = numsolve.fd_spectrum_richardson(prob, grid, 5)
    for j, exact in enumerate([3.0, 7.0, 11.0, 15.0]):
        sol = numsolve.solve_level(prob, grid, j, fdv)
        assert sol.numerov.converged
        assert sol.numerov.E == pytest.approx(exact, rel=1e-9)
        assert sol.numerov.nodes == j


def test_numerov_needs_a_sign_change():
    with pytest.raises(SolverError):
        numsolve.numerov_shoot(harmonic(), GridSpec(0.0, 10.0, 1001), 3.5, 6.5)
    with pytest.raises(ParameterError):
        numsolve.numerov_shoot(harmonic(), GridSpec(0.0, 10.0, 1001), 4.0, 3.0)


def test_deterministic():
    prob = numsolve.reduce(catalog.build_model("ext-scarf1", {"A": 2.0, "B": 0.5}), 0, levels=3)
    grid = numsolve.default_grid(prob)
    assert numsolve.fd_spectrum(prob, grid, 3) == numsolve.fd_spectrum(prob, grid, 3)
    a = numsolve.solve_level(prob, grid, 1).numerov.E
    b = numsolve.solve_level(prob, grid, 1).numerov.E
    assert a == b


def test_grid_validation_and_refinement():
    with pytest.raises(ParameterError):
        GridSpec(0.0, 1.0, 500)
    with pytest.raises(ParameterError):
        GridSpec(1.0, 0.0, 1001)
    g = GridSpec(0.0, 1.0, 501)
    assert g.refined().points == 1001 and g.refined().h == pytest.approx(g.h / 2)


def test_env_override(monkeypatch):
    prob = harmonic()
    monkeypatch.setenv("ESP_GRID_POINTS", "777")
    assert numsolve.default_grid(prob).points == 777
    monkeypatch.setenv("ESP_GRID_POINTS", "lots")
    with pytest.raises(ParameterError):
        numsolve.default_grid(prob)
    monkeypatch.setenv("ESP_GRID_POINTS", "100")
    with pytest.raises(ParameterError):
        numsolve.default_grid(prob)


def test_reduce_boundaries():
    osc = catalog.build_model("ext-oscillator", {"omega": 2.0, "ell": 1, "dim": 5})
    assert numsolve.reduce(osc, 0).boundary is Boundary.MIXED_ORIGIN_DECAY
    mo = catalog.build_model("ext-morse", {"p2": 1.0, "A": 4.5})
    assert numsolve.reduce(mo, 2).boundary is Boundary.DECAY_BOTH
    sc = catalog.build_model("ext-scarf1", {"A": 2.0, "B": 0.5})
    assert numsolve.reduce(sc, 0).boundary is Boundary.DIRICHLET_BOTH
    with pytest.raises(ParameterError):
        numsolve.reduce(mo, 4)


def test_count_nodes_and_brackets():
    assert numsolve.count_nodes(np.sin(np.linspace(0, 3 * np.pi, 1000))[1:-1]) == 2
    assert numsolve.count_nodes(np.zeros(5)) == 0
    lo, hi = numsolve.bracket_around([1.0, 1.05, 3.0], 1)
    assert lo == pytest.approx(1.025) and hi == pytest.approx(1.05 * 1.1)


def test_square_well_orders():
    from esp.verify import square_well_convergence

    st_ = square_well_convergence()
    assert 1.8 <= st_.fd_order <= 2.2
    assert 3.5 <= st_.numerov_order <= 4.5
    assert st_.numerov_err[-1] < st_.fd_err[-1]
