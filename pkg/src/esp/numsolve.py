"""Numerical eigensolvers for ``-u'' + W(r) u = E u`` on a uniform grid.

Two independent methods:

* a three-point finite-difference matrix whose eigenvalues are located by
  Sturm-sequence bisection (:func:`fd_spectrum`);
* Numerov shooting from both ends with bisection on the matching defect
  (:func:`numerov_shoot`).

Both treat the truncated ends as Dirichlet walls. The inner loops are
compiled with numba.
"""

import enum
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numba
import numpy as np

from .errors import ParameterError, SolverError
from .xform import EndpointTag, Interval

__all__ = [
    "Boundary",
    "GridSpec",
    "ReducedProblem",
    "EigenResult",
    "reduce",
    "default_grid",
    "fd_spectrum",
    "fd_spectrum_richardson",
    "numerov_shoot",
    "count_nodes",
    "bracket_around",
    "solve_level",
    "LevelSolution",
    "DEFAULT_POINTS",
]

DEFAULT_POINTS = 8001
_NUMEROV_START = 0.2  # max h^2 |E - W| / 12 at the first integrated point


class Boundary(enum.Enum):
    DIRICHLET_BOTH = "dirichlet-both"
    DECAY_BOTH = "decay-both"
    MIXED_ORIGIN_DECAY = "mixed-origin-decay"


@dataclass(frozen=True)
class GridSpec:
    r_min: float
    r_max: float
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not self.r_min < self.r_max:
            raise ParameterError(f"grid needs r_min < r_max, got {self.r_min}, {self.r_max}")
        if int(self.points) != self.points or self.points < 501:
            raise ParameterError(f"grid needs at least 501 points, got {self.points}")

    @property
    def h(self):
        return (self.r_max - self.r_min) / (self.points - 1)

    @property
    def r(self):
        return np.linspace(self.r_min, self.r_max, int(self.points))

    def refined(self):
        """Same interval with the spacing halved."""
        return GridSpec(self.r_min, self.r_max, 2 * int(self.points) - 1)


@dataclass(frozen=True)
class ReducedProblem:
    """``W`` is the full effective potential of the reduced function u.

    ``left_power``/``right_power`` are the exponents s of ``u ~ x^s`` at a
    singular finite end (x = distance to the end); they seed the shooting.
    ``window`` is the default truncated interval.
    """

    W: Callable
    domain: Interval
    boundary: Boundary
    window: tuple
    left_power: Optional[float] = None
    right_power: Optional[float] = None
    label: str = ""


@dataclass
class EigenResult:
    E: float
    u: np.ndarray = field(repr=False)
    nodes: int
    converged: bool
    iterations: int
    defect: float = math.nan


def _boundary_for(domain: Interval):
    lo_inf = domain.lo_tag is EndpointTag.INFINITE
    hi_inf = domain.hi_tag is EndpointTag.INFINITE
    if lo_inf and hi_inf:
        return Boundary.DECAY_BOTH
    if hi_inf:
        return Boundary.MIXED_ORIGIN_DECAY
    return Boundary.DIRICHLET_BOTH


def reduce(model, m, levels=None) -> ReducedProblem:
    """Reduced problem for level ``m`` of a catalog model.

    ``u = r^((D-1)/2) psi`` turns the radial equation into
    ``-u'' + W u = E u`` with ``W = V + (D-1)(D-3)/(4 r^2)``; the model's V
    already carries any angular-momentum barrier. ``levels`` sizes the
    default window (defaults to ``m + 1``).
    """
    model.check_level(m)
    D = model.dim
    k = (D - 1) * (D - 3)

    def W(r, _m=m):
        r = np.asarray(r, dtype=float)
        out = model.V(r, _m)
        return out + k / (4 * r * r) if k else out

    lp, rp = model.edge_powers(m)
    return ReducedProblem(
        W=W,
        domain=model.domain,
        boundary=_boundary_for(model.domain),
        window=model.numeric_window(levels if levels is not None else m + 1),
        left_power=lp,
        right_power=rp,
        label=f"{model.id.value}:m={m}",
    )


def default_grid(prob: ReducedProblem, points=None) -> GridSpec:
    if points is None:
        env = os.environ.get("ESP_GRID_POINTS")
        if env is not None:
            try:
                points = int(env)
            except ValueError:
                raise ParameterError(f"ESP_GRID_POINTS must be an integer, got {env!r}") from None
        else:
            points = DEFAULT_POINTS
    return GridSpec(prob.window[0], prob.window[1], points)


# Finite differences --------------------------------------------------------


@numba.njit(cache=True)
def _sturm_count(d, e2, x):
    # eigenvalues of the symmetric tridiagonal matrix below x
    count = 0
    q = d[0] - x
    if q < 0:
        count += 1
    for i in range(1, d.shape[0]):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e2[i - 1] / q
        if q < 0:
            count += 1
    return count


@numba.njit(cache=True)
def _bisect_lowest(d, e2, k, lo, hi):
    out = np.empty(k)
    for j in range(k):
        a, b = lo, hi
        for _ in range(200):
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            if _sturm_count(d, e2, mid) > j:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
        lo = a
    return out


def _fd_matrix(prob, grid):
    r = grid.r[1:-1]
    h = grid.h
    W = np.asarray(prob.W(r), dtype=float)
    if not np.all(np.isfinite(W)):
        raise SolverError(f"W is not finite on the grid for {prob.label}")
    d = 2.0 / (h * h) + W
    e2 = np.full(r.size - 1, 1.0 / h**4)
    return d, e2


def fd_spectrum(prob: ReducedProblem, grid: GridSpec, k: int):
    """Lowest ``k`` eigenvalues of the finite-difference operator, ascending."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    d, e2 = _fd_matrix(prob, grid)
    off = 1.0 / grid.h**2
    lo = float(np.min(d)) - 2 * off
    hi = float(np.max(d)) + 2 * off
    if _sturm_count(d, e2, lo) != 0 or _sturm_count(d, e2, hi) < min(k, d.size):
        raise SolverError("Gershgorin interval does not bracket the spectrum")
    if k > d.size:
        raise ParameterError("k exceeds the number of interior grid points")
    return [float(v) for v in _bisect_lowest(d, e2, int(k), lo, hi)]


def fd_spectrum_richardson(prob: ReducedProblem, grid: GridSpec, k: int):
    """FD eigenvalues extrapolated from ``grid`` and its halved-spacing refinement.

    Returns ``(extrapolated, fine)`` lists.
    """
    coarse = fd_spectrum(prob, grid, k)
    fine = fd_spectrum(prob, grid.refined(), k)
    return [(4 * f - c) / 3 for c, f in zip(coarse, fine)], fine


# Numerov ---------------------------------------------------------------------


@numba.njit(cache=True)
def _numerov_sweep(f, y, start, stop, step):
    """Fill y[start + 2*step ... stop] from seeds y[start], y[start+step]."""
    i = start + step
    while i != stop:
        nxt = i + step
        y[nxt] = (12.0 - 10.0 * f[i]) / f[i] * y[i] - y[i - step]
        if abs(y[nxt]) > 1e250:
            j = start
            while j != nxt + step:
                y[j] *= 1e-250
                j += step
        i = nxt


def _starts(Wg, E, h):
    ok = np.nonzero(h * h * np.abs(E - Wg) / 12.0 <= _NUMEROV_START)[0]
    if ok.size < 4:
        raise SolverError("no grid point where the Numerov step is stable")
    return int(ok[0]), int(ok[-1])


def _match_index(Wg, E, i0, i1):
    allowed = np.nonzero(E - Wg[i0 : i1 + 1] > 0)[0]
    if allowed.size:
        im = i0 + int(allowed[-1])
    else:
        im = (i0 + i1) // 2
    return min(max(im, i0 + 2), i1 - 3)


def _shoot(prob, r, Wg, E, h, edges):
    """Return (defect, u) for trial energy E."""
    n = r.size
    f = 1.0 + h * h * (E - Wg) / 12.0
    i0, i1 = _starts(Wg, E, h)
    im = _match_index(Wg, E, i0, i1)

    yl = np.zeros(n)
    yr = np.zeros(n)
    lo_edge, hi_edge = edges
    if prob.left_power is not None and math.isfinite(lo_edge):
        x = r[i0 : i0 + 2] - lo_edge
        yl[i0 : i0 + 2] = f[i0 : i0 + 2] * x**prob.left_power
    else:
        yl[i0], yl[i0 + 1] = 0.0, f[i0 + 1]
    if prob.right_power is not None and math.isfinite(hi_edge):
        x = hi_edge - r[i1 - 1 : i1 + 1]
        yr[i1 - 1 : i1 + 1] = f[i1 - 1 : i1 + 1] * x**prob.right_power
    else:
        yr[i1], yr[i1 - 1] = 0.0, f[i1 - 1]

    _numerov_sweep(f, yl, i0, im + 1, 1)
    _numerov_sweep(f, yr, i1, im, -1)

    a0, a1 = yl[im], yl[im + 1]
    b0, b1 = yr[im], yr[im + 1]
    cas = a0 * b1 - a1 * b0
    defect = cas / (math.hypot(a0, a1) * math.hypot(b0, b1))

    ul = yl / f
    ur = yr / f
    scale = ul[im] / ur[im] if ur[im] != 0 else 1.0
    u = np.concatenate([ul[: im + 1], scale * ur[im + 1 :]])
    return defect, u


def numerov_shoot(prob: ReducedProblem, grid: GridSpec, E_lo, E_hi, target_nodes=None,
                  rel_tol=1e-10, max_iter=200):
    """Refine the eigenvalue inside ``[E_lo, E_hi]`` by Numerov shooting.

    The bracket must contain exactly one eigenvalue; the matching defect
    (normalized Casoratian of the two one-sided solutions) changes sign
    across it. ``target_nodes`` is optional; when given, ``converged``
    also requires the node count to agree.
    """
    if not E_lo < E_hi:
        raise ParameterError("bracket needs E_lo < E_hi")
    r, h = grid.r, grid.h
    Wg = np.asarray(prob.W(r), dtype=float)
    if not np.all(np.isfinite(Wg)):
        raise SolverError(f"W is not finite on the grid for {prob.label}")
    edges = (prob.domain.lo, prob.domain.hi)

    d_lo, _ = _shoot(prob, r, Wg, E_lo, h, edges)
    d_hi, _ = _shoot(prob, r, Wg, E_hi, h, edges)
    if d_lo == 0:
        E_hi = E_lo
    elif d_hi == 0:
        E_lo = E_hi
    elif np.sign(d_lo) == np.sign(d_hi):
        raise SolverError(f"matching defect has no sign change on [{E_lo}, {E_hi}]")

    it = 0
    a, b, da = E_lo, E_hi, d_lo
    while b - a > rel_tol * max(1.0, abs(0.5 * (a + b))) and it < max_iter:
        mid = 0.5 * (a + b)
        dm, _ = _shoot(prob, r, Wg, mid, h, edges)
        it += 1
        if dm == 0:
            a = b = mid
            break
        if np.sign(dm) == np.sign(da):
            a, da = mid, dm
        else:
            b = mid
    E = 0.5 * (a + b)
    defect, u = _shoot(prob, r, Wg, E, h, edges)
    nodes = count_nodes(u)
    converged = b - a <= rel_tol * max(1.0, abs(E))
    if target_nodes is not None:
        converged = converged and nodes == target_nodes
    return EigenResult(E=E, u=u, nodes=nodes, converged=converged, iterations=it,
                       defect=float(defect))


def count_nodes(u) -> int:
    """Strict sign changes of ``u``, ignoring samples below 1e-12 of the peak."""
    u = np.asarray(u, dtype=float)
    if u.size < 3:
        raise ParameterError("need at least 3 samples")
    peak = np.max(np.abs(u))
    if peak == 0:
        return 0
    s = np.sign(u[np.abs(u) >= 1e-12 * peak])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def bracket_around(values, j, frac=0.1):
    """Bracket for eigenvalue ``values[j]``: +-frac of its size, clipped at half-gaps."""
    E = values[j]
    width = frac * max(abs(E), 1e-3)
    lo, hi = E - width, E + width
    if j > 0:
        lo = max(lo, 0.5 * (values[j - 1] + E))
    if j + 1 < len(values):
        hi = min(hi, 0.5 * (values[j + 1] + E))
    return lo, hi


@dataclass
class LevelSolution:
    """FD (Richardson-extrapolated) and Numerov values for one eigenvalue index."""

    index: int
    E_fd: float
    E_fd_fine: float
    numerov: EigenResult


def solve_level(prob: ReducedProblem, grid: GridSpec, j: int, fd_values=None):
    """Eigenvalue ``j`` (0-based) of ``prob`` by both methods.

    One extra FD eigenvalue is computed so the shooting bracket never
    reaches past the neighbor above.
    """
    if fd_values is None:
        fd_values = fd_spectrum_richardson(prob, grid, j + 2)
    ex, fine = fd_values
    if len(ex) < j + 2:
        raise ParameterError("need FD eigenvalues up to index j + 1 to bracket index j")
    res = numerov_shoot(prob, grid, *bracket_around(ex, j))
    return LevelSolution(index=j, E_fd=ex[j], E_fd_fine=fine[j], numerov=res)
