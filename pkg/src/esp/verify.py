"""Validation of the closed forms against independent numerics.

:func:`verify_family` compares analytic energies with both eigensolvers and
checks normalization, the radial equation residual and node counts.
Reports serialize to JSON with every float rounded to 12 significant digits,
so emitting and re-parsing a report gives back an equal object.
"""

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from . import catalog, eop, numsolve
from .catalog import FamilyId, Reading
from .errors import ConvergenceError, ParameterError, SolverError, SingularityError
from .quadrature import QuadratureRule, RuleKind, integrate
from .xform import ev_functional, schrodinger_residual

__all__ = [
    "Tolerances",
    "SpectrumRow",
    "SpectrumReport",
    "OrthonormalityReport",
    "IsospectralReport",
    "ReadingResolution",
    "verify_family",
    "verify_orthonormality",
    "verify_isospectral",
    "resolve_reading",
    "resolve_morse_reading",
    "identity_deviation",
    "normalization_integral",
    "closed_form_nodes",
    "EopGramReport",
    "eop_gram",
    "MatrixEntry",
    "VALIDATION_MATRIX",
    "ConvergenceStudy",
    "square_well_convergence",
]

NODE_GRID = 10_000
IDENTITY_POINTS = 200


def _r12(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class Tolerances:
    spectrum_rel: float = 1e-5
    spectrum_abs: float = 1e-7
    norm: float = 1e-6
    orthogonality: float = 1e-8
    residual: float = 1e-5
    identity: float = 1e-6
    cross_solver_factor: float = 10.0


@dataclass
class SpectrumRow:
    m: int
    E_analytic: Optional[float]
    E_numeric_fd: Optional[float]
    E_numeric_numerov: Optional[float]
    abs_err: Optional[float]
    rel_err: Optional[float]
    nodes_expected: Optional[int]
    nodes_found: Optional[int]
    norm_dev: Optional[float]
    residual_max: Optional[float]

    def __post_init__(self):
        for name in ("E_analytic", "E_numeric_fd", "E_numeric_numerov", "abs_err",
                     "rel_err", "norm_dev", "residual_max"):
            setattr(self, name, _r12(getattr(self, name)))


@dataclass
class SpectrumReport:
    family: str
    params: dict
    resolved_reading: Optional[str]
    rows: List[SpectrumRow]
    passed: bool
    tolerances: dict
    errors: List[str] = field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self):
        return {
            "family": self.family,
            "params": self.params,
            "resolved_reading": self.resolved_reading,
            "rows": [asdict(r) for r in self.rows],
            "pass": self.passed,
            "tolerances": self.tolerances,
            "errors": list(self.errors),
            "wall_time": self.wall_time,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        return cls(
            family=d["family"],
            params=d["params"],
            resolved_reading=d["resolved_reading"],
            rows=[SpectrumRow(**r) for r in d["rows"]],
            passed=d["pass"],
            tolerances=d["tolerances"],
            errors=list(d.get("errors", [])),
            wall_time=d.get("wall_time", 0.0),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# Building blocks -----------------------------------------------------------------


def _quad_rule(model, tol=1e-11):
    kind = (
        RuleKind.TRUNCATED_INFINITE
        if math.isinf(model.domain.lo) or math.isinf(model.domain.hi)
        else RuleKind.COMPOSITE_GAUSS_LEGENDRE
    )
    return QuadratureRule(kind=kind, tol=tol)


def _integrate_on_domain(model, f, tol=1e-11):
    return integrate(f, (model.domain.lo, model.domain.hi), _quad_rule(model, tol))


def normalization_integral(model, m):
    """Integral of psi_m^2 under the radial measure r^(D-1) dr."""
    w = model.radial_weight
    value, _ = _integrate_on_domain(model, lambda r: model.psi(m, r) ** 2 * w(r))
    return value


def closed_form_nodes(model, m, points=NODE_GRID):
    lo, hi = model.numeric_window(m + 1)
    r = np.linspace(lo, hi, points + 2)[1:-1]
    return numsolve.count_nodes(model.psi(m, r))


def _sample_points(model, count):
    lo, hi = model.sample_window()
    return np.linspace(lo, hi, count)


def identity_deviation(model, m, points=IDENTITY_POINTS):
    """Max of |ev_functional + E - V| / max(|V|, 1) over sample points."""
    spec = model.transform(m)
    if spec is None:
        raise ParameterError(f"{model.id.value} has no transformation representation")
    r = _sample_points(model, points)
    regenerated = ev_functional(spec, model.dim, r) + model.energy(m)
    V = model.V(r, m)
    return float(np.max(np.abs(regenerated - V) / np.maximum(np.abs(V), 1.0)))


def residual_max(model, m, points=IDENTITY_POINTS):
    r = _sample_points(model, points)
    E = model.energy(m)

    def psi(x):
        return model.psi(m, x)

    # floor the denominator at a fraction of the peak so nodes of psi do not
    # turn rounding noise into a huge ratio
    scale = 1e-3 * float(np.max(np.abs(E * psi(r))))
    res = schrodinger_residual(lambda x: model.V(x, m), E, psi, model.dim, r, h=1e-4, scale=scale)
    return float(np.max(res))


# Reading resolution ------------------------------------------------------------


@dataclass(frozen=True)
class ReadingResolution:
    reading: Reading
    deviations: dict
    tol: float


def resolve_reading(fid, params, m=0, points=IDENTITY_POINTS, tol=1e-6):
    """Pick the form of the rational part that the transformation reproduces.

    Both candidate readings are compared with ``ev_functional + E`` on
    ``points`` samples; exactly one must lie within ``tol``. If both do,
    the tolerance is tightened once by a factor of 100.
    """
    fid = FamilyId(fid)
    if fid not in (FamilyId.EXT_MORSE, FamilyId.EXT_ROSEN_MORSE):
        raise ParameterError(f"{fid.value} has a single reading")
    base = catalog.params_to_dict(catalog.build_model(fid, params).params)
    devs = {}
    for reading in Reading:
        model = catalog.build_model(fid, {**base, "reading": reading})
        devs[reading.value] = identity_deviation(model, m, points)
    for attempt in range(2):
        ok = [Reading(k) for k, v in devs.items() if v <= tol]
        if len(ok) == 1:
            return ReadingResolution(ok[0], devs, tol)
        if not ok:
            raise SolverError(f"no reading reproduces the potential: {devs}")
        tol /= 100
    raise SolverError(f"both readings agree within tolerance: {devs}")


def resolve_morse_reading(params, m=0, points=IDENTITY_POINTS, tol=1e-6):
    return resolve_reading(FamilyId.EXT_MORSE, params, m, points, tol)


# Spectrum verification ------------------------------------------------------------


def _spectrum_errors(E, values):
    abs_err = max(abs(v - E) for v in values)
    return abs_err, abs_err / max(abs(E), 1e-300)


def _row_ok(row, tols, numerov_nodes, claim_nodes):
    if row.E_numeric_fd is None or row.E_numeric_numerov is None:
        return False
    spec_ok = row.rel_err <= tols.spectrum_rel or row.abs_err <= tols.spectrum_abs
    cross = abs(row.E_numeric_fd - row.E_numeric_numerov)
    cross_ok = cross <= tols.cross_solver_factor * max(
        tols.spectrum_rel * abs(row.E_analytic), tols.spectrum_abs
    )
    ok = spec_ok and cross_ok
    ok = ok and row.norm_dev is not None and row.norm_dev <= tols.norm
    ok = ok and row.residual_max is not None and row.residual_max <= tols.residual
    if claim_nodes:
        ok = ok and row.nodes_found == row.nodes_expected and numerov_nodes == row.nodes_expected
    return ok


def verify_family(fid, params, m_levels, tols: Tolerances = None, grid_points=None):
    """Analytic spectrum versus both solvers, plus per-level checks.

    Level-dependent families are solved against ``W(.; m)`` for each ``m``
    and the eigenvalue nearest the analytic value is reported. Solver
    failures are recorded in ``errors`` and fail the affected row only.
    """
    t0 = time.perf_counter()
    tols = tols or Tolerances()
    fid = FamilyId(fid)
    model = catalog.build_model(fid, params)
    if m_levels < 1:
        raise ParameterError("m_levels must be >= 1")
    if model.m_max is not None and m_levels - 1 > model.m_max:
        raise ParameterError(
            f"{fid.value} admits levels m <= {model.m_max}; requested {m_levels}"
        )

    resolved = None
    errors = []
    if fid in (FamilyId.EXT_MORSE, FamilyId.EXT_ROSEN_MORSE):
        try:
            resolved = resolve_reading(fid, model.params).reading.value
        except SolverError as exc:
            errors.append(f"reading resolution: {exc}")

    shared = None
    if not model.level_dependent_potential:
        prob = numsolve.reduce(model, 0, levels=m_levels)
        grid = numsolve.default_grid(prob, grid_points)
        try:
            shared = (prob, grid, numsolve.fd_spectrum_richardson(prob, grid, m_levels + 1))
        except SolverError as exc:
            errors.append(f"fd: {exc}")

    rows = []
    all_ok = not errors
    for m in range(m_levels):
        E = model.energy(m)
        fd = nv = None
        numerov_nodes = None
        try:
            if shared is not None:
                prob, grid, fdv = shared
                j = m
            else:
                if not model.level_dependent_potential:
                    raise SolverError("finite-difference stage failed")
                prob = numsolve.reduce(model, m)
                grid = numsolve.default_grid(prob, grid_points)
                fdv = numsolve.fd_spectrum_richardson(prob, grid, m + 3)
                j = int(np.argmin(np.abs(np.asarray(fdv[0][:-1]) - E)))
            sol = numsolve.solve_level(prob, grid, j, fdv)
            fd, nv = sol.E_fd, sol.numerov.E
            numerov_nodes = sol.numerov.nodes
            if not sol.numerov.converged:
                errors.append(f"m={m}: Numerov bisection did not converge")
        except (SolverError, ParameterError) as exc:
            errors.append(f"m={m}: {exc}")

        try:
            norm_dev = abs(normalization_integral(model, m) - 1.0)
        except (ConvergenceError, SingularityError) as exc:
            errors.append(f"m={m}: normalization: {exc}")
            norm_dev = None
        res = residual_max(model, m)
        claim = model.nodes_claimed
        abs_err = rel_err = None
        if fd is not None and nv is not None:
            abs_err, rel_err = _spectrum_errors(E, (fd, nv))
        row = SpectrumRow(
            m=m,
            E_analytic=E,
            E_numeric_fd=fd,
            E_numeric_numerov=nv,
            abs_err=abs_err,
            rel_err=rel_err,
            nodes_expected=m if claim else None,
            nodes_found=closed_form_nodes(model, m) if claim else None,
            norm_dev=norm_dev,
            residual_max=res,
        )
        ok = _row_ok(row, tols, numerov_nodes, claim)
        if not ok:
            errors.append(f"m={m}: row outside tolerance")
        all_ok = all_ok and ok
        rows.append(row)

    if resolved is not None and getattr(model.params, "reading", None) is not None:
        if model.params.reading.value != resolved:
            all_ok = False
            errors.append(f"model uses the {model.params.reading.value} reading; "
                          f"the transformation selects {resolved}")

    return SpectrumReport(
        family=fid.value,
        params=catalog.params_to_dict(model.params),
        resolved_reading=resolved,
        rows=rows,
        passed=bool(all_ok),
        tolerances=asdict(tols),
        errors=errors,
        wall_time=round(time.perf_counter() - t0, 3),
    )


# Orthonormality -------------------------------------------------------------------


@dataclass
class OrthonormalityReport:
    family: str
    matrix: Optional[np.ndarray]
    max_offdiag: Optional[float]
    max_diag_dev: Optional[float]
    skipped_reason: Optional[str] = None

    def passed(self, tols: Tolerances = None):
        tols = tols or Tolerances()
        if self.matrix is None:
            return False
        return self.max_offdiag <= tols.orthogonality and self.max_diag_dev <= tols.norm


def verify_orthonormality(fid, params, m_max):
    """Gram matrix of psi_0..psi_{m_max} under the radial measure.

    Skipped (with a reason) for families whose potential changes with the
    level, where different levels are not eigenfunctions of one operator.
    """
    fid = FamilyId(fid)
    model = catalog.build_model(fid, params)
    if model.level_dependent_potential:
        return OrthonormalityReport(
            fid.value, None, None, None,
            skipped_reason="potential depends on the level; states of different "
            "levels belong to different operators",
        )
    model.check_level(m_max)
    size = m_max + 1
    w = model.radial_weight
    G = np.empty((size, size))
    for i in range(size):
        for j in range(i, size):
            val, _ = _integrate_on_domain(
                model, lambda r, i=i, j=j: model.psi(i, r) * model.psi(j, r) * w(r), tol=1e-12
            )
            G[i, j] = G[j, i] = val
    off = G - np.diag(np.diag(G))
    return OrthonormalityReport(
        fid.value, G, float(np.max(np.abs(off))) if size > 1 else 0.0,
        float(np.max(np.abs(np.diag(G) - 1.0))),
    )


# Isospectrality ---------------------------------------------------------------------


@dataclass
class IsospectralReport:
    ext_family: str
    std_family: str
    ext_analytic: list
    std_analytic: list
    analytic_max_rel: float
    ext_numeric: list
    std_numeric: list
    numeric_max_rel: float
    passed: bool


def _numeric_levels(model, levels, grid_points=None):
    prob = numsolve.reduce(model, 0, levels=levels)
    grid = numsolve.default_grid(prob, grid_points)
    fdv = numsolve.fd_spectrum_richardson(prob, grid, levels + 1)
    out = []
    for j in range(levels):
        sol = numsolve.solve_level(prob, grid, j, fdv)
        out.append(sol.numerov.E)
    return out, fdv[0][:levels]


def verify_isospectral(ext_id, params, levels, tols: Tolerances = None, grid_points=None):
    """Ext family against its standard partner, analytically and numerically."""
    tols = tols or Tolerances()
    ext_id = FamilyId(ext_id)
    if ext_id not in (FamilyId.EXT_OSCILLATOR, FamilyId.EXT_SCARF1):
        raise ParameterError("isospectrality is checked for the oscillator and Scarf I extensions")
    ext = catalog.build_model(ext_id, params)
    std = catalog.build_model(catalog.partner(ext_id), catalog.partner_params(ext))
    ea = [ext.energy(m) for m in range(levels)]
    sa = [std.energy(m) for m in range(levels)]
    arel = max(abs(a - b) / max(abs(b), 1e-300) for a, b in zip(ea, sa))

    e_nv, e_fd = _numeric_levels(ext, levels, grid_points)
    s_nv, s_fd = _numeric_levels(std, levels, grid_points)
    nrel = 0.0
    for vals in (e_nv, e_fd, s_nv, s_fd):
        nrel = max(nrel, max(abs(a - b) / abs(b) for a, b in zip(vals, ea)))
    nrel = max(nrel, max(abs(a - b) / abs(b) for a, b in zip(e_nv, s_nv)))
    return IsospectralReport(
        ext_family=ext_id.value,
        std_family=std.id.value,
        ext_analytic=ea,
        std_analytic=sa,
        analytic_max_rel=arel,
        ext_numeric=e_nv,
        std_numeric=s_nv,
        numeric_max_rel=nrel,
        passed=arel <= 1e-12 and nrel <= tols.spectrum_rel,
    )


# Orthogonality of the X1 polynomials themselves ---------------------------------------


@dataclass
class EopGramReport:
    family: str
    params: tuple
    matrix: np.ndarray
    closed_form: np.ndarray
    max_offdiag_scaled: float
    max_diag_rel: float

    def passed(self, tol=1e-8):
        return self.max_offdiag_scaled <= tol and self.max_diag_rel <= tol


def eop_gram(family, params, n_max, tol=1e-13) -> EopGramReport:
    """Quadrature Gram matrix of the X1 polynomials of index 1..n_max.

    Endpoint powers of the weight are smoothed by a change of variable:
    ``z = t^2`` on the half-line and ``z = -cos(theta)`` on (-1, 1). Both
    make the integrand smooth whenever 2 alpha (and 2 beta) are integers.
    Off-diagonals are scaled by the geometric mean of the two diagonal
    closed forms.
    """
    fam = eop.Family(family)
    idx = list(range(1, n_max + 1))
    rule_inf = QuadratureRule(kind=RuleKind.TRUNCATED_INFINITE, tol=tol)
    rule_fin = QuadratureRule(tol=tol)
    if fam is eop.Family.X1_LAGUERRE:
        (alpha,) = params if isinstance(params, tuple) else (params,)
        polys = {n: eop.x1_laguerre_poly(n, alpha) for n in idx}
        closed = np.array([eop.x1_laguerre_norm(n, alpha) for n in idx])

        def integral(i, j):
            def f(t):
                z = t * t
                return 2 * t * eop.x1_weight(fam, alpha, z) * polys[i](z) * polys[j](z)
            return integrate(f, (0.0, math.inf), rule_inf)[0]
        label = (alpha,)
    else:
        alpha, beta = params
        polys = {n: eop.x1_jacobi_poly(n, alpha, beta) for n in idx}
        closed = np.array([eop.x1_jacobi_norm(n, alpha, beta) for n in idx])

        def integral(i, j):
            def f(th):
                z = -np.cos(th)
                w = eop.x1_weight(fam, (alpha, beta), z)
                return np.sin(th) * w * polys[i](z) * polys[j](z)
            return integrate(f, (0.0, math.pi), rule_fin)[0]
        label = (alpha, beta)

    size = len(idx)
    G = np.empty((size, size))
    for a in range(size):
        for b in range(a, size):
            G[a, b] = G[b, a] = integral(idx[a], idx[b])
    scale = np.sqrt(np.outer(closed, closed))
    off = np.abs(G - np.diag(np.diag(G))) / scale
    return EopGramReport(
        family=fam.value,
        params=label,
        matrix=G,
        closed_form=closed,
        max_offdiag_scaled=float(off.max()),
        max_diag_rel=float(np.max(np.abs(np.diag(G) - closed) / closed)),
    )


# Validation matrix ----------------------------------------------------------------


@dataclass(frozen=True)
class MatrixEntry:
    family: FamilyId
    params: dict
    levels: int


def _matrix():
    out = []
    for dim in (2, 3, 5):
        for ell in (0, 1, 2):
            p = {"omega": 2.0, "ell": ell, "dim": dim}
            try:
                catalog.build_model(FamilyId.EXT_OSCILLATOR, p)
            except ParameterError:
                continue  # alpha = ell + D/2 - 1 must be positive
            out.append(MatrixEntry(FamilyId.EXT_OSCILLATOR, p, 5))
    out.append(MatrixEntry(FamilyId.EXT_MORSE, {"p2": 1.0, "A": 4.5}, 4))
    out.append(MatrixEntry(FamilyId.EXT_SCARF1, {"A": 2.0, "B": 0.5}, 6))
    rm = catalog.build_model(FamilyId.EXT_ROSEN_MORSE, {"P1": 3.0, "Q": 2.0})
    out.append(MatrixEntry(FamilyId.EXT_ROSEN_MORSE, {"P1": 3.0, "Q": 2.0}, rm.m_max + 1))
    return tuple(out)


VALIDATION_MATRIX = _matrix()


# Convergence on the square well --------------------------------------------------------


@dataclass
class ConvergenceStudy:
    points: tuple
    h: tuple
    exact: float
    fd_err: tuple
    numerov_err: tuple
    fd_order: float
    numerov_order: float


def _slope(h, err):
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])


def square_well_convergence(level=21, points=(501, 1001, 2001), width=1.0):
    """Observed orders of both solvers on an infinite square well.

    The well is ``W = 0`` on ``(0, width)`` with Dirichlet ends, exact levels
    ``(k pi / width)^2``. ``level`` is 1-based; a high level keeps the
    discretization error well above rounding on every grid. Orders are
    least-squares slopes of ``log err`` against ``log h``.
    """
    from .xform import Interval

    prob = numsolve.ReducedProblem(
        W=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        domain=Interval(0.0, width),
        boundary=numsolve.Boundary.DIRICHLET_BOTH,
        window=(0.0, width),
        label="square-well",
    )
    exact = (level * math.pi / width) ** 2
    hs, fd_err, nv_err = [], [], []
    for n in points:
        grid = numsolve.GridSpec(0.0, width, n)
        fd = numsolve.fd_spectrum(prob, grid, level + 1)
        res = numsolve.numerov_shoot(prob, grid, *numsolve.bracket_around(fd, level - 1),
                                     target_nodes=level - 1, rel_tol=1e-14)
        hs.append(grid.h)
        fd_err.append(abs(fd[level - 1] - exact) / exact)
        nv_err.append(abs(res.E - exact) / exact)
    return ConvergenceStudy(
        points=tuple(points), h=tuple(hs), exact=exact,
        fd_err=tuple(fd_err), numerov_err=tuple(nv_err),
        fd_order=_slope(hs, fd_err), numerov_order=_slope(hs, nv_err),
    )
