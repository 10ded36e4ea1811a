"""Change-of-variable engine for building solvable radial potentials.

A polynomial family Q(g) solves ``Q'' + M(g) Q' + J(g) Q = 0``. Substituting
``g = g(r)`` and ``psi = f(r)^-1 Q(g(r))`` with the prefactor fixed so that
the first-derivative term matches the D-dimensional radial Laplacian leaves
an equation of Schrodinger form. :func:`ev_functional` evaluates the
resulting ``V(r) - E`` and :func:`make_wavefunction` the matching ``psi``.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import ParameterError, SingularityError

__all__ = [
    "EndpointTag",
    "Interval",
    "TransformSpec",
    "WavefunctionFactory",
    "CoordinateMap",
    "Characteristics",
    "quadratic_map",
    "exponential_map",
    "sine_map",
    "tanh_map",
    "identity_map",
    "laguerre_characteristics",
    "jacobi_characteristics",
    "make_spec",
    "schwarzian",
    "ev_functional",
    "make_wavefunction",
    "schrodinger_residual",
]


class EndpointTag(enum.Enum):
    REGULAR = "regular"
    SINGULAR = "singular"
    INFINITE = "infinite"


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_tag: EndpointTag = EndpointTag.REGULAR
    hi_tag: EndpointTag = EndpointTag.REGULAR

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ParameterError(f"empty interval ({self.lo}, {self.hi})")

    def contains(self, r) -> bool:
        r = np.asarray(r, dtype=float)
        return bool(np.all((r > self.lo) & (r < self.hi)))

    def interior(self, count, margin=0.0):
        """``count`` evenly spaced points strictly inside, ``margin`` from finite ends."""
        lo = self.lo + margin if math.isfinite(self.lo) else -abs(margin)
        hi = self.hi - margin if math.isfinite(self.hi) else abs(margin)
        return np.linspace(lo, hi, count + 2)[1:-1]


@dataclass(frozen=True)
class CoordinateMap:
    g: Callable
    g1: Callable
    g2: Callable
    g3: Callable


@dataclass(frozen=True)
class Characteristics:
    """M, J and an antiderivative of M; ``singular`` lists the poles of M in g.

    ``dM`` is the derivative of M; when omitted it is taken numerically.
    """

    M: Callable
    J: Callable
    int_M: Callable
    singular: Tuple[float, ...] = ()
    dM: Optional[Callable] = None


@dataclass(frozen=True)
class TransformSpec:
    g: Callable
    g1: Callable
    g2: Callable
    g3: Callable
    M: Callable
    J: Callable
    int_M: Callable
    domain: Interval
    m_singular: Tuple[float, ...] = field(default=())
    dM: Optional[Callable] = None


def make_spec(cmap: CoordinateMap, ch: Characteristics, domain: Interval) -> TransformSpec:
    return TransformSpec(
        g=cmap.g, g1=cmap.g1, g2=cmap.g2, g3=cmap.g3,
        M=ch.M, J=ch.J, int_M=ch.int_M, domain=domain, m_singular=ch.singular, dM=ch.dM,
    )


# Coordinate maps ----------------------------------------------------------


def identity_map(scale=1.0, shift=0.0):
    return CoordinateMap(
        g=lambda r: scale * np.asarray(r, dtype=float) + shift,
        g1=lambda r: scale + 0.0 * np.asarray(r, dtype=float),
        g2=lambda r: 0.0 * np.asarray(r, dtype=float),
        g3=lambda r: 0.0 * np.asarray(r, dtype=float),
    )


def quadratic_map(c):
    """g = c r^2."""
    return CoordinateMap(
        g=lambda r: c * np.square(r),
        g1=lambda r: 2 * c * np.asarray(r, dtype=float),
        g2=lambda r: 2 * c + 0.0 * np.asarray(r, dtype=float),
        g3=lambda r: 0.0 * np.asarray(r, dtype=float),
    )


def exponential_map(p):
    """g = exp(-p r)."""
    return CoordinateMap(
        g=lambda r: np.exp(-p * np.asarray(r, dtype=float)),
        g1=lambda r: -p * np.exp(-p * np.asarray(r, dtype=float)),
        g2=lambda r: p * p * np.exp(-p * np.asarray(r, dtype=float)),
        g3=lambda r: -(p**3) * np.exp(-p * np.asarray(r, dtype=float)),
    )


def sine_map(p=1.0):
    """g = sin(p r)."""
    return CoordinateMap(
        g=lambda r: np.sin(p * np.asarray(r, dtype=float)),
        g1=lambda r: p * np.cos(p * np.asarray(r, dtype=float)),
        g2=lambda r: -p * p * np.sin(p * np.asarray(r, dtype=float)),
        g3=lambda r: -(p**3) * np.cos(p * np.asarray(r, dtype=float)),
    )


def tanh_map(c=1.0):
    """g = tanh(c r)."""

    def parts(r):
        t = np.tanh(c * np.asarray(r, dtype=float))
        return t, 1.0 - t * t

    def g3(r):
        t, s = parts(r)
        return c**3 * (4 * t * t * s - 2 * s * s)

    return CoordinateMap(
        g=lambda r: parts(r)[0],
        g1=lambda r: c * parts(r)[1],
        g2=lambda r: -2 * c * c * parts(r)[0] * parts(r)[1],
        g3=g3,
    )


# Characteristic functions of the X1 families -------------------------------


def laguerre_characteristics(alpha, n):
    """M, J of the X1 Laguerre equation written as Q'' + M Q' + J Q = 0."""
    a = alpha
    return Characteristics(
        M=lambda g: -(g - a) * (g + a + 1) / (g * (g + a)),
        J=lambda g: ((g - a) / (g + a) + n - 1) / g,
        int_M=lambda g: -g + (a + 1) * np.log(g) - 2 * np.log(g + a),
        singular=(0.0, -a),
        dM=lambda g: -(a + 1) / (g * g) + 2 / (g + a) ** 2,
    )


def jacobi_characteristics(alpha, beta, n):
    """M, J of the X1 Jacobi equation written as Q'' + M Q' + J Q = 0."""
    a, b = alpha, beta
    den = lambda g: (b - a) * g - (b + a)  # noqa: E731
    return Characteristics(
        M=lambda g: -((b + a + 2) * g - (b - a)) / (1 - g * g) - 2 * (b - a) / den(g),
        J=lambda g: -((b - a) * g - (n - 1) * (n + b + a)) / (1 - g * g)
        - (b - a) ** 2 / den(g),
        int_M=lambda g: (a + 1) * np.log1p(-g) + (b + 1) * np.log1p(g)
        - 2 * np.log(np.abs(den(g))),
        singular=(1.0, -1.0, (b + a) / (b - a)),
        dM=lambda g: -(a + 1) / (1 - g) ** 2 - (b + 1) / (1 + g) ** 2
        + 2 * (b - a) ** 2 / den(g) ** 2,
    )


# Engine -------------------------------------------------------------------


def schwarzian(spec: TransformSpec, r):
    """Schwarzian derivative g'''/g' - 3/2 (g''/g')^2 at ``r``."""
    g1 = np.asarray(spec.g1(r), dtype=float)
    if np.any(np.abs(g1) < 1e-300):
        raise SingularityError(f"g'(r) vanishes at r={r}")
    ratio = spec.g2(r) / g1
    return spec.g3(r) / g1 - 1.5 * ratio * ratio


def _m_prime(spec: TransformSpec, g):
    if spec.dM is not None:
        return spec.dM(g)
    # step shrinks with the distance to the nearest pole of M so the
    # central difference never straddles one
    scale = np.maximum(np.abs(g), 1.0)
    for s in spec.m_singular:
        scale = np.minimum(scale, np.abs(g - s))
    h = 1e-5 * scale
    return (spec.M(g + h) - spec.M(g - h)) / (2 * h)


def ev_functional(spec: TransformSpec, D, r):
    """V(r) - E implied by the transformation, in dimension ``D``.

    Adding the level energy recovers the potential. The inverse-square term
    coming from the D-dimensional measure vanishes for D = 1 and D = 3.
    """
    g = spec.g(r)
    g1 = spec.g1(r)
    bracket = spec.M(g) ** 2 + 2 * _m_prime(spec, g) - 4 * spec.J(g)
    out = -0.5 * schwarzian(spec, r) + 0.25 * g1 * g1 * bracket
    k = (D - 1) * (D - 3)
    if k:
        out = out - k / (4 * np.square(r))
    return out


@dataclass(frozen=True)
class WavefunctionFactory:
    spec: TransformSpec
    Q: Callable
    D: int = 3
    N: float = 1.0


def make_wavefunction(wf: WavefunctionFactory):
    """Return ``psi(r)`` for the transformation; ``|g'|`` is used under the root."""
    spec, D = wf.spec, wf.D

    def psi(r):
        r_arr = np.asarray(r, dtype=float)
        g = spec.g(r_arr)
        out = wf.N * np.abs(spec.g1(r_arr)) ** -0.5 * np.exp(0.5 * spec.int_M(g)) * wf.Q(g)
        if D != 1:
            out = out * r_arr ** (-(D - 1) / 2)
        return out if np.ndim(r) else float(out)

    return psi


def schrodinger_residual(V, E, psi, D, r, h=1e-4, scale=0.0):
    """Normalized residual of the D-dimensional radial equation at ``r``.

    ``V`` must already contain any centrifugal term. The absolute residual
    is divided by ``max(|E psi|, |V psi|, scale, 1e-30)``; pass ``scale`` to
    keep the ratio meaningful near nodes of ``psi``.
    """
    r = np.asarray(r, dtype=float)
    pm, p0, pp = psi(r - h), psi(r), psi(r + h)
    d1 = (pp - pm) / (2 * h)
    d2 = (pp - 2 * p0 + pm) / (h * h)
    v = V(r)
    res = d2 + (D - 1) / r * d1 + (E - v) * p0 if D != 1 else d2 + (E - v) * p0
    denom = np.maximum.reduce(
        [np.abs(E * p0), np.abs(v * p0), np.full_like(p0, scale), np.full_like(p0, 1e-30)]
    )
    out = np.abs(res) / denom
    return out if out.ndim else float(out)
