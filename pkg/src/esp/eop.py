"""X1 exceptional Laguerre and Jacobi polynomials.

The polynomials are evaluated as fixed linear combinations of three classical
polynomials (degrees n, n-1, n-2, with the degree -1 member taken as zero).
Also here: the defining second-order ODEs (as finite-difference residuals),
the orthogonality weights and their closed-form squared norms, and exact
moment integrals used by the wavefunction normalizations in
:mod:`esp.catalog`.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from numpy.polynomial import Polynomial

from .errors import ParameterError, SingularityError
from .specfun import jacobi, laguerre

__all__ = [
    "Family",
    "EopParams",
    "JacobiEopConstants",
    "JacobiEopExpansion",
    "eval_x1_laguerre",
    "eval_x1_jacobi",
    "x1_laguerre",
    "x1_jacobi",
    "x1_laguerre_poly",
    "x1_jacobi_poly",
    "ode_residual_x1_laguerre",
    "ode_residual_x1_jacobi",
    "ode_term_scale",
    "ode_relative_residual",
    "ode_residual_exact",
    "x1_laguerre_norm",
    "x1_jacobi_norm",
    "jacobi_norm_constant",
    "x1_weight",
    "gamma_moment",
    "gamma_rational_moment",
    "beta_moment",
    "beta_rational_moment",
]


class Family(enum.Enum):
    X1_LAGUERRE = "x1-laguerre"
    X1_JACOBI = "x1-jacobi"


@dataclass(frozen=True)
class EopParams:
    """Degree index and parameters of an X1 polynomial.

    X1 Laguerre needs ``n >= 1`` and ``alpha > 0``. X1 Jacobi needs
    ``n >= 1``, ``alpha, beta > -1`` and ``alpha != beta``.
    """

    family: Family
    n: int
    alpha: float
    beta: Optional[float] = None

    def __post_init__(self):
        problems = []
        if int(self.n) != self.n or self.n < 1:
            problems.append(f"n must be an integer >= 1 (got {self.n})")
        if self.family is Family.X1_LAGUERRE:
            if not self.alpha > 0:
                problems.append(f"alpha must be > 0 (got {self.alpha})")
        else:
            if self.beta is None:
                problems.append("beta is required for X1 Jacobi")
            else:
                if not self.alpha > -1:
                    problems.append(f"alpha must be > -1 (got {self.alpha})")
                if not self.beta > -1:
                    problems.append(f"beta must be > -1 (got {self.beta})")
                if self.alpha == self.beta:
                    problems.append("alpha and beta must differ")
        if problems:
            raise ParameterError("; ".join(problems))

    @property
    def pole_free_on_domain(self) -> bool:
        """Whether the weight pole lies outside (-1, 1); always true for Laguerre."""
        if self.family is Family.X1_LAGUERRE:
            return True
        return self.alpha * self.beta > 0

    @classmethod
    def laguerre(cls, n, alpha):
        return cls(Family.X1_LAGUERRE, n, alpha)

    @classmethod
    def jacobi(cls, n, alpha, beta):
        return cls(Family.X1_JACOBI, n, alpha, beta)


@dataclass(frozen=True)
class JacobiEopConstants:
    """The constants a, b, c of the X1 Jacobi differential operator."""

    a: float
    b: float
    c: float

    @classmethod
    def from_params(cls, alpha, beta):
        if alpha == beta:
            raise ParameterError("X1 Jacobi constants need alpha != beta")
        a = 0.5 * (beta - alpha)
        b = (beta + alpha) / (beta - alpha)
        return cls(a=a, b=b, c=b + 1.0 / a)


@dataclass(frozen=True)
class JacobiEopExpansion:
    """Coefficients expressing the X1 Jacobi polynomial in classical ones.

    ``c_norm`` is the classical norm constant at degree ``n - 1`` that enters
    the X1 squared norm.
    """

    f: float
    g: float
    h: float
    c_norm: float

    @classmethod
    def from_params(cls, n, alpha, beta):
        ab = alpha + beta
        d0, d1, d2 = ab + 2 * n - 2, ab + 2 * n - 1, ab + 2 * n
        if d0 == 0 or d1 == 0 or d2 == 0:
            raise ParameterError(
                f"degenerate X1 Jacobi expansion for n={n}, alpha={alpha}, beta={beta}"
            )
        f = n * (ab + n) / (d1 * d2)
        g = (alpha + n) * (beta + n) / (d0 * d2)
        h = (alpha + n) * (beta + n) / (d0 * d1)
        return cls(f=f, g=g, h=h, c_norm=jacobi_norm_constant(n - 1, alpha, beta))


def _laguerre_or_zero(k, alpha, z):
    if k < 0:
        return 0.0 * z
    return laguerre(k, alpha, z)


def _jacobi_or_zero(k, alpha, beta, z):
    if k < 0:
        return 0.0 * z
    return jacobi(k, alpha, beta, z)


def eval_x1_laguerre(p: EopParams, z):
    """X1 Laguerre polynomial of index ``p.n`` at ``z``."""
    if p.family is not Family.X1_LAGUERRE:
        raise ParameterError("expected X1 Laguerre parameters")
    n, a = p.n, p.alpha
    return (
        n * laguerre(n, a, z)
        - 2 * (n + a) * _laguerre_or_zero(n - 1, a, z)
        + (n + a) * _laguerre_or_zero(n - 2, a, z)
    )


def eval_x1_jacobi(p: EopParams, z):
    """X1 Jacobi polynomial of index ``p.n`` at ``z``."""
    if p.family is not Family.X1_JACOBI:
        raise ParameterError("expected X1 Jacobi parameters")
    n, a, b = p.n, p.alpha, p.beta
    ex = JacobiEopExpansion.from_params(n, a, b)
    bb = JacobiEopConstants.from_params(a, b).b
    return (
        -ex.f * jacobi(n, a, b, z)
        + 2 * bb * ex.g * _jacobi_or_zero(n - 1, a, b, z)
        - ex.h * _jacobi_or_zero(n - 2, a, b, z)
    )


def x1_laguerre(n, alpha, z):
    return eval_x1_laguerre(EopParams.laguerre(n, alpha), z)


def x1_jacobi(n, alpha, beta, z):
    return eval_x1_jacobi(EopParams.jacobi(n, alpha, beta), z)


def x1_laguerre_poly(n, alpha) -> Polynomial:
    return x1_laguerre(n, alpha, Polynomial([0.0, 1.0]))


def x1_jacobi_poly(n, alpha, beta) -> Polynomial:
    return x1_jacobi(n, alpha, beta, Polynomial([0.0, 1.0]))


def _central(f, z, h):
    fm, f0, fp = f(z - h), f(z), f(z + h)
    return f0, (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)


def ode_residual_x1_laguerre(p: EopParams, z, h=1e-4):
    """Absolute residual of the X1 Laguerre ODE at ``z`` (derivatives by FD)."""
    if not z > h:
        raise ParameterError(f"z must exceed the step h={h} (got {z})")
    a = p.alpha
    y, dy, d2y = _central(lambda x: eval_x1_laguerre(p, x), z, h)
    lhs = z * d2y - (z - a) / (z + a) * ((z + a + 1) * dy - y)
    return abs(lhs + (p.n - 1) * y)


def ode_residual_x1_jacobi(p: EopParams, z, h=1e-4):
    """Absolute residual of the X1 Jacobi ODE at ``z``; refuses points near the pole."""
    k = JacobiEopConstants.from_params(p.alpha, p.beta)
    if abs(z - k.b) <= 10 * h:
        raise SingularityError(f"z={z} is within 10h of the weight pole b={k.b}")
    y, dy, d2y = _central(lambda x: eval_x1_jacobi(p, x), z, h)
    lhs = (z * z - 1) * d2y + 2 * k.a * (1 - k.b * z) / (k.b - z) * ((z - k.c) * dy - y)
    return abs(lhs - (p.n - 1) * (p.alpha + p.beta + p.n) * y)


def _ode_coefficients(p: EopParams, z):
    """(c2, c1, c0) with the ODE written as c2 y'' + c1 y' + c0 y = 0."""
    a = p.alpha
    if p.family is Family.X1_LAGUERRE:
        r = (z - a) / (z + a)
        return z, -r * (z + a + 1), r + (p.n - 1)
    k = JacobiEopConstants.from_params(p.alpha, p.beta)
    q = 2 * k.a * (1 - k.b * z) / (k.b - z)
    return z * z - 1, q * (z - k.c), -q - (p.n - 1) * (p.alpha + p.beta + p.n)


def _coefficient_form(p: EopParams) -> Polynomial:
    if p.family is Family.X1_LAGUERRE:
        return x1_laguerre_poly(p.n, p.alpha)
    return x1_jacobi_poly(p.n, p.alpha, p.beta)


def ode_term_scale(p: EopParams, z):
    """|c2 y''| + |c1 y'| + |c0 y| at ``z``, derivatives from the coefficient form.

    The natural yardstick for an ODE residual: a residual small against the
    size of the terms that are supposed to cancel.
    """
    P = _coefficient_form(p)
    c2, c1, c0 = _ode_coefficients(p, z)
    return abs(c2 * P.deriv(2)(z)) + abs(c1 * P.deriv(1)(z)) + abs(c0 * P(z))


def ode_relative_residual(p: EopParams, z, h=1e-4):
    """FD residual divided by ``max(1, ode_term_scale)``."""
    if p.family is Family.X1_LAGUERRE:
        res = ode_residual_x1_laguerre(p, z, h)
    else:
        res = ode_residual_x1_jacobi(p, z, h)
    return res / max(1.0, ode_term_scale(p, z))


def ode_residual_exact(p: EopParams, z):
    """ODE residual with derivatives taken from the coefficient form."""
    P = _coefficient_form(p)
    c2, c1, c0 = _ode_coefficients(p, z)
    return abs(c2 * P.deriv(2)(z) + c1 * P.deriv(1)(z) + c0 * P(z))


def x1_laguerre_norm(n, alpha):
    """Closed-form squared norm of the X1 Laguerre polynomial of index ``n``."""
    if int(n) != n or n < 1 or not alpha > 0:
        raise ParameterError(f"need integer n >= 1 and alpha > 0 (got n={n}, alpha={alpha})")
    if n + alpha - 1 <= 0:
        raise ParameterError("n + alpha - 1 must be positive")
    return math.exp(math.lgamma(n + alpha + 1) - math.lgamma(n)) / (n + alpha - 1)


def _gamma_product(num, den):
    """prod(Gamma(num)) / prod(Gamma(den)), stable for positive arguments."""
    if all(x > 0 for x in num) and all(x > 0 for x in den):
        return math.exp(sum(map(math.lgamma, num)) - sum(map(math.lgamma, den)))
    out = 1.0
    for x in num:
        out *= math.gamma(x)
    for x in den:
        out /= math.gamma(x)
    return out


def jacobi_norm_constant(n, alpha, beta):
    """Squared norm of the classical Jacobi polynomial of degree ``n``."""
    ab = alpha + beta
    if ab + 2 * n + 1 == 0:
        raise ParameterError("vanishing denominator alpha + beta + 2n + 1")
    return (
        2.0 ** (ab + 1)
        / (ab + 2 * n + 1)
        * _gamma_product([alpha + n + 1, beta + n + 1], [n + 1, ab + n + 1])
    )


def x1_jacobi_norm(n, alpha, beta):
    """Closed-form squared norm of the X1 Jacobi polynomial of index ``n``."""
    if alpha + n - 1 == 0 or beta + n - 1 == 0:
        raise ParameterError("vanishing denominator in the X1 Jacobi norm")
    pref = (alpha + n) * (beta + n) / (4 * (alpha + n - 1) * (beta + n - 1))
    return pref * jacobi_norm_constant(n - 1, alpha, beta)


def x1_weight(family: Family, params, z):
    """Orthogonality weight of an X1 family.

    ``params`` is ``alpha`` for Laguerre or ``(alpha, beta)`` for Jacobi.
    """
    z_arr = np.asarray(z, dtype=float)
    if family is Family.X1_LAGUERRE:
        alpha = float(params)
        if np.any(z_arr < 0):
            raise ParameterError("X1 Laguerre weight is supported on z >= 0")
        w = z_arr**alpha * np.exp(-z_arr) / (z_arr + alpha) ** 2
    else:
        alpha, beta = params
        if np.any(np.abs(z_arr) > 1):
            raise ParameterError("X1 Jacobi weight is supported on [-1, 1]")
        b = JacobiEopConstants.from_params(alpha, beta).b
        w = (1 - z_arr) ** alpha * (1 + z_arr) ** beta / (z_arr - b) ** 2
    return w if np.ndim(z) else float(w)


# Exact moments ------------------------------------------------------------

MOMENT_DPS = 40


def _mp_coef(poly: Polynomial):
    return [mpmath.mpf(float(c)) for c in poly.coef]


def _mp_gamma_moment(coef, a):
    return mpmath.fsum(c * mpmath.gamma(a + j) for j, c in enumerate(coef))


def gamma_moment(poly: Polynomial, a):
    """Integral of z^(a-1) e^(-z) poly(z) over (0, inf).

    Monomial moments alternate in sign and grow like factorials, so the sum
    is accumulated in extended precision.
    """
    with mpmath.workdps(MOMENT_DPS):
        return float(_mp_gamma_moment(_mp_coef(poly), mpmath.mpf(a)))


def gamma_rational_moment(poly: Polynomial, a, c):
    """Integral of z^(a-1) e^(-z) poly(z) / (z + c)^2 over (0, inf), ``c > 0``."""
    if not (a > 0 and c > 0):
        raise ParameterError("need a > 0 and c > 0")
    with mpmath.workdps(MOMENT_DPS):
        a, c = mpmath.mpf(a), mpmath.mpf(c)
        coef = _mp_coef(poly)
        q, r1, r0 = _mp_split_double_pole(coef, -c)
        g = mpmath.gamma(a)
        # int z^(a-1) e^-z (z+c)^-k dz = Gamma(a) c^(a-k) U(a, a+1-k, c)
        pole1 = g * c ** (a - 1) * mpmath.hyperu(a, a, c)
        pole2 = g * c ** (a - 2) * mpmath.hyperu(a, a - 1, c)
        return float(_mp_gamma_moment(q, a) + r1 * pole1 + r0 * pole2)


def _mp_split_double_pole(coef, pole):
    """poly = q (z - pole)^2 + r1 (z - pole) + r0, in extended precision."""
    shifted = _mp_taylor_shift(coef, pole)  # coefficients in powers of (z - pole)
    r0 = shifted[0]
    r1 = shifted[1] if len(shifted) > 1 else mpmath.mpf(0)
    q_shift = shifted[2:] or [mpmath.mpf(0)]
    return _mp_taylor_shift(q_shift, -pole), r1, r0


def _mp_taylor_shift(coef, s):
    """Coefficients of p(x + s) given those of p(x)."""
    out = list(coef)
    n = len(out)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] += s * out[j + 1]
    return out


def _mp_beta_moment(coef, a, b):
    # z = 2t - 1 maps (-1, 1) to (0, 1)
    in_t = _mp_compose_affine(coef, -1, 2)
    total = mpmath.fsum(c * mpmath.beta(a, b + j) for j, c in enumerate(in_t))
    return mpmath.mpf(2) ** (a + b - 1) * total


def _mp_compose_affine(coef, c0, c1):
    """Coefficients of p(c0 + c1 t)."""
    out = [mpmath.mpf(0)] * len(coef)
    power = [mpmath.mpf(1)]
    for c in coef:
        for k, pk in enumerate(power):
            out[k] += c * pk
        nxt = [mpmath.mpf(0)] * (len(power) + 1)
        for k, pk in enumerate(power):
            nxt[k] += c0 * pk
            nxt[k + 1] += c1 * pk
        power = nxt
    return out


def beta_moment(poly: Polynomial, a, b):
    """Integral of (1-z)^(a-1) (1+z)^(b-1) poly(z) over (-1, 1)."""
    if not (a > 0 and b > 0):
        raise ParameterError("need a > 0 and b > 0")
    with mpmath.workdps(MOMENT_DPS):
        return float(_mp_beta_moment(_mp_coef(poly), mpmath.mpf(a), mpmath.mpf(b)))


def beta_rational_moment(poly: Polynomial, a, b, pole):
    """Integral of (1-z)^(a-1) (1+z)^(b-1) poly(z) / (z - pole)^2 over (-1, 1).

    The pole must lie outside [-1, 1].
    """
    if abs(pole) <= 1:
        raise SingularityError(f"pole {pole} lies inside [-1, 1]")
    if pole < -1:
        mirrored = poly(Polynomial([0.0, -1.0]))
        return beta_rational_moment(mirrored, b, a, -pole)
    with mpmath.workdps(MOMENT_DPS):
        a, b, pole = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(pole)
        q, r1, r0 = _mp_split_double_pole(_mp_coef(poly), pole)
        x = 2 / (1 + pole)
        base = mpmath.mpf(2) ** (a + b - 1) * mpmath.beta(a, b)
        # (z - pole) = -(1 + pole) (1 - x t) with z = 2t - 1
        pole1 = base * mpmath.hyp2f1(1, b, a + b, x) / (-(1 + pole))
        pole2 = base * mpmath.hyp2f1(2, b, a + b, x) / (1 + pole) ** 2
        return float(_mp_beta_moment(q, a, b) + r1 * pole1 + r0 * pole2)
