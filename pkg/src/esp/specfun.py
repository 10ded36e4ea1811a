"""Classical orthogonal polynomials and the log-gamma function.

Both polynomial families are evaluated with their three-term forward
recurrences. The argument ``z`` may be a float, a numpy array, or a
``numpy.polynomial.Polynomial``; in the last case the recurrence builds the
coefficient representation, which the closed-form integrals in :mod:`esp.eop`
rely on.
"""

import math

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ParameterError

__all__ = ["laguerre", "jacobi", "log_gamma", "laguerre_poly", "jacobi_poly"]


def _one(z):
    if isinstance(z, Polynomial):
        return Polynomial([1.0])
    if np.ndim(z) == 0:
        return 1.0
    return np.ones_like(np.asarray(z, dtype=float))


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ParameterError(f"degree must be a non-negative integer, got {n!r}")
    return int(n)


def laguerre(n, alpha, z):
    """Generalized Laguerre polynomial :math:`L_n^{\\alpha}(z)`.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    alpha : float
        Must satisfy ``alpha > -1``.
    z : float, ndarray or Polynomial

    Returns
    -------
    Same kind as ``z``.
    """
    n = _check_degree(n)
    if not alpha > -1:
        raise ParameterError(f"Laguerre parameter alpha must exceed -1, got {alpha}")
    prev = _one(z)
    if n == 0:
        return prev
    cur = 1.0 + alpha - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - z) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def jacobi(n, alpha, beta, z):
    """Jacobi polynomial :math:`P_n^{(\\alpha,\\beta)}(z)`, ``alpha, beta > -1``."""
    n = _check_degree(n)
    if not (alpha > -1 and beta > -1):
        raise ParameterError(
            f"Jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}"
        )
    prev = _one(z)
    if n == 0:
        return prev
    ab = alpha + beta
    cur = (alpha + 1) + 0.5 * (ab + 2) * (z - 1)
    for k in range(1, n):
        s = 2 * k + ab
        a1 = 2 * (k + 1) * (k + ab + 1) * s
        a2 = (s + 1) * (alpha * alpha - beta * beta)
        a3 = s * (s + 1) * (s + 2)
        a4 = 2 * (k + alpha) * (k + beta) * (s + 2)
        prev, cur = cur, ((a2 + a3 * z) * cur - a4 * prev) / a1
    return cur


def laguerre_poly(n, alpha):
    """Coefficient form of :math:`L_n^{\\alpha}` as a ``Polynomial``."""
    return laguerre(n, alpha, Polynomial([0.0, 1.0]))


def jacobi_poly(n, alpha, beta):
    """Coefficient form of :math:`P_n^{(\\alpha,\\beta)}` as a ``Polynomial``."""
    return jacobi(n, alpha, beta, Polynomial([0.0, 1.0]))


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise ParameterError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)
