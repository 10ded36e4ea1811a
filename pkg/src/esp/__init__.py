"""Exactly solvable radial potentials built from X1 exceptional polynomials.

Submodules
----------
specfun     classical Laguerre and Jacobi polynomials, log-gamma
eop         X1 Laguerre and Jacobi polynomials, their equations and norms
xform       change-of-variable engine producing V - E and psi
catalog     the extended families and their standard partners
quadrature  composite Gauss-Legendre integration
numsolve    finite-difference and Numerov eigensolvers
verify      analytic-versus-numeric validation reports
cli         the ``esp`` command
"""

from .catalog import FamilyId, Reading, build_model
from .errors import ConvergenceError, ParameterError, SingularityError, SolverError

__version__ = "0.1.0"

__all__ = [
    "FamilyId",
    "Reading",
    "build_model",
    "ParameterError",
    "SingularityError",
    "ConvergenceError",
    "SolverError",
]
