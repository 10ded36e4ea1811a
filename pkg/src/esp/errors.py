"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid model or polynomial parameters, or an argument outside the domain."""


class SingularityError(ArithmeticError):
    """Evaluation too close to a pole or a degenerate point of a transformation."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its tolerance.

    ``estimates`` carries the last values seen, for diagnostics.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class SolverError(RuntimeError):
    """Eigensolver misconfiguration (bad bracket, no sign change, ...)."""
