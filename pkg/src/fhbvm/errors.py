"""Exception hierarchy for the fhbvm package."""


class FhbvmError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(FhbvmError, ValueError):
    """A parameter violates an operation's preconditions."""


class UnsupportedProblemError(FhbvmError, ValueError):
    """The problem falls outside the supported class (e.g. mixed ceil(alpha))."""


class NumericalFailureError(FhbvmError):
    """An underlying numerical kernel failed to converge."""


class ComplexSpectrumError(NumericalFailureError):
    """An eigenvalue with a non-negligible imaginary part was found."""


class SingularMatrixError(NumericalFailureError):
    """An exactly singular matrix was met during factorization."""


class ConstructionFailureError(FhbvmError):
    """Recurrence construction broke down (degenerate weight system)."""

    def __init__(self, message: str, j: int | None = None, i: int | None = None):
        super().__init__(message)
        self.j = j
        self.i = i


class BalancingFailureError(FhbvmError):
    """The diagonal balancing of the recurrence matrix is not applicable."""


class AbscissaeFailureError(FhbvmError):
    """Quadrature abscissae are complex, coincident, or outside [0, 1]."""


class StepFailureError(FhbvmError):
    """A time step could not be completed; carries the partial trajectory."""

    def __init__(self, message: str, step: int, trajectory=None):
        super().__init__(message)
        self.step = step
        self.trajectory = trajectory
