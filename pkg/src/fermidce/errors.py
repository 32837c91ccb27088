"""Exception types shared across the package.

Two families matter for callers: ``ValueError`` subclasses signal invalid
inputs or guarded sizes (CLI exit code 2), ``NumericalFailure`` subclasses
signal a computation that ran but did not meet its accuracy contract
(CLI exit code 3).
"""


class DomainError(ValueError):
    """An argument lies outside the physical domain of the operation."""


class DegenerateDriveError(ValueError):
    """Zero drive speed with a nonzero expansion requested."""


class SizeGuardError(ValueError):
    """A brute-force or dense computation beyond its guarded size."""


class NumericalFailure(RuntimeError):
    """A numerical routine violated its accuracy contract."""


class ConvergenceError(NumericalFailure):
    """Quadrature or iterative refinement failed to converge."""


class IllConditionedError(NumericalFailure):
    """Linear solve rejected because of excessive condition number."""


class BranchTrackingError(NumericalFailure):
    """Phase unwrapping of a log-determinant ran out of path resolution."""


class PairingError(NumericalFailure):
    """Singular values of the pairing matrix failed to pair up."""


class ConsistencyError(NumericalFailure):
    """Two independent routes to the same quantity disagree."""


class FitError(NumericalFailure):
    """Least-squares fit rejected (rank deficient or ill conditioned)."""
