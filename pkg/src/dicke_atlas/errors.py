"""Exception types raised across the package."""


class AtlasError(Exception):
    """Base class for all package errors."""


class DomainError(AtlasError, ValueError):
    """A state lies outside the domain where a formula is defined."""


class UnsupportedU(AtlasError, ValueError):
    """A closed form was requested for a nonzero nonlinear coupling U."""


class UndefinedAtT(AtlasError, ValueError):
    """A quantity is undefined at the requested coupling ratio."""


class PhaseMismatch(AtlasError, ValueError):
    """The parameters cannot host the requested phase or branch."""


class EmptyBranch(AtlasError, ValueError):
    """The requested superradiant branch has no solution (below threshold)."""


class AxisError(AtlasError, ValueError):
    """Invalid sweep axis specification."""


class DimensionError(AtlasError, ValueError):
    """Hilbert-space dimension exceeds the desk-scale guard."""


class SweepVerificationError(AtlasError):
    """A spot-checked sweep cell disagreed with the variational oracle."""


class ConvergenceError(AtlasError, RuntimeError):
    """An iterative solver did not converge.

    The best point found so far is attached as ``best`` (may be None).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
