"""Exception and warning types shared across the package."""


class KgCurrentError(Exception):
    """Base class for errors raised by this package."""


class GridMismatchError(KgCurrentError):
    """A field or state was combined with a grid it does not live on."""


class ResolutionError(KgCurrentError):
    """The requested grid cannot resolve the requested physics.

    Raised e.g. when a wave packet carries more than 1e-10 of its norm
    beyond the momentum cutoff, or when a boost pushes spectral support
    outside the representable band.
    """


class UnsupportedInputError(KgCurrentError):
    """The operation is not defined for this input (e.g. two-branch
    states in a single-branch-only code path)."""


class InterpolationError(KgCurrentError):
    """Resampling after a boost degraded the state beyond tolerance."""


class ConvergenceError(KgCurrentError):
    """An iterative protocol exhausted its budget without converging."""


class UnnormalizedStateWarning(UserWarning):
    """Emitted when an operation that expects a unit-norm state receives
    a state whose norm deviates from 1 by more than 1e-8."""
