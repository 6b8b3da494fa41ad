"""Exception and warning types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called outside the domain where it is defined."""


class NotVeryCleanError(PreconditionError):
    """The linear data at a fixed point fails the very-clean condition."""


class IllConditionedError(ArithmeticError):
    """A matrix is too close to singular for the requested factorisation."""


class DampingViolation(ArithmeticError):
    """Sampled real part of the amplitude exponent is not negative definite."""

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class ConvergenceError(ArithmeticError):
    """Quadrature did not settle under node doubling."""


class TailCoverageError(ValueError):
    """The spectral model is truncated below the level needed for a sum."""


class ConventionError(AssertionError):
    """A closed-form convention disagrees with its ODE cross-check."""


class RankGapWarning(RuntimeWarning):
    """A singular value sits close to the rank threshold."""


class WindowWarning(UserWarning):
    """A displacement lies outside the scaling window of the expansion."""
