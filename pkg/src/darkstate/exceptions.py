"""Exception types raised across the package."""


class DarkStateError(Exception):
    """Base class for all package errors."""


class DegenerateMediumError(DarkStateError, ZeroDivisionError):
    """The Lambda-system response denominator vanishes exactly."""


class UndefinedStateError(DarkStateError, ValueError):
    """Both Rabi frequencies are zero, so no dark state is defined."""


class GridMismatchError(DarkStateError, ValueError):
    """Two sampled quantities live on different transverse grids."""


class UnresolvedFringeError(DarkStateError, ValueError):
    pass


class PropagationError(DarkStateError, RuntimeError):
    """Non-finite values appeared while integrating through the cell."""

    def __init__(self, message, step=None, index=None):
        super().__init__(message)
        self.step = step
        self.index = index


class NoPeakError(DarkStateError, ValueError):
    pass


class UnresolvedPeakError(DarkStateError, ValueError):
    pass


class ConfigError(DarkStateError, ValueError):
    """Invalid or unknown configuration content."""


class SweepError(DarkStateError, RuntimeError):
    """Every row of a sweep failed."""
