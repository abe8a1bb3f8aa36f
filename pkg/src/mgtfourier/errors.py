"""Exception types shared across the toolkit."""


class NumericalFailure(RuntimeError):
    """An iterative procedure failed to converge or two routes disagree.

    Carries the best iterate and its residual when available.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class UnsupportedRegime(ValueError):
    """Operation invoked outside the parameter regime it is defined for."""


class CertificateError(RuntimeError):
    """A decay certificate cannot be produced or is invalid."""

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason if reason is not None else message


class UnfitWindow(RuntimeError):
    """A rate fit window is unusable (too short, zero or overflowed energy)."""
