"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """A problem definition violates a structural precondition."""


class DomainError(ValueError):
    """Inputs are structurally fine but outside the domain of the operation."""


class PoleError(DomainError):
    """A gamma factor hits a pole inside the requested truncation range."""

    def __init__(self, message, offenders=()):
        super().__init__(message)
        # list of (coordinate label, multi-index) pairs that hit the pole
        self.offenders = tuple(offenders)


class ConvergenceError(RuntimeError):
    """A truncated sum shows no sign of settling at the requested order."""
