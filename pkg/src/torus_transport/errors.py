"""Exception hierarchy shared by every module of the package."""


class TorusTransportError(Exception):
    """Base class for all errors raised by torus_transport."""


class ValidationError(TorusTransportError, ValueError):
    """An input violates a documented precondition."""


class AliasingError(ValidationError):
    """Requested frequency range cannot be represented on the grid."""


class MassMismatchError(ValidationError):
    """Two measures that must carry equal mass do not."""


class SignedMeasureError(ValidationError):
    """A nonnegative measure was required but a signed one was given."""


class SizeCapError(ValidationError):
    """Input exceeds the size cap of a brute-force routine."""


class NonConvergenceError(TorusTransportError, ArithmeticError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class BoundViolationError(TorusTransportError, ArithmeticError):
    """A computed upper bound fell below the exact value it must dominate."""
