"""Exception types raised by the solvers."""


class NLDeltaError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NLDeltaError, ValueError):
    """Malformed problem input. ``field`` names the offending entry."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(NLDeltaError, ValueError):
    """A function was evaluated outside its domain."""


class ScanError(NLDeltaError):
    """A root scan could not evaluate its target anywhere on the grid."""


class BracketError(NLDeltaError, ValueError):
    """The bracket handed to a refiner does not enclose a sign change."""


class NoBranchError(NLDeltaError):
    """No self-consistent scattering branch was found in the scan range."""


class NoBoundStateError(NLDeltaError):
    """No bound state exists (or none was found).

    ``diagnostics`` maps a parity label to a human readable reason.
    """

    def __init__(self, message, diagnostics=None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class ConvergenceError(NLDeltaError):
    """An iterative solver failed from every seed it tried."""

    def __init__(self, message, seeds=()):
        self.seeds = list(seeds)
        super().__init__(message)
