class InvalidInput(ValueError):
    """Raised for malformed or out-of-contract arguments."""


class DomainValidationError(InvalidInput):
    """A polygonal domain violates one of its invariants.

    ``path`` locates the offending piece, e.g. ``"slits[2]"`` or ``"$.holes[0][3]"``.
    """

    def __init__(self, message, path=None):
        super().__init__(message if path is None else f"{path}: {message}")
        self.path = path
        self.reason = message


class Unreachable(RuntimeError):
    """No admissible path joins the two query points."""


class DegenerateConfiguration(ValueError):
    """A construction hit a tangency or another measure-zero configuration."""


class InfeasibleTolerance(RuntimeError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
