class GeometryError(Exception):
    """Base class for engine errors."""


class DomainError(GeometryError):
    """A field was evaluated outside its chart's sample box."""


class DerivativeDomainError(DomainError):
    """A finite-difference stencil does not fit in the box."""


class ContractError(GeometryError, ValueError):
    """Inputs violate an operation's preconditions (valence, index, dimension)."""


class NondegeneracyError(GeometryError):
    """The metric is singular at a point."""


class PlaneDegeneracyError(NondegeneracyError):
    """A 2-plane on which g restricts to a degenerate form."""


class AxiomError(GeometryError):
    """A structure failed its axiom checks and cannot be classified."""

    def __init__(self, message: str, failed: list[str] | None = None):
        super().__init__(message)
        self.failed = failed or []


class ConstructionError(GeometryError, ValueError):
    """A catalog constructor rejected its parameters."""
