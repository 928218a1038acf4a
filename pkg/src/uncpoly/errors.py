"""Exception hierarchy shared by every module."""


class UncpolyError(Exception):
    """Base class for all library errors."""


class StructuralError(UncpolyError, ValueError):
    """Shapes, dimensions or norm tags do not fit together."""


class DomainError(UncpolyError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class BudgetExceeded(UncpolyError):
    """An exhaustive computation would exceed its configured cap."""


class BoundaryError(DomainError):
    """A step function was evaluated exactly at a breakpoint."""


class UnsupportedError(UncpolyError):
    """The requested conversion is not available for this representation."""
