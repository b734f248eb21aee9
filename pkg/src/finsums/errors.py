"""Exception hierarchy shared across the package."""


class FinsumsError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FinsumsError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class WindowError(FinsumsError, LookupError):
    """A table coloring was evaluated outside its declared window."""


class ThinningError(FinsumsError):
    """Color-doubling thinning found two members sharing a base-3 least exponent.

    Signals that the input set was not genuinely monochromatic for the
    doubled coloring; the violation is reported, never repaired.
    """


class InterleaveError(FinsumsError):
    """No alternating chain of the requested length exists."""


class ChunkError(FinsumsError):
    """A set is too short to be chunked into >= 2 exactly large pieces."""


class CompositionError(FinsumsError):
    """Reduction composition attempted across mismatched principles."""


class BudgetError(FinsumsError):
    """An enumeration or search exceeds its declared budget."""
