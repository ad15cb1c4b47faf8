"""Exception hierarchy for Poisson pair computations."""

from typing import Any, Optional


class PoissonPairsError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(PoissonPairsError):
    """Objects of different dimension, or a dimension outside the allowed range."""


class KindError(PoissonPairsError):
    """A differential form was combined with a multivector (or vice versa)."""


class DomainError(PoissonPairsError):
    """An argument lies outside the domain of the operation."""


class UndefinedGcdError(PoissonPairsError):
    """gcd(0, 0) was requested."""


class SingularMatrixError(PoissonPairsError):
    """A matrix that must be invertible is singular."""


class DegenerateInputError(PoissonPairsError):
    """Input data fails a non-degeneracy requirement."""


class UnsupportedError(PoissonPairsError):
    """The request is well formed but outside what the package decides."""


class PreconditionError(PoissonPairsError):
    """A mathematical hypothesis of a construction does not hold.

    Attributes:
        reason: Short machine-readable reason code
        witness: Optional object showing the failure
    """

    def __init__(self, message: str, reason: str = "precondition", witness: Any = None):
        super().__init__(message)
        self.reason = reason
        self.witness = witness


class InapplicableError(PoissonPairsError):
    """A classifier or criterion does not apply to the input."""

    def __init__(self, message: str, reason: str = "inapplicable"):
        super().__init__(message)
        self.reason = reason


class TorsionError(PoissonPairsError):
    """The Nijenhuis torsion of an endomorphism does not vanish.

    Attributes:
        pair: Basis index pair (i, j), 0-based, of the first nonzero entry
        value: Coordinates of N(e_i, e_j)
    """

    def __init__(self, pair, value):
        i, j = pair
        super().__init__(f"Nijenhuis torsion is nonzero at (e{i + 1}, e{j + 1})")
        self.pair = pair
        self.value = value


class ParseError(PoissonPairsError):
    """Malformed input file or expression."""

    def __init__(self, message: str, location: Optional[str] = None):
        text = f"{location}: {message}" if location else message
        super().__init__(text)
        self.location = location


class UsageError(PoissonPairsError):
    """Bad command-line usage."""
