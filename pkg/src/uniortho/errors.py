"""Exception types shared across the package.

Every error raised by the library derives from :class:`UniorthoError`, so
callers (in particular the CLI) can map failures to exit codes without
pattern matching on messages.
"""

from __future__ import annotations


class UniorthoError(Exception):
    """Base class for all library errors."""


class InvalidRingSpec(UniorthoError):
    """A ring presentation is malformed (composite p, bad exponent, ...)."""


class EvenCharacteristic(InvalidRingSpec):
    """p = 2 requested; everything here assumes odd characteristic."""


class ReducibleModulus(InvalidRingSpec):
    """Extension/Galois modulus factors mod p, so the quotient is not local."""


class NotLocal(UniorthoError):
    """The exhaustive construction check found non-units not forming an ideal."""


class MixedRings(UniorthoError):
    """Operands do not belong to the ring an operation was invoked on."""


class NotAUnit(UniorthoError):
    """Inversion or square classification requested for a non-unit."""


class TooLarge(UniorthoError):
    """An exhaustive operation would exceed the configured enumeration bound."""


class DimensionMismatch(UniorthoError):
    """Vector or matrix dimensions are incompatible."""


class NotSymmetric(UniorthoError):
    """Operation requires a symmetric bilinear form."""


class Degenerate(UniorthoError):
    """Operation requires an invertible associate matrix."""


class NotUnimodular(UniorthoError):
    """Operation requires a unimodular vector."""


class WrongClass(UniorthoError):
    """Witness construction invoked on a form of the other discriminant class."""


class UnsupportedDimension(UniorthoError):
    """The closed-form prediction only covers dimension 2."""


class SearchTimeout(UniorthoError):
    """Exact search exceeded its time budget; no partial answer is returned."""

    def __init__(self, budget: float, node_count: int):
        super().__init__(
            f"search exceeded {budget:g}s budget after {node_count} nodes"
        )
        self.budget = budget
        self.node_count = node_count

    def __reduce__(self):
        # keeps the exception picklable across worker processes
        return (SearchTimeout, (self.budget, self.node_count))


class ConfigError(UniorthoError):
    """Base class for harness configuration problems."""


class ParseError(ConfigError):
    """Config text is not syntactically valid."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column


class ValidationError(ConfigError):
    """Config parsed but the contents are rejected."""
