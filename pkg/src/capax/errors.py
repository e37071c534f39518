"""Exception hierarchy.

Everything the library raises on a domain error derives from CapaxError, so the
command line tool can map it to a single exit code.  Usage errors (bad flags,
malformed files) are raised as ValueError subclasses where python conventions
expect them and converted at the CLI boundary.
"""

from __future__ import annotations


class CapaxError(Exception):
    """Base class for domain errors raised by this package."""


class PrecisionError(CapaxError):
    """Mixed exact/float operands, or an operation unsupported at a precision."""


class DegreeOverflowError(CapaxError):
    """A monomial exponent left the supported range."""


class ParseError(CapaxError):
    """Polynomial text that does not match the grammar.

    Carries the character offset of the failure.
    """

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class MapError(CapaxError):
    """A polynomial pair that does not define a usable map."""


class StaircaseError(CapaxError):
    """The ideal of the top forms is not zero-dimensional."""


class StarSearchError(CapaxError):
    """No auxiliary multiplier certifies the pure-w reduction up to the bound."""


class MeshError(CapaxError):
    """Bad set specification or sample counts."""


class FiberError(CapaxError):
    """Fiber solving failed to certify roots at the required residual."""


class EstimateError(CapaxError):
    """A numerical estimate could not be formed on the given data."""
