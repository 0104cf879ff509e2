"""Exception types raised by the toolkit.

Every error is a ValueError subclass so callers that do not care about the
distinction can catch broadly; the CLI maps any ZexpandError to a nonzero
exit code.
"""


class ZexpandError(ValueError):
    """Base class for all toolkit errors."""


class ParseError(ZexpandError):
    """Malformed decimal text or record; message cites the offending position or line."""


class StructureError(ZexpandError):
    """Structurally invalid table or record set (gaps, duplicates, empty input)."""


class DomainError(ZexpandError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(ZexpandError):
    """Index or digit count outside the permitted range."""


class ArityError(ZexpandError):
    """Mismatched count of nodes, exponents, or window points."""


class SingularSystemError(ZexpandError):
    """Interpolation system is rank deficient (duplicate nodes or ill-posed exponents)."""


class NoFiniteRadiusError(ZexpandError):
    """Ratio extrapolation produced a nonpositive intercept; no finite radius inferred."""
