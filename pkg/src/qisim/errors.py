"""Exception types raised across the package."""


class QisimError(Exception):
    """Base class for all package errors."""


class CapExceeded(QisimError, ValueError):
    """Requested register size is above the configured qubit cap."""


class ArityMismatch(QisimError, ValueError):
    """Oracle arity does not match the register or bit string it is applied to."""


class ShapeMismatch(QisimError, ValueError):
    """Two states that must share a register size do not."""


class NotNormalized(QisimError, ValueError):
    """A unit-norm state was required."""


class NullInterference(QisimError, ArithmeticError):
    """The two arms cancelled: nothing left to renormalize.

    In ideal (noise-free) mode this means the effective solution set is empty.
    """

    def __init__(self, norm_sq: float, tolerance: float):
        self.norm_sq = norm_sq
        self.tolerance = tolerance
        super().__init__(
            f"squared norm {norm_sq:.3e} is below null tolerance {tolerance:.1e}"
        )


class ParamNotFound(QisimError, LookupError):
    """A sweep addressed an element that does not exist or has no such parameter."""


class DimacsError(QisimError, ValueError):
    """Base class for DIMACS parse failures. ``lineno`` is 1-based, or None."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


class DimacsSyntaxError(DimacsError):
    pass


class MissingHeader(DimacsError):
    pass


class HeaderMismatch(DimacsError):
    pass


class LiteralOutOfRange(DimacsError):
    pass


class UnterminatedClause(DimacsError):
    pass
