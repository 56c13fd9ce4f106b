"""Exception types shared across the package."""


class OapError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(OapError):
    """Operands have incompatible shapes."""


class NonFiniteVector(OapError):
    """A vector crossing a public boundary contains NaN or Inf."""


class NumericalOverflow(OapError):
    """A recurrence produced a non-finite intermediate value."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class DegenerateSeed(OapError):
    """A starting-vector construction produced a (near-)zero direction."""


class EmptySubspace(OapError):
    """Rank filtering removed every column of a projection basis."""


class MatrixMarketError(OapError):
    """Malformed Matrix Market content."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
