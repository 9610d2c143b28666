"""Exception types shared across the package."""


class EhrhartError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(EhrhartError):
    """Operands have incompatible or unexpected dimensions."""


class SingularMatrixError(EhrhartError):
    """A square system has no unique solution."""


class RankError(EhrhartError):
    """Vectors are linearly dependent where independence is required."""


class GeometryError(EhrhartError):
    """Geometric precondition violated (non-pointed cone, bad rank, ...)."""


class PreconditionError(EhrhartError):
    """An operation's stated precondition does not hold."""


class ContainmentError(PreconditionError):
    """A polytope expected to be contained in another is not."""


class ShiftSearchError(EhrhartError):
    """No certified shift was found within the search budget."""


class PoleError(EhrhartError):
    """A rational-function evaluation point lies on a pole."""


class PolytopeFileError(EhrhartError):
    """Malformed polytope input file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
