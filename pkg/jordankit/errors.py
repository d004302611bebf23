"""
Exception hierarchy shared by the library and the command line.

Every error carries a stable ``code`` and the process ``exit_status`` the CLI
returns for it.
"""

from __future__ import annotations


class JordanKitError(Exception):
    code = "INTERNAL"
    exit_status = 1

    def __init__(self, message: str = "") -> None:
        super().__init__(message or self.code)
        self.message = message or self.code

    def to_dict(self) -> dict:
        return {"code": self.code, "detail": self.message}


# -- input problems (exit 2) -------------------------------------------------


class InputError(JordanKitError, ValueError):
    code = "INPUT_ERROR"
    exit_status = 2


class ExpressionSyntaxError(InputError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, position: int, text: str = "") -> None:
        self.reason = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload["position"] = self.position
        return payload


class SchemaError(InputError):
    code = "SCHEMA_ERROR"


class FileError(InputError):
    code = "FILE_ERROR"


class IndexOutOfRangeError(InputError):
    code = "INDEX_OUT_OF_RANGE"


class DimensionMismatchError(InputError):
    code = "DIMENSION_MISMATCH"


class NonSquareError(InputError):
    code = "NON_SQUARE"


class NotPolynomialError(InputError):
    code = "NOT_POLYNOMIAL"


class MissingFlagError(InputError):
    code = "MISSING_FLAG"


# -- violated preconditions (exit 3) -----------------------------------------


class PreconditionError(JordanKitError):
    code = "PRECONDITION"
    exit_status = 3


class DivisionByZeroPolyError(PreconditionError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO_POLY"


class DivisionByZeroFunctionError(PreconditionError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO_FUNCTION"


class PoleAtPointError(PreconditionError):
    code = "POLE_AT_POINT"


class RemovablePointError(PreconditionError):
    """Both numerator and denominator vanish: a normalization invariant was broken."""

    code = "REMOVABLE_POINT"


class ZeroPolynomialError(PreconditionError):
    code = "ZERO_POLYNOMIAL"


class EntryPoleError(PreconditionError):
    code = "ENTRY_POLE"

    def __init__(self, row: int, col: int, point: object = None) -> None:
        self.row = row
        self.col = col
        self.point = point
        where = f" at {point}" if point is not None else ""
        super().__init__(f"entry ({row}, {col}) has a pole{where}")


class MixedPointError(PreconditionError):
    code = "MIXED_POINT"


class SingularMatrixFunctionError(PreconditionError):
    code = "SINGULAR_FUNCTION"


class NotAnEigenvalueError(PreconditionError):
    code = "NOT_EIGENVALUE"


class NotAnEigenpairError(PreconditionError):
    code = "NOT_EIGENPAIR"


class ZeroComponentError(PreconditionError):
    code = "ZERO_COMPONENT"

    def __init__(self, index: int) -> None:
        self.index = index
        super().__init__(f"component {index} of the eigenvector is zero")


class DegenerateDerivativeError(PreconditionError):
    code = "DEGENERATE_DERIVATIVE"

    def __init__(self, unknown: int, order: int) -> None:
        self.unknown = unknown
        self.order = order
        super().__init__(f"derivative of order {order} of u_{unknown} vanishes identically")


class ZeroEigenvectorCandidateError(PreconditionError):
    code = "ZERO_EIGENVECTOR"


class SampleAtSingularityError(PreconditionError):
    code = "SAMPLE_AT_SINGULARITY"


# -- numeric path (exit 4) ---------------------------------------------------


class NumericError(JordanKitError):
    code = "NUMERIC_ERROR"
    exit_status = 4


class ConvergenceFailureError(NumericError):
    code = "CONVERGENCE_FAILURE"
