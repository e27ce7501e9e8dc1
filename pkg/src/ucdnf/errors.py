"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to: 2 for validation
problems, 3 for exhausted budgets. Usage errors (1) and failed checks (4)
are produced by the CLI itself.
"""


class UcdnfError(Exception):
    exit_code = 2
    code = "ERROR"


class ArityMismatch(UcdnfError):
    code = "ARITY_MISMATCH"


class FormatError(UcdnfError):
    code = "FORMAT_ERROR"


class BudgetExceeded(UcdnfError):
    exit_code = 3
    code = "BUDGET_EXCEEDED"


class UndeterminedValue(UcdnfError):
    """An implicit evaluator could not decide an input within its budget."""

    exit_code = 3
    code = "UNDETERMINED"


class NotInSigma(UcdnfError):
    code = "NOT_IN_SIGMA"


class NotTotal(UcdnfError):
    code = "NOT_TOTAL"


class LPNumericalFailure(UcdnfError):
    code = "LP_NUMERICAL_FAILURE"


class EmptyEdgeSet(UcdnfError):
    code = "EMPTY_EDGE_SET"


class VertexOutOfRange(UcdnfError):
    code = "VERTEX_OUT_OF_RANGE"


class SizeCapExceeded(UcdnfError):
    exit_code = 3
    code = "SIZE_CAP_EXCEEDED"


class NotPrime(UcdnfError):
    code = "NOT_PRIME"


class NotApplicable(UcdnfError):
    code = "NOT_APPLICABLE"


class ConstructionFailed(UcdnfError):
    code = "CONSTRUCTION_FAILED"


class GeometryInvalid(UcdnfError):
    code = "GEOMETRY_INVALID"


class GateFailed(UcdnfError):
    code = "GATE_FAILED"


class XNotStar(UcdnfError):
    code = "X_NOT_STAR"


class InvalidCover(UcdnfError):
    code = "INVALID_COVER"


class NotIntersecting(UcdnfError):
    code = "NOT_INTERSECTING"


class TooLarge(UcdnfError):
    exit_code = 3
    code = "TOO_LARGE"
