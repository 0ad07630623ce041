"""Exception hierarchy.

Every error carries a stable ``code`` string (used verbatim in CLI error
reports) and an ``exit_code`` matching the CLI contract: 2 for parse or
request errors, 3 for violated problem hypotheses, 4 for numerical
failures detected during construction.
"""


class RankfillError(Exception):
    code = "Error"
    exit_code = 1


class ParseError(RankfillError):
    """A problem file could not be parsed against the RMP schema."""

    code = "ParseError"
    exit_code = 2


class InvalidSpec(RankfillError):
    """Generator parameters violate their constraints."""

    code = "InvalidSpec"
    exit_code = 2


class ValidationError(RankfillError):
    """A hypothesis of the structured inversion does not hold for the input."""

    code = "ValidationError"
    exit_code = 3


class DimensionMismatch(ValidationError):
    code = "DimensionMismatch"


class NonFiniteInput(ValidationError):
    code = "NonFiniteInput"


class RankOfANotNMinusK(ValidationError):
    """A's numerical rank is not n - k.

    ``detected_rank`` reports the rank found at the decision tolerance.
    """

    code = "RankOfANotNMinusK"

    def __init__(self, message, detected_rank=None):
        super().__init__(message)
        self.detected_rank = detected_rank


class DSingular(ValidationError):
    code = "DSingular"


class SpanDeficientE(ValidationError):
    """Columns of e do not complete the column space of A."""

    code = "SpanDeficientE"


class SpanDeficientF(ValidationError):
    """Columns of f do not complete the column space of A*."""

    code = "SpanDeficientF"


class NumericalError(RankfillError):
    exit_code = 4


class PivotSingular(NumericalError):
    """A k-by-k pivot block (U_k* e, f* V_k, u* e, f* v or M) is numerically
    singular even though validation passed."""

    code = "PivotSingular"


class InnerMatrixSingular(NumericalError):
    """The n-by-n matrix inverted by the SVD-free construction is singular."""

    code = "InnerMatrixSingular"


class OracleSingular(NumericalError):
    """The dense reference inversion failed; for a validated problem this
    signals a validation bug, not a user error."""

    code = "OracleSingular"
