"""Error hierarchy. Every recoverable failure carries a stable machine code."""


class ToolError(Exception):
    code = "ERROR"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class ParseError(ToolError):
    code = "PARSE_ERROR"


class UndeclaredGenerator(ParseError):
    code = "UNDECLARED_GENERATOR"


class MalformedRelation(ParseError):
    code = "MALFORMED_RELATION"


class InconsistentPresentation(ToolError):
    code = "INCONSISTENT_PRESENTATION"


class CollectionBudgetExceeded(ToolError):
    code = "COLLECTION_BUDGET_EXCEEDED"


class CharacterInconsistent(ToolError):
    code = "CHARACTER_INCONSISTENT"


class MismatchedParents(ToolError):
    code = "MISMATCHED_PARENTS"


class ZeroElement(ToolError):
    code = "ZERO_ELEMENT"


class PrecisionTooLow(ToolError):
    code = "PRECISION_TOO_LOW"


class ZeroBelowPrecision(ToolError):
    code = "ZERO_BELOW_PRECISION"


class NotAUnit(ToolError):
    code = "NOT_A_UNIT"


class NotUPositive(ToolError):
    code = "NOT_U_POSITIVE"


class PrecisionExhausted(ToolError):
    code = "PRECISION_EXHAUSTED"


class BadComplex(ToolError):
    code = "BAD_COMPLEX"


class Precondition(ToolError):
    code = "PRECONDITION"
