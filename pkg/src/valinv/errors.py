"""Exception hierarchy shared by the library and the CLI.

Every error carries a short machine-readable ``code`` so the CLI can emit
``{"error": code, "detail": ...}`` without a lookup table.
"""


class ValinvError(Exception):
    code = "Error"


class ValidationError(ValinvError, ValueError):
    """Input violates a documented precondition."""

    code = "ValidationError"


class NotFiniteIndex(ValidationError):
    code = "NotFiniteIndex"


class NotNested(ValidationError):
    code = "NotNested"


class InvalidPmt(ValidationError):
    code = "InvalidPmt"


class PreconditionViolated(ValidationError):
    code = "PreconditionViolated"


class MalformedRelation(ValidationError):
    code = "MalformedRelation"


class NonIntegralDefect(ValidationError):
    code = "NonIntegralDefect"


class MissingData(ValidationError):
    code = "MissingData"


class InconsistentFamily(ValinvError):
    code = "InconsistentFamily"

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v["arrow"] for v in self.violations))


class UnstableCount(ValinvError):
    code = "UnstableCount"


class SearchExhausted(ValinvError):
    """Base for searches that stop without an answer (CLI exit code 3)."""

    code = "SearchExhausted"

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class BudgetExceeded(SearchExhausted):
    code = "BudgetExceeded"


class NotFound(SearchExhausted):
    code = "NotFound"
