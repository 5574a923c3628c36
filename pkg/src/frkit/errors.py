"""Exception hierarchy shared by every engine."""


class FRError(Exception):
    """Base class for all toolkit errors."""


class MalformedTask(FRError):
    """LP task dimensions disagree."""


class NonFinite(FRError):
    """Matrix contains NaN or Inf."""


class InvalidCertificate(FRError):
    """An exposing-vector certificate fails its own invariants."""


class PreconditionFailed(FRError):
    """An operation was called outside its precondition."""


class NotRedundant(FRError):
    """The variable is not zero on every feasible point."""


class TooLarge(FRError):
    """Instance exceeds the brute-force cap."""


class NotApplicable(FRError):
    """Neither hypothesis of the block upper bound holds."""


class EmptyFeasibleSet(FRError):
    """L intersected with the cone is empty."""


class DimensionMismatch(FRError):
    """Problem, face and certificate sizes disagree."""


class BadOrder(FRError):
    """Matrix order outside the supported range."""


class ParseError(FRError):
    """Malformed DIMACS input."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class NonTernaryClause(ParseError):
    """A clause does not have exactly three distinct literals."""


class NotPreprocessed(FRError):
    """Input CNF does not satisfy the preprocessing invariants."""


class UnsatisfiedAssignment(FRError):
    """Assignment violates a clause."""

    def __init__(self, clause_index, clause):
        self.clause_index = clause_index
        self.clause = clause
        super().__init__(f"clause {clause_index + 1} {clause} is violated")


class BudgetExceeded(FRError):
    """Assignment enumeration would exceed the budget."""
