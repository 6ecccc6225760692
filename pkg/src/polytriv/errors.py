"""Exception hierarchy shared by every module."""


class PolytrivError(Exception):
    """Base class for library errors."""


class ArgumentError(PolytrivError, ValueError):
    """An argument is out of range or malformed."""


class SignatureMismatchError(ArgumentError):
    """Function tables do not match the predicate's alphabet sizes or arity."""


class DegenerateInputError(ArgumentError):
    """An operation that needs a non-degenerate predicate received a degenerate one."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"predicate is degenerate: {report.summary()}")


class PreconditionError(PolytrivError, ValueError):
    """A documented precondition of an operation does not hold."""


class CapabilityError(PolytrivError):
    """The request exceeds a configured size limit."""


class BudgetExceededError(PolytrivError):
    """An enumeration ran out of its assignment budget.

    ``partial`` holds whatever results were produced before the budget ran
    out; callers must treat them as incomplete.
    """

    def __init__(self, budget, assignments, partial=None):
        self.budget = budget
        self.assignments = assignments
        self.partial = [] if partial is None else partial
        super().__init__(
            f"assignment budget {budget} exhausted after {assignments} assignments "
            f"({len(self.partial)} partial results)"
        )
