class TreesepError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(TreesepError):
    """A term or symbol does not conform to the governing signature."""


class ValidationError(TreesepError):
    """An automaton violates completeness or state-declaration rules."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnboundVariableError(TreesepError):
    pass


class PreconditionError(TreesepError):
    pass


class BudgetExceededError(TreesepError):
    """Raised instead of enumerating more assignments than the budget allows."""

    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumeration of {needed} assignments exceeds budget {budget}")


class ParseError(TreesepError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
