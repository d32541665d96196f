"""Exception hierarchy.  The CLI maps these onto exit statuses."""


class ExpFieldError(Exception):
    """Base class for all library errors."""


class InputError(ExpFieldError):
    """Malformed or inconsistent user input (CLI exit status 2)."""


class ResourceLimitError(ExpFieldError):
    """A configured computation budget was exceeded (CLI exit status 3)."""


class UnitIdealError(InputError):
    pass


class PresentationError(InputError):
    pass


class ExpUndefinedError(InputError):
    """exp was applied outside the domain A(F) of the partial exponential map."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class NotInAError(InputError):
    pass


class FieldDivisionError(ZeroDivisionError, ExpFieldError):
    pass


class EggRequiredError(InputError):
    pass


class CoefficientScopeError(InputError):
    pass


class NotClosedError(InputError):
    pass


class NoExtensionError(ExpFieldError):
    """A derivation has no extension; evidence that the extension is not strong."""


class DimensionMismatchError(ExpFieldError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        where = "" if line is None else " (line %d, column %d)" % (line, column)
        super().__init__(message + where)
        self.line = line
        self.column = column


class NotApplicableError(InputError):
    """An operation's precondition does not hold for this instance."""
