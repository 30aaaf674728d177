"""Exception hierarchy shared by every module of the package."""


class EichlerKitError(Exception):
    """Base class for all package errors."""


class ResourceExceeded(EichlerKitError):
    """A configured order, class or search budget would be exceeded."""


class ElementNotInGroup(EichlerKitError):
    pass


class EnumerationOverflow(EichlerKitError):
    """Coset enumeration needed more cosets than allowed."""


class InvalidSpec(EichlerKitError):
    pass


class ParseError(EichlerKitError):
    """Malformed catalog line, presentation or group expression.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        elif column is not None:
            where = f" (column {column})"
        super().__init__(message + where)


class ValidationError(EichlerKitError):
    def __init__(self, message, expected=None, computed=None):
        self.expected = expected
        self.computed = computed
        if expected is not None or computed is not None:
            message = f"{message}: expected {expected}, computed {computed}"
        super().__init__(message)


class NotQuotientClosed(EichlerKitError):
    pass


class NotATwoGroup(EichlerKitError):
    pass


class NoC22Quotient(EichlerKitError):
    pass


class NotPeriodic(EichlerKitError):
    pass
