"""Exception types shared across the package."""


class NsoptError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NsoptError):
    """Bad schedule, grid, or cone budget; CLI maps this to exit code 2."""


class PreconditionError(NsoptError):
    """An operation was called outside its stated precondition."""


class CapabilityError(NsoptError):
    """The function handle lacks something the operation needs (e.g. a gradient)."""


class DomainArithmeticError(NsoptError):
    """Extended-real arithmetic hit an undefined combination (+inf plus -inf)."""


class ProperFunctionError(NsoptError):
    """A function handle violated properness (returned -inf or NaN)."""


class ParseError(NsoptError):
    """Expression-file syntax error, with position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
