class TwoValuedError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(TwoValuedError, ValueError):
    """An argument lies outside the domain of the operation."""


class NotCSPError(TwoValuedError):
    """The input function is not coalitionally strategy-proof.

    ``witness`` carries whatever evidence the raising routine found
    (a profile, a pair of profiles, a coalition), or ``None``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceBoundError(TwoValuedError):
    """The requested instance exceeds the configured enumeration bound."""


class ParseError(TwoValuedError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
