"""Exception hierarchy shared by all vkt modules."""


class VktError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(VktError):
    """Formula text could not be tokenized or parsed.

    `column` is the 1-based position of the offending character.
    """

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


class ValidationError(VktError):
    """Malformed or inconsistent input data (models, relations, maps, ...)."""


class BoundError(VktError):
    """A size cap was exceeded (level enumeration, hyperspace carrier)."""
