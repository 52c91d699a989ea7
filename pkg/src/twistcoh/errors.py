"""Exception types shared across the package."""


class UsageError(ValueError):
    """An operation was called outside its preconditions."""


class PoleError(ZeroDivisionError):
    """A rational function was evaluated where its denominator vanishes."""


class ParseError(ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
