class GraphNumError(ValueError):
    """Base class for every error raised by graphnum."""


class DomainError(GraphNumError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(GraphNumError):
    """A structured value (combination, code, graph, config) is malformed."""


class GraphParseError(ValidationError):
    """A graph or code file could not be parsed.

    ``line`` is the 1-based line number of the offending line, or ``None``
    when the problem is not tied to a single line.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
