"""Exception types shared across the package."""


class EngineError(Exception):
    """Base class for every error this package raises deliberately."""


class ContextError(EngineError):
    """Operands were built over different basis contexts, or a label is unknown."""


class SizeLimitError(EngineError):
    """A combinatorial enumeration would exceed the configured cap."""


class ParseError(EngineError):
    """Source text could not be parsed; carries the offending position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.bare_message = message
        self.line = line
        self.column = column


class EvaluationError(EngineError):
    """A well-formed command failed during evaluation (bad name, arity, kind)."""
