"""Exception hierarchy shared by the package."""


class ShatterError(Exception):
    """Base class for all errors raised by this package."""


class MatrixError(ShatterError, ValueError):
    pass


class LabelError(MatrixError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ParseError(MatrixError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SpecError(ShatterError, ValueError):
    """Invalid shattering spec or inconsistent parameters."""


class SizeLimitError(ShatterError):
    """Problem exceeds the desk-scale guards (2^30 patterns, D <= 30)."""


class BudgetExceeded(ShatterError):
    """A search ran past its deadline."""


class MalformedWitness(ShatterError, ValueError):
    """A witness whose shape is wrong, as opposed to one that fails to verify."""
