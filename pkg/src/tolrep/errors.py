"""Shared exception types."""


class DimensionError(ValueError):
    """Two relations, or a relation and an algebra, disagree on universe size."""


class BudgetExceeded(RuntimeError):
    """A search or enumeration hit its configured budget before deciding."""


class DocumentError(ValueError):
    """Malformed algebra document; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TermSyntaxError(ValueError):
    """Malformed relation term; carries the offending character offset."""

    def __init__(self, position: int, message: str):
        super().__init__(f"position {position}: {message}")
        self.position = position
