"""Exception types shared across the package."""


class QbDesignError(Exception):
    """Base class for all qbdesign errors."""


class EmptyDesignError(QbDesignError):
    """Raised when a design source contains no runs."""


class RaggedRowsError(QbDesignError):
    """Raised when design rows have unequal lengths."""

    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"row {row} has {got} entries, expected {expected}")
        self.row = row
        self.expected = expected
        self.got = got


class NonBinaryEntryError(QbDesignError):
    """Raised when a design entry is not -1 or +1 (1-based position)."""

    def __init__(self, row: int, col: int, token: str = ""):
        msg = f"entry at row {row}, column {col} is not -1 or 1"
        if token:
            msg += f" (got {token!r})"
        super().__init__(msg)
        self.row = row
        self.col = col


class InvalidDesignError(QbDesignError):
    """Raised when a design violates a structural invariant (size, values)."""


class BadSubsetError(QbDesignError):
    """Raised for out-of-range or duplicated factor indices."""


class TooLargeError(QbDesignError):
    """Raised when an exhaustive enumeration exceeds its feasibility bound."""


class DimensionMismatchError(QbDesignError):
    """Raised when two indexed structures disagree on their term list."""


class BadCongruenceError(QbDesignError):
    """Raised when a run size does not satisfy N = 2 (mod 4)."""


class UnknownFixtureError(QbDesignError):
    """Raised when a fixture id is not in the registry."""
