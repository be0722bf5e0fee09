"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """An enumeration or brute-force search would exceed its configured cap."""

    def __init__(self, what, count, cap):
        super().__init__(f"{what}: {count} candidates exceeds budget {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class IncompatiblePriorities(ValueError):
    """Two objects that must share a priority range do not."""


class PreconditionError(ValueError):
    """An operation was called on input violating its precondition.

    ``witness`` carries whatever evidence the caller needs to see why
    (an odd cycle, an axiom report, a separation report).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(ValueError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


DEFAULT_BUDGET = 1 << 22
