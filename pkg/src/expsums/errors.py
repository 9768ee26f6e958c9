"""Shared exception types."""


class PolyParseError(ValueError):
    """Malformed polynomial text.  ``offset`` is the 1-based byte position
    of the problem; end-of-input errors point one past the last byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset
        self.bare_message = message


class BudgetExceededError(RuntimeError):
    """An enumeration would touch more points than the configured budget.

    Nothing is silently truncated: the caller either raises the budget or
    shrinks the request."""

    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {needed} points, budget is {budget}")
        self.needed = needed
        self.budget = budget


class QuadratureConvergenceError(RuntimeError):
    """Refinement hit the last level without meeting the tolerance."""
