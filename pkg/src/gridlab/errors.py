"""Exception types shared across the package."""


class GridLabError(ValueError):
    """Base class for invalid input to any gridlab routine."""


class OutOfBounds(GridLabError):
    pass


class LoopEdge(GridLabError):
    pass


class DimensionMismatch(GridLabError):
    pass


class NotStratified(GridLabError):
    pass


class EmptyGraph(GridLabError):
    pass


class NotSymmetric(GridLabError):
    pass


class NonDiagonalEdge(GridLabError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would visit more subsets than allowed."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"enumeration needs {needed} subsets, budget is {budget}")
        self.needed = needed
        self.budget = budget


class MalformedInput(GridLabError):
    """Unparseable graph JSON or table text."""
