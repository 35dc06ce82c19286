"""Exception types raised by the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class BudgetExceededError(RuntimeError):
    """An exact search hit its node budget before finishing."""

    def __init__(self, budget, message=None):
        self.budget = budget
        super().__init__(message or f"exact search exceeded budget of {budget} nodes")
