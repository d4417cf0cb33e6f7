"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ConsistencyError(RuntimeError):
    """A computed object contradicts a structural theorem.

    Raised instead of silently picking an answer; seeing one means a bug.
    """


class BudgetError(DomainError):
    """The requested computation exceeds a configured enumeration budget."""
