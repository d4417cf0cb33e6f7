"""Exact combinatorics and linear algebra of the unipotent fixed locus Y_n
of complete quadrics: odd-part compositions, their closure order, the
q-Fibonacci Poincare polynomial, component counts, and matrix-level
checks of the fixed quadrics and torus limits."""

__version__ = "0.1.0"

from .compositions import OddComposition, count, enumerate_compositions  # noqa: E402
from .errors import BudgetError, ConsistencyError, DomainError  # noqa: E402

__all__ = [
    "OddComposition",
    "enumerate_compositions",
    "count",
    "DomainError",
    "ConsistencyError",
    "BudgetError",
]
