"""Exhaustive search for N-invariant subspaces over a small prime field.

Each d-dimensional subspace of F_p^n is visited exactly once through its
reduced row echelon basis: choose pivot columns, then fill the non-pivot
entries to the right of each pivot freely.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .errors import BudgetError, DomainError

__all__ = [
    "DEFAULT_SUBSPACE_BUDGET",
    "gaussian_binomial",
    "all_compositions",
    "echelon_subspaces",
    "invariant_subspaces",
    "invariant_flag_unique",
]

DEFAULT_SUBSPACE_BUDGET = 10**6

Basis = tuple[tuple[int, ...], ...]


def gaussian_binomial(n: int, d: int, p: int) -> int:
    """Number of d-dimensional subspaces of F_p^n."""
    if not 0 <= d <= n:
        return 0
    num = den = 1
    for i in range(d):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def all_compositions(n: int) -> list[tuple[int, ...]]:
    """Every composition of n (any parts), via subsets of cut points."""
    if n < 1:
        raise DomainError("n must be positive")
    out = []
    for cuts in itertools.product((0, 1), repeat=n - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        out.append(tuple(parts))
    return sorted(out)


def echelon_subspaces(n: int, d: int, p: int) -> Iterator[Basis]:
    """Yield the RREF basis of every d-dimensional subspace of F_p^n."""
    for pivots in itertools.combinations(range(n), d):
        slots = [
            (r, c)
            for r, pc in enumerate(pivots)
            for c in range(pc + 1, n)
            if c not in pivots
        ]
        for values in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(d)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(slots, values):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


def _in_span(v: Sequence[int], basis: Basis, p: int) -> bool:
    # basis is in RREF, so eliminate on each pivot column in turn.
    w = list(v)
    for row in basis:
        pc = next(i for i, x in enumerate(row) if x)
        if w[pc]:
            f = w[pc]
            w = [(a - f * b) % p for a, b in zip(w, row)]
    return not any(x % p for x in w)


def _shift_down(v: Sequence[int]) -> tuple[int, ...]:
    # N e_1 = 0, N e_j = e_{j-1}: the superdiagonal Jordan block acting on columns.
    return tuple(v[1:]) + (0,)


def invariant_subspaces(
    n: int, d: int, p: int, budget: int = DEFAULT_SUBSPACE_BUDGET
) -> list[Basis]:
    """All d-dimensional N-invariant subspaces of F_p^n, as RREF bases."""
    if p not in (2, 3, 5, 7):
        raise DomainError(f"unsupported prime {p}")
    total = gaussian_binomial(n, d, p)
    if total > budget:
        raise BudgetError(f"{total} subspaces of dimension {d} in F_{p}^{n} exceed budget {budget}")
    return [
        b for b in echelon_subspaces(n, d, p)
        if all(_in_span(_shift_down(row), b, p) for row in b)
    ]


def standard_subspace(n: int, d: int) -> Basis:
    return tuple(tuple(int(i == j) for i in range(n)) for j in range(d))


def invariant_flag_unique(
    n: int, gamma: Sequence[int], p: int, budget: int = DEFAULT_SUBSPACE_BUDGET
) -> bool:
    """True iff each partial-sum dimension has exactly one invariant subspace,
    namely span(e_1, ..., e_d)."""
    if sum(gamma) != n or any(g < 1 for g in gamma):
        raise DomainError(f"{tuple(gamma)} is not a composition of {n}")
    total = sum(gaussian_binomial(n, d, p) for d in itertools.accumulate(gamma))
    if total > budget:
        raise BudgetError(f"{total} subspaces exceed budget {budget}")
    for d in itertools.accumulate(gamma):
        found = invariant_subspaces(n, d, p, budget)
        if found != [standard_subspace(n, d)]:
            return False
    return True
