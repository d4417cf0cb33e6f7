"""Cell dimensions, Poincare polynomials and component counts.

The Poincare polynomial is produced three ways (summing over cells, the
binomial closed form, and the two-term recurrence) and the number of
irreducible components four ways (maximal elements, the three-term
recurrence, the series (1 - x^3)/(1 - x - x^3), and {1,2}-compositions
of n - 2 without adjacent 2's).  Agreement between routes is what the test suite
and the ``verify`` command check.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .compositions import OddComposition, as_composition, count, enumerate_compositions
from .errors import ConsistencyError, DomainError
from .poset import maximal_elements

__all__ = [
    "IntPolynomial",
    "SequenceTable",
    "cell_dimension",
    "poincare_from_cells",
    "poincare_closed_form",
    "poincare_by_recurrence",
    "check_recurrence",
    "is_unimodal",
    "component_count_direct",
    "component_count_recurrence",
    "component_gf_coeffs",
    "component_series_coeffs",
    "series_divide",
    "alt_component_count",
    "component_dimensions",
]


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial in q with non-negative integer coefficients, low degree first."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        if any(x < 0 for x in c):
            raise DomainError("cell-counting polynomials have non-negative coefficients")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        m = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (m - len(self.coeffs))
        b = other.coeffs + (0,) * (m - len(other.coeffs))
        return IntPolynomial([x + y for x, y in zip(a, b)])

    def shift(self, power: int = 1) -> "IntPolynomial":
        """Multiply by q**power."""
        if not self.coeffs:
            return self
        return IntPolynomial((0,) * power + self.coeffs)

    def __call__(self, q: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            total = total * q + c
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = "q" if i == 1 else f"q^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    def csv_field(self) -> str:
        return ",".join(map(str, self.coeffs))

    def to_json(self, n: int) -> str:
        return json.dumps({"n": n, "coeffs": list(self.coeffs)})


ONE = IntPolynomial([1])


@dataclass
class SequenceTable:
    """Integer sequence on a contiguous index range."""

    name: str
    values: dict[int, int]

    def __post_init__(self):
        if self.values:
            keys = sorted(self.values)
            if keys != list(range(keys[0], keys[-1] + 1)):
                raise DomainError(f"{self.name}: indices are not contiguous")

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.values[k] for k in sorted(self.values))


def cell_dimension(gamma: OddComposition | Sequence[int]) -> int:
    gamma = as_composition(gamma)
    dim = sum((g - 1) // 2 for g in gamma.parts)
    if 2 * dim != gamma.n - gamma.k:
        raise ConsistencyError(f"cell dimension mismatch for {gamma}")
    return dim


def poincare_from_cells(n: int) -> IntPolynomial:
    """Sum of q^dim over all cells of F_n."""
    # a cell with k parts has dimension (n - k)/2; cell_dimension checks this
    dims = Counter((n - len(g.parts)) // 2 for g in enumerate_compositions(n))
    top = max(dims)
    return IntPolynomial([dims.get(i, 0) for i in range(top + 1)])


def poincare_closed_form(n: int) -> IntPolynomial:
    """sum_i C(n - 1 - i, i) q^i."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return IntPolynomial([math.comb(n - 1 - i, i) for i in range(n) if n - 1 - i >= i])


def poincare_by_recurrence(n: int) -> IntPolynomial:
    """P_n = P_{n-1} + q P_{n-2} from P_1 = P_2 = 1."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    prev, cur = ONE, ONE
    for _ in range(n - 2):
        prev, cur = cur, cur + prev.shift()
    return cur


def check_recurrence(n: int) -> bool:
    if n < 3:
        raise DomainError("the recurrence needs n >= 3")
    return poincare_from_cells(n) == poincare_from_cells(n - 1) + poincare_from_cells(n - 2).shift()


def is_unimodal(p: IntPolynomial | Sequence[int]) -> bool:
    c = p.coeffs if isinstance(p, IntPolynomial) else tuple(p)
    i = 0
    while i + 1 < len(c) and c[i] <= c[i + 1]:
        i += 1
    while i + 1 < len(c) and c[i] >= c[i + 1]:
        i += 1
    return i + 1 >= len(c)


def component_count_direct(n: int) -> int:
    return len(maximal_elements(n))


def component_count_recurrence(n: int) -> int:
    """a_n = a_{n-1} + a_{n-3} with a_1 = a_2 = a_3 = 1."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    a = [None, 1, 1, 1]
    for m in range(4, n + 1):
        a.append(a[m - 1] + a[m - 3])
    return a[n]


def series_divide(num: Sequence[int], den: Sequence[int], terms: int) -> list[int]:
    """First ``terms`` coefficients of num/den as a power series.

    Requires den[0] = +-1 so the quotient stays integral.
    """
    if not den or den[0] not in (1, -1):
        raise DomainError("series division needs a unit constant term")
    out: list[int] = []
    for m in range(terms):
        acc = num[m] if m < len(num) else 0
        for j in range(1, min(m, len(den) - 1) + 1):
            acc -= den[j] * out[m - j]
        out.append(acc * den[0])
    return out


def component_gf_coeffs(N: int) -> SequenceTable:
    """Coefficients of x^0..x^N in 1/(1 - x - x^3).

    Note the index: this series is 1, 1, 1, 2, 3, 4, 6, ..., so its x^n
    coefficient is a_{n+1}, not a_n.  See ``component_series_coeffs`` for
    the series whose x^n coefficient is a_n.
    """
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    coeffs = series_divide([1], [1, -1, 0, -1], N + 1)
    return SequenceTable("gf_1/(1-x-x^3)", dict(enumerate(coeffs)))


def component_series_coeffs(N: int) -> SequenceTable:
    """a_0..a_N from (1 - x^3)/(1 - x - x^3), with a_0 = 1.

    This is the generating function of the component counts: it satisfies
    a_n = a_{n-1} + a_{n-3} for n >= 4 and starts 1, 1, 1, 1.
    """
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    coeffs = series_divide([1, 0, 0, -1], [1, -1, 0, -1], N + 1)
    return SequenceTable("a_gf", dict(enumerate(coeffs)))


def _one_two_compositions(total: int, after_two: bool = False) -> Iterator[tuple[int, ...]]:
    # {1,2}-compositions of total with no two adjacent 2's, pruned as they grow.
    if total == 0:
        yield ()
        return
    for tail in _one_two_compositions(total - 1):
        yield (1,) + tail
    if total >= 2 and not after_two:
        for tail in _one_two_compositions(total - 2, after_two=True):
            yield (2,) + tail


def alt_component_count(n: int) -> int:
    """Compositions of n - 2 into 1's and 2's with no two adjacent 2's."""
    if n < 3:
        raise DomainError("the {1,2}-composition count is defined for n >= 3")
    return sum(1 for _ in _one_two_compositions(n - 2))


def component_dimensions(n: int) -> list[int]:
    """Dimensions of the irreducible components, largest first."""
    return sorted((cell_dimension(g) for g in maximal_elements(n)), reverse=True)


def fib_check(n: int) -> bool:
    """P_n(1) equals |F_n|."""
    return poincare_from_cells(n)(1) == count(n)
