"""Compositions of n with all parts odd.

The set F_n of odd-part compositions splits as F_n' (first part 1) and
F_n'' (first part > 1); dropping the leading 1 and shrinking the first
part by 2 give bijections onto F_{n-1} and F_{n-2}.  Everything else in
the package is indexed by these compositions.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError

__all__ = [
    "OddComposition",
    "Kind",
    "enumerate_compositions",
    "classify",
    "phi",
    "phi_inverse",
    "psi",
    "psi_inverse",
    "count",
    "fibonacci",
    "parse_composition",
]


@dataclass(frozen=True, order=True)
class OddComposition:
    """An ordered tuple of odd positive parts.

    Ordering is lexicographic on ``parts``, which is also the canonical
    enumeration order.
    """

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(parts)
        for p in parts:
            if not isinstance(p, int) or isinstance(p, bool):
                raise DomainError(f"part {p!r} is not an integer")
            if p < 1 or p % 2 == 0:
                raise DomainError(f"part {p} is not a positive odd integer")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def _trusted(cls, parts: tuple[int, ...]) -> "OddComposition":
        # Skip validation for tuples the enumerator produced itself.
        obj = object.__new__(cls)
        object.__setattr__(obj, "parts", parts)
        return obj

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        """Number of parts."""
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __repr__(self) -> str:
        return f"OddComposition({self.parts!r})"

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def compact(self) -> str:
        """Digit-string label such as ``"3111"``; comma-joined if a part exceeds 9."""
        if all(p <= 9 for p in self.parts):
            return "".join(map(str, self.parts))
        return str(self)

    def to_json(self) -> str:
        return json.dumps(list(self.parts))

    @classmethod
    def from_json(cls, text: str) -> "OddComposition":
        data = json.loads(text)
        if not isinstance(data, list):
            raise DomainError("composition JSON must be an array of integers")
        return cls(data)


def parse_composition(text: str) -> OddComposition:
    """Parse a comma-separated literal like ``"5,1"``."""
    pieces = [s.strip() for s in text.split(",")]
    if not text.strip() or any(not s for s in pieces):
        raise DomainError(f"malformed composition literal {text!r}")
    try:
        parts = [int(s) for s in pieces]
    except ValueError:
        raise DomainError(f"malformed composition literal {text!r}") from None
    return OddComposition(parts)


class Kind(enum.Enum):
    FIRST_ONE = "FIRST_ONE"
    FIRST_GT_ONE = "FIRST_GT_ONE"


def _check_n(n: int, allow_empty: bool = False) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"n must be an integer, got {n!r}")
    if n < 0 or (n == 0 and not allow_empty):
        raise DomainError(f"n must be positive, got {n}")


@lru_cache(maxsize=None)
def _odd_tuples(n: int) -> tuple[tuple[int, ...], ...]:
    # Lexicographic: smaller first part first, then recurse on the tail.
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1, 2):
        for tail in _odd_tuples(n - first):
            out.append((first,) + tail)
    return tuple(out)


def enumerate_compositions(n: int, *, allow_empty: bool = False) -> list[OddComposition]:
    """All of F_n in lexicographic order.

    ``n == 0`` is rejected unless ``allow_empty`` is set, in which case the
    single empty composition is returned.
    """
    _check_n(n, allow_empty)
    return [OddComposition._trusted(t) for t in _odd_tuples(n)]


def classify(gamma: OddComposition) -> Kind:
    return Kind.FIRST_ONE if gamma.parts[0] == 1 else Kind.FIRST_GT_ONE


def phi(gamma: OddComposition) -> OddComposition:
    """Drop the leading part 1: F_n' -> F_{n-1}."""
    if not gamma.parts or gamma.parts[0] != 1:
        raise DomainError(f"phi needs a leading part 1, got {gamma}")
    if len(gamma.parts) == 1:
        raise DomainError("phi((1,)) would be the empty composition of 0")
    return OddComposition(gamma.parts[1:])


def phi_inverse(gamma: OddComposition) -> OddComposition:
    return OddComposition((1,) + gamma.parts)


def psi(gamma: OddComposition) -> OddComposition:
    """Lower the first part by 2: F_n'' -> F_{n-2}."""
    if not gamma.parts or gamma.parts[0] == 1:
        raise DomainError(f"psi needs a first part > 1, got {gamma}")
    return OddComposition((gamma.parts[0] - 2,) + gamma.parts[1:])


def psi_inverse(gamma: OddComposition) -> OddComposition:
    return OddComposition((gamma.parts[0] + 2,) + gamma.parts[1:])


def count(n: int) -> int:
    """|F_n| via count(n) = count(n-1) + count(n-2), count(1) = count(2) = 1."""
    _check_n(n)
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def fibonacci(n: int) -> int:
    """F(n) with F(0) = 0, F(1) = F(2) = 1."""
    if n < 0:
        raise DomainError("fibonacci index must be non-negative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def as_composition(value: OddComposition | Sequence[int]) -> OddComposition:
    if isinstance(value, OddComposition):
        return value
    return OddComposition(value)
