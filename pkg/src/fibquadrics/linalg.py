"""Dense matrices over Q with exact Fraction entries.

Only what the quadric checks need: arithmetic, reduced row echelon form,
nullspace, determinant, and a determinant over a small multivariate
polynomial ring used to certify that a generic matrix is singular.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError

__all__ = [
    "RationalMatrix",
    "rref",
    "nullspace",
    "block_diag",
    "generic_determinant",
    "projectively_equal",
    "projective_normal_form",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise DomainError("floats are not exact; pass int, Fraction or a 'p/q' string")
    return Fraction(x)


class RationalMatrix:
    """Immutable rows x cols matrix of Fractions.

    ``symmetric=True`` asserts the matrix equals its transpose at
    construction time.
    """

    __slots__ = ("rows", "cols", "_data", "symmetric")

    def __init__(self, data: Iterable[Iterable], symmetric: bool = False):
        rows = [tuple(_frac(x) for x in row) for row in data]
        if not rows or not rows[0]:
            raise DomainError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DomainError("ragged matrix")
        self._data = tuple(rows)
        self.rows = len(rows)
        self.cols = width
        self.symmetric = bool(symmetric)
        if symmetric and not self.is_symmetric():
            raise DomainError("matrix flagged symmetric is not symmetric")

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "RationalMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._data)
        return f"RationalMatrix([{body}])"

    def _check_same_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise DomainError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)]
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)]
        )

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix([[c * a for a in r] for r in self._data])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DomainError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._data))
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols] for r in self._data]
        )

    def __pow__(self, k: int) -> "RationalMatrix":
        if self.rows != self.cols or k < 0:
            raise DomainError("matrix power needs a square matrix and k >= 0")
        out = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self._data)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._data[i][j] == self._data[j][i] for i in range(self.rows) for j in range(i)
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[self._data[i][j] for j in cols] for i in rows])

    def rank(self) -> int:
        return len(rref(self.tolist())[1])

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DomainError("determinant of a non-square matrix")
        m = self.tolist()
        n = self.rows
        sign = 1
        result = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                sign = -sign
            p = m[c][c]
            result *= p
            for r in range(c + 1, n):
                f = m[r][c] / p
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return sign * result

    def flatten(self) -> list[Fraction]:
        return [x for r in self._data for x in r]

    def to_json(self) -> str:
        return json.dumps([[f"{x.numerator}/{x.denominator}" for x in r] for r in self._data])

    @classmethod
    def from_json(cls, text: str) -> "RationalMatrix":
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise DomainError("matrix JSON must be an array of arrays")
        for r in data:
            for x in r:
                if not isinstance(x, str):
                    raise DomainError(f"matrix entries must be 'p/q' strings, got {x!r}")
        return cls(data)


def rref(m: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (works on a copy) and pivot columns."""
    m = [list(map(_frac, r)) for r in m]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def nullspace(m: list[list[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : m x = 0}, one vector per free column."""
    if not m:
        if ncols is None:
            raise DomainError("empty system needs an explicit column count")
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(m)
    ncols = len(red[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def block_diag(blocks: Sequence[RationalMatrix]) -> RationalMatrix:
    n = sum(b.rows for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        if b.rows != b.cols:
            raise DomainError("block_diag needs square blocks")
        for i in range(b.rows):
            for j in range(b.cols):
                out[off + i][off + j] = b[i, j]
        off += b.rows
    return RationalMatrix(out)


def projective_normal_form(m: RationalMatrix) -> RationalMatrix:
    """Scale so the first nonzero entry in row-major order is 1."""
    lead = next((x for x in m.flatten() if x != 0), None)
    if lead is None:
        raise DomainError("the zero matrix has no projective class")
    return m.scale(1 / lead)


def projectively_equal(a: RationalMatrix, b: RationalMatrix) -> bool:
    return projective_normal_form(a) == projective_normal_form(b)


# Sparse multivariate polynomials: dict mapping exponent tuples to Fractions.
Poly = dict


def _padd(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def generic_determinant(basis: Sequence[RationalMatrix]) -> Poly:
    """det(sum_j c_j B_j) as a polynomial in c_1..c_m.

    Laplace expansion along rows, memoised on the set of used columns, so
    the cost is about n * 2^n polynomial products.  Zero entries are skipped.
    """
    if not basis:
        raise DomainError("need at least one basis matrix")
    n = basis[0].rows
    m = len(basis)
    entries: list[list[Poly]] = []
    for i in range(n):
        row = []
        for j in range(n):
            p: Poly = {}
            for t, b in enumerate(basis):
                if b[i, j]:
                    e = tuple(int(s == t) for s in range(m))
                    p[e] = b[i, j]
            row.append(p)
        entries.append(row)

    memo: dict[int, Poly] = {}

    def minor(used: int) -> Poly:
        # Determinant of rows popcount(used).. against the unused columns.
        i = bin(used).count("1")
        if i == n:
            return {(0,) * m: Fraction(1)}
        if used in memo:
            return memo[used]
        total: Poly = {}
        free_cols = [j for j in range(n) if not used >> j & 1]
        for pos, j in enumerate(free_cols):
            a = entries[i][j]
            if not a:
                continue
            sub = minor(used | 1 << j)
            if sub:
                total = _padd(total, _pmul(a, sub), -1 if pos % 2 else 1)
        memo[used] = total
        return total

    return minor(0)
