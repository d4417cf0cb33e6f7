"""Matrix-level checks for quadrics fixed by a regular unipotent element.

Conventions.  N is the n x n Jordan block with ones on the superdiagonal,
u = exp(N), and a group element g sends the symmetric matrix A to
g A g^T.  Differentiating u A u^T = A gives the linear condition

    N A + A N^T = 0,

and that is the condition used throughout.  Its solutions are the
alternating Hankel patterns supported on the upper-left antidiagonals,
which is the orientation in which the one-parameter torus
lambda(t) = diag(t^k, ..., t^-k) contracts every fixed quadric onto the
antidiagonal matrix A_(n) as t -> 0.  The transposed condition
N^T A + A N = 0 describes the same space conjugated by the antidiagonal
permutation.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .compositions import OddComposition, as_composition
from .errors import ConsistencyError, DomainError
from .linalg import (
    RationalMatrix,
    block_diag,
    generic_determinant,
    nullspace,
    projectively_equal,
)

__all__ = [
    "jordan_nilpotent",
    "is_nilpotent",
    "unipotent_exp",
    "unipotent_log",
    "act",
    "fixed_condition",
    "is_u_fixed",
    "symmetric_solution_space",
    "fixed_symmetric_space",
    "same_span",
    "antidiagonal_flip",
    "FixedQuadricFamily",
    "pattern_generator",
    "pattern_family",
    "t_fixed_point",
    "NondegeneracyCertificate",
    "nondegeneracy_certificate",
    "nondegenerate_exists",
    "torus_exponents",
    "torus_element",
    "signed_torus_element",
    "Monomial",
    "MonomialMatrix",
    "conjugate_family",
    "parameter_weights",
    "torus_fixes_family",
    "finite_field_torus_converse",
    "torus_limit",
    "is_torus_fixed",
    "t_fixed_point_unique",
    "block_family",
    "block_fixed_point",
    "closure_stratum_ok",
]


def jordan_nilpotent(n: int) -> RationalMatrix:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return RationalMatrix([[int(j == i + 1) for j in range(n)] for i in range(n)])


def is_nilpotent(m: RationalMatrix) -> bool:
    return m.rows == m.cols and (m ** m.rows).is_zero()


def unipotent_exp(N: RationalMatrix) -> RationalMatrix:
    """exp(N) for nilpotent N; the series stops at N^(n-1)/(n-1)!."""
    if not is_nilpotent(N):
        raise DomainError("exp series only terminates for nilpotent matrices")
    n = N.rows
    out = RationalMatrix.identity(n)
    power = RationalMatrix.identity(n)
    for j in range(1, n):
        power = power @ N
        out = out + power.scale(Fraction(1, math.factorial(j)))
    return out


def unipotent_log(u: RationalMatrix) -> RationalMatrix:
    """log(u) = sum_{j>=1} (-1)^(j+1) (u - I)^j / j for unipotent u."""
    n = u.rows
    x = u - RationalMatrix.identity(n)
    if not is_nilpotent(x):
        raise DomainError("u - I is not nilpotent")
    out = RationalMatrix.zeros(n)
    power = RationalMatrix.identity(n)
    for j in range(1, n):
        power = power @ x
        out = out + power.scale(Fraction((-1) ** (j + 1), j))
    return out


def act(g: RationalMatrix, a: RationalMatrix) -> RationalMatrix:
    """The matrix rule for the action on quadrics: A -> g A g^T."""
    return g @ a @ g.T


def fixed_condition(a: RationalMatrix, N: RationalMatrix) -> RationalMatrix:
    return N @ a + a @ N.T


def is_u_fixed(a: RationalMatrix, N: RationalMatrix) -> bool:
    """Whether the quadric of A is fixed by u = exp(N), via N A + A N^T = 0."""
    if a.shape != N.shape or a.rows != a.cols:
        raise DomainError(f"dimension mismatch {a.shape} vs {N.shape}")
    if not a.is_symmetric():
        raise DomainError("quadrics are given by symmetric matrices")
    return fixed_condition(a, N).is_zero()


def _sym_from_vector(n: int, v: Sequence[Fraction]) -> RationalMatrix:
    m = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), x in zip(_upper_index(n), v):
        m[i][j] = m[j][i] = x
    return RationalMatrix(m, symmetric=True)


def _upper_index(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def symmetric_solution_space(
    n: int, operator: Callable[[RationalMatrix], RationalMatrix]
) -> list[RationalMatrix]:
    """Nullspace basis of a linear map restricted to symmetric n x n matrices.

    The map is probed on the n(n+1)/2 elementary symmetric matrices to
    assemble the linear system, which is then solved exactly.
    """
    idx = _upper_index(n)
    columns = []
    for t in range(len(idx)):
        e = [Fraction(0)] * len(idx)
        e[t] = Fraction(1)
        columns.append(operator(_sym_from_vector(n, e)).flatten())
    system = [list(r) for r in zip(*columns)]
    return [_sym_from_vector(n, v) for v in nullspace(system, len(idx))]


def fixed_symmetric_space(n: int) -> list[RationalMatrix]:
    """Basis of {A symmetric : N A + A N^T = 0}."""
    N = jordan_nilpotent(n)
    return symmetric_solution_space(n, lambda a: fixed_condition(a, N))


def same_span(xs: Sequence[RationalMatrix], ys: Sequence[RationalMatrix]) -> bool:
    def rank(ms):
        return RationalMatrix([m.flatten() for m in ms]).rank() if ms else 0

    rx, ry = rank(xs), rank(ys)
    return rx == ry == rank(list(xs) + list(ys))


def antidiagonal_flip(a: RationalMatrix) -> RationalMatrix:
    """w0 A w0 with w0 the antidiagonal permutation matrix."""
    n = a.rows
    return RationalMatrix([[a[n - 1 - i, n - 1 - j] for j in range(n)] for i in range(n)])


def _odd_k(n: int) -> int:
    if n < 1 or n % 2 == 0:
        raise DomainError(f"n must be a positive odd integer, got {n}")
    return (n - 1) // 2


def pattern_generator(n: int, j: int) -> RationalMatrix:
    """Matrix multiplying the parameter a_j (1-based).

    Supported on the antidiagonal through (1, 2j - 1) with signs
    +1, -1, +1, ... reading downward.
    """
    k = _odd_k(n)
    if not 1 <= j <= k + 1:
        raise DomainError(f"parameter index {j} out of range 1..{k + 1}")
    s = 2 * j - 2  # 0-based antidiagonal index i + l
    m = [[0] * n for _ in range(n)]
    for i in range(s + 1):
        m[i][s - i] = (-1) ** i
    return RationalMatrix(m, symmetric=True)


@dataclass
class FixedQuadricFamily:
    """Generators of the u-fixed symmetric matrices for odd n = 2k + 1."""

    n: int
    basis: list[RationalMatrix]
    k: int = field(init=False)

    def __post_init__(self):
        self.k = _odd_k(self.n)
        if len(self.basis) != self.k + 1:
            raise ConsistencyError("a family has k + 1 generators")
        N = jordan_nilpotent(self.n)
        if not all(is_u_fixed(g, N) for g in self.basis):
            raise ConsistencyError("a generator is not u-fixed")
        if RationalMatrix([g.flatten() for g in self.basis]).rank() != len(self.basis):
            raise ConsistencyError("generators are linearly dependent")
        if self.basis[-1] != t_fixed_point(self.n):
            raise ConsistencyError("top generator differs from the antidiagonal fixed point")

    @property
    def projective_dimension(self) -> int:
        return self.k

    def matrix(self, a: Sequence) -> RationalMatrix:
        """sum_j a_j G_j."""
        if len(a) != len(self.basis):
            raise DomainError(f"expected {len(self.basis)} parameters, got {len(a)}")
        out = RationalMatrix.zeros(self.n)
        for aj, g in zip(a, self.basis):
            if aj:
                out = out + g.scale(aj)
        return out


def pattern_family(n: int) -> FixedQuadricFamily:
    k = _odd_k(n)
    return FixedQuadricFamily(n, [pattern_generator(n, j) for j in range(1, k + 2)])


def t_fixed_point(n: int) -> RationalMatrix:
    """Antidiagonal matrix with entries 1, -1, 1, ... from the top-right corner."""
    _odd_k(n)
    return RationalMatrix(
        [[(-1) ** i if i + j == n - 1 else 0 for j in range(n)] for i in range(n)],
        symmetric=True,
    )


@dataclass
class NondegeneracyCertificate:
    n: int
    exists: bool
    method: str  # "witness", "symbolic" or "sampled"
    witness: RationalMatrix | None = None
    determinant: dict | None = None
    samples: int = 0

    @property
    def probabilistic(self) -> bool:
        return self.method == "sampled"


def _random_fraction(rng: random.Random, bound: int = 100) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def nondegeneracy_certificate(
    n: int, symbolic_limit: int = 8, samples: int = 200, seed: int = 0
) -> NondegeneracyCertificate:
    """Decide whether some invertible symmetric matrix is u-fixed.

    Odd n: the antidiagonal fixed point is an invertible witness.  Even n:
    the determinant of a generic element of the solution space is expanded
    symbolically (n <= symbolic_limit) or sampled at random rational points.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    N = jordan_nilpotent(n)
    if n % 2:
        w = t_fixed_point(n)
        if not is_u_fixed(w, N) or w.det() == 0:
            raise ConsistencyError("antidiagonal witness failed")
        return NondegeneracyCertificate(n, True, "witness", witness=w)
    basis = fixed_symmetric_space(n)
    if n <= symbolic_limit:
        det = generic_determinant(basis)
        return NondegeneracyCertificate(n, bool(det), "symbolic", determinant=det)
    rng = random.Random(seed)
    for _ in range(samples):
        a = RationalMatrix.zeros(n)
        for b in basis:
            a = a + b.scale(_random_fraction(rng))
        if a.det() != 0:
            return NondegeneracyCertificate(n, True, "sampled", witness=a, samples=samples)
    return NondegeneracyCertificate(n, False, "sampled", samples=samples)


def nondegenerate_exists(n: int) -> bool:
    return nondegeneracy_certificate(n).exists


def torus_exponents(n: int) -> tuple[int, ...]:
    """Exponents of t along the diagonal of lambda(t): k, k-1, ..., -k."""
    k = _odd_k(n)
    return tuple(k - i for i in range(n))


def torus_element(n: int, t) -> RationalMatrix:
    """lambda(t) evaluated at a nonzero rational t."""
    t = Fraction(t)
    if t == 0:
        raise DomainError("t must be nonzero")
    return RationalMatrix.diagonal([t ** e for e in torus_exponents(n)])


def signed_torus_element(n: int, alpha, mu: int) -> RationalMatrix:
    """diag(mu^i alpha^(k-i)) for i = 0..2k, with mu = +-1."""
    k = _odd_k(n)
    alpha = Fraction(alpha)
    if alpha == 0 or mu not in (1, -1):
        raise DomainError("need alpha != 0 and mu = +-1")
    return RationalMatrix.diagonal([Fraction(mu) ** i * alpha ** (k - i) for i in range(n)])


class Monomial(NamedTuple):
    """coeff . (a_1, ..., a_{k+1}) times t**exp."""

    coeff: tuple[Fraction, ...]
    exp: int

    def is_zero(self) -> bool:
        return not any(self.coeff)

    def value(self, a: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeff, a)), Fraction(0))


class MonomialMatrix:
    """Square matrix whose entries are single monomials in t.

    Coefficients are linear forms in the family parameters.  A zero
    coefficient is stored with exponent 0.
    """

    def __init__(self, entries: Sequence[Sequence[Monomial]]):
        self.entries = [
            [Monomial(m.coeff, 0) if m.is_zero() else m for m in row] for row in entries
        ]
        self.n = len(self.entries)

    def exponents(self) -> set[int]:
        return {m.exp for row in self.entries for m in row if not m.is_zero()}

    def min_exponent(self) -> int:
        return min(self.exponents(), default=0)

    def evaluate(self, a: Sequence, t) -> RationalMatrix:
        t = Fraction(t)
        return RationalMatrix([[m.value(a) * t ** m.exp for m in row] for row in self.entries])

    def coefficient_matrix(self, a: Sequence) -> RationalMatrix:
        return RationalMatrix([[m.value(a) for m in row] for row in self.entries])

    def limit_at_zero(self, a: Sequence) -> RationalMatrix:
        """Entrywise t -> 0 limit at the parameter point ``a``."""
        a = [Fraction(x) for x in a]
        out = []
        for row in self.entries:
            r = []
            for m in row:
                v = m.value(a)
                if v and m.exp < 0:
                    raise ConsistencyError("entry diverges as t -> 0")
                r.append(v if m.exp == 0 else Fraction(0))
            out.append(r)
        return RationalMatrix(out)


def conjugate_family(family: FixedQuadricFamily, exponents: Sequence[int] | None = None) -> MonomialMatrix:
    """lambda(t) A(a) lambda(t)^T as a MonomialMatrix."""
    n = family.n
    ex = torus_exponents(n) if exponents is None else tuple(exponents)
    entries = [
        [Monomial(tuple(g[i, j] for g in family.basis), ex[i] + ex[j]) for j in range(n)]
        for i in range(n)
    ]
    return MonomialMatrix(entries)


def parameter_weights(n: int) -> list[int]:
    """Power of t that rescales each parameter a_j under lambda(t).

    Read off the conjugated generic matrix; raises if some generator picks
    up two different powers (it would then leave the family).
    """
    family = pattern_family(n)
    ex = torus_exponents(n)
    weights = []
    for g in family.basis:
        powers = {ex[i] + ex[j] for i in range(n) for j in range(n) if g[i, j]}
        if len(powers) != 1:
            raise ConsistencyError("generator is not homogeneous for the torus")
        weights.append(powers.pop())
    return weights


def _diag_preserves(d: Sequence, family: FixedQuadricFamily) -> bool:
    dm = RationalMatrix.diagonal(d)
    for g in family.basis:
        img = act(dm, g)
        if img.is_zero() or not projectively_equal(img, g):
            return False
    return True


def finite_field_torus_converse(n: int, p: int) -> bool:
    """Over F_p: the diagonal matrices preserving the family are exactly the
    scalar multiples of diag(mu^i alpha^(k-i)).

    Exhaustive over all (F_p^*)^n.
    """
    k = _odd_k(n)
    family = pattern_family(n)
    gens = [[[int(g[i, j]) % p for j in range(n)] for i in range(n)] for g in family.basis]

    def preserves(d):
        for g in gens:
            ratio = None
            for i in range(n):
                for j in range(n):
                    if g[i][j]:
                        # d_i d_j must be the same for every support entry
                        v = d[i] * d[j] % p
                        if ratio is None:
                            ratio = v
                        elif v != ratio:
                            return False
        return True

    units = range(1, p)
    expected = {
        tuple(c * pow(mu % p, i, p) * pow(alpha, k - i, p) % p for i in range(n))
        for c in units
        for alpha in units
        for mu in (1, -1)
    }
    found = {d for d in itertools.product(units, repeat=n) if preserves(d)}
    return found == expected


def torus_fixes_family(n: int, converse_primes: Sequence[int] = (5, 7), seed: int = 0) -> bool:
    """The torus lambda(t) (and the mu = -1 variant) preserves the family.

    Symbolic part: each generator is homogeneous of even weight under
    lambda, so lambda(t) A(a) lambda(t)^T = A(t^w a).  Also checks the mu = -1
    elements at a few rational alphas, and for n <= 5 the exhaustive
    finite-field converse.
    """
    k = _odd_k(n)
    family = pattern_family(n)
    weights = parameter_weights(n)
    if any(w % 2 for w in weights) or weights != [2 * (k + 1 - j) for j in range(1, k + 2)]:
        return False
    conj = conjugate_family(family)
    for i in range(n):
        for j in range(n):
            m = conj.entries[i][j]
            if not m.is_zero() and any(c and weights[t] != m.exp for t, c in enumerate(m.coeff)):
                return False
    rng = random.Random(seed)
    for _ in range(3):
        alpha = _random_fraction(rng, 9) or Fraction(2)
        for mu in (1, -1):
            if not _diag_preserves(signed_torus_element(n, alpha, mu).flatten()[:: n + 1], family):
                return False
    if n <= 5:
        return all(finite_field_torus_converse(n, p) for p in converse_primes)
    return True


def torus_limit(n: int, a: Sequence) -> RationalMatrix:
    """lim_{t->0} lambda(t) A(a) lambda(t)^T for a point of the family."""
    family = pattern_family(n)
    a = [Fraction(x) for x in a]
    if len(a) != family.k + 1:
        raise DomainError(f"expected {family.k + 1} parameters")
    if a[-1] == 0:
        raise DomainError("top parameter must be nonzero (otherwise the quadric is degenerate)")
    conj = conjugate_family(family)
    if conj.min_exponent() < 0:
        raise ConsistencyError("negative t-exponent in the conjugated family")
    return conj.limit_at_zero(a)


def is_torus_fixed(n: int, a: Sequence) -> bool:
    """Whether the quadric A(a) is projectively fixed by every lambda(t).

    That happens iff all nonzero entries of lambda(t) A lambda(t)^T carry
    the same power of t.
    """
    a = [Fraction(x) for x in a]
    conj = conjugate_family(pattern_family(n))
    powers = {m.exp for row in conj.entries for m in row if m.value(a)}
    return len(powers) <= 1


def t_fixed_point_unique(n: int) -> bool:
    """The parameter weights are pairwise distinct, so with a_{k+1} != 0 a
    torus-fixed point must have a_1 = ... = a_k = 0, i.e. be A_(n)."""
    weights = parameter_weights(n)
    if len(set(weights)) != len(weights):
        return False
    k = _odd_k(n)
    point = [0] * k + [1]
    return is_torus_fixed(n, point) and pattern_family(n).matrix(point) == t_fixed_point(n)


def block_family(gamma: OddComposition | Sequence[int]) -> list[FixedQuadricFamily]:
    """One family per part of gamma."""
    return [pattern_family(g) for g in as_composition(gamma).parts]


def block_fixed_point(gamma: OddComposition | Sequence[int]) -> RationalMatrix:
    """Block-diagonal assembly of the antidiagonal fixed points of each part."""
    return block_diag([t_fixed_point(g) for g in as_composition(gamma).parts])


def closure_stratum_ok(m: int) -> bool:
    """Zeroing the top parameter of the size-m family leaves the last two rows
    and columns empty, and what remains is the size-(m - 2) family with the
    same lower parameters."""
    k = _odd_k(m)
    if m < 3:
        raise DomainError("need m >= 3")
    big = pattern_family(m)
    small = pattern_family(m - 2)
    for j in range(k):
        a = [0] * (k + 1)
        a[j] = 1
        mat = big.matrix(a)
        tail = [mat[i, c] for i in range(m) for c in range(m) if i >= m - 2 or c >= m - 2]
        if any(tail):
            return False
        if mat.submatrix(range(m - 2), range(m - 2)) != small.matrix(a[:k]):
            return False
    return True
