"""The closure order on odd compositions.

gamma covers rho exactly when rho comes from gamma by replacing one part
g > 1 with the three parts (g - 2, 1, 1).  The order itself is the
reflexive-transitive closure of that relation.  ``leq`` decides it in one
pass using the product-of-chains block form of the lower interval, and
``leq_oracle`` decides it by breadth-first search over covers; the two are
kept independent so that one can check the other.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .compositions import (
    OddComposition,
    as_composition,
    enumerate_compositions,
    phi,
    phi_inverse,
    psi,
    psi_inverse,
)
from .errors import ConsistencyError, DomainError

__all__ = [
    "CoverEdge",
    "PosetDiagram",
    "ExpansionVector",
    "covers_of",
    "covered_by",
    "leq",
    "leq_oracle",
    "rank",
    "meet",
    "meet_recursive",
    "maximal_elements",
    "has_upper_cover",
    "is_maximal_pattern",
    "interval_shape",
    "down_set",
    "down_set_oracle",
    "hasse",
]

Comp = OddComposition | Sequence[int]


@dataclass(frozen=True)
class CoverEdge:
    lower: OddComposition
    upper: OddComposition
    position: int  # 0-based index of the part of ``upper`` that was split

    def __post_init__(self):
        g = self.upper.parts[self.position]
        expected = (
            self.upper.parts[: self.position]
            + (g - 2, 1, 1)
            + self.upper.parts[self.position + 1 :]
        )
        if g <= 1 or self.lower.parts != expected:
            raise ConsistencyError(f"{self.lower} is not a cover of {self.upper} at {self.position}")


@dataclass(frozen=True)
class ExpansionVector:
    """How far each part of a reference composition has been split.

    ``m[i]`` copies of (-2, +1, +1) applied to part i; bounded by (g_i - 1)/2.
    """

    reference: OddComposition
    m: tuple[int, ...]

    def __post_init__(self):
        if len(self.m) != len(self.reference):
            raise DomainError("expansion vector length must match the number of parts")
        for g, mi in zip(self.reference.parts, self.m):
            if not 0 <= mi <= (g - 1) // 2:
                raise DomainError(f"expansion {mi} out of range for part {g}")

    def apply(self) -> OddComposition:
        out: list[int] = []
        for g, mi in zip(self.reference.parts, self.m):
            out.append(g - 2 * mi)
            out.extend([1] * (2 * mi))
        return OddComposition(out)


def _split_at(parts: tuple[int, ...], i: int) -> tuple[int, ...]:
    return parts[:i] + (parts[i] - 2, 1, 1) + parts[i + 1 :]


def covers_of(gamma: Comp) -> list[OddComposition]:
    """Elements covered by ``gamma``, one per part larger than 1, sorted."""
    g = as_composition(gamma).parts
    return sorted(OddComposition(_split_at(g, i)) for i, x in enumerate(g) if x > 1)


def covered_by(rho: Comp) -> list[OddComposition]:
    """Elements covering ``rho``: merge each consecutive (x, 1, 1) into x + 2."""
    r = as_composition(rho).parts
    ups = {
        r[:i] + (r[i] + 2,) + r[i + 3 :]
        for i in range(len(r) - 2)
        if r[i + 1] == 1 and r[i + 2] == 1
    }
    return sorted(OddComposition(u) for u in ups)


def _same_n(rho: OddComposition, gamma: OddComposition) -> None:
    if rho.n != gamma.n:
        raise DomainError(f"compositions of different sizes: {rho.n} and {gamma.n}")


def _leq_parts(r: tuple[int, ...], g: tuple[int, ...]) -> bool:
    # Each part of g must appear as (g_i - 2m, 1^{2m}); the first entry of
    # the block pins m, so a single left-to-right scan decides it.
    pos = 0
    for gi in g:
        if pos >= len(r):
            return False
        head = r[pos]
        if head > gi:
            return False
        ones = gi - head
        block = r[pos + 1 : pos + 1 + ones]
        if len(block) != ones or any(x != 1 for x in block):
            return False
        pos += 1 + ones
    return pos == len(r)


def leq(rho: Comp, gamma: Comp) -> bool:
    """rho <= gamma, decided by the block criterion of the interval [0, gamma]."""
    rho, gamma = as_composition(rho), as_composition(gamma)
    _same_n(rho, gamma)
    return _leq_parts(rho.parts, gamma.parts)


@lru_cache(maxsize=4096)
def _bfs_down(g: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    seen = {g}
    queue = deque([g])
    while queue:
        cur = queue.popleft()
        for i, x in enumerate(cur):
            if x > 1:
                nxt = _split_at(cur, i)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return frozenset(seen)


def leq_oracle(rho: Comp, gamma: Comp) -> bool:
    """rho <= gamma, decided by breadth-first reachability through covers."""
    rho, gamma = as_composition(rho), as_composition(gamma)
    _same_n(rho, gamma)
    return rho.parts in _bfs_down(gamma.parts)


def down_set_oracle(gamma: Comp) -> frozenset[OddComposition]:
    return frozenset(OddComposition(t) for t in _bfs_down(as_composition(gamma).parts))


def rank(gamma: Comp) -> int:
    gamma = as_composition(gamma)
    diff = gamma.n - gamma.k
    if diff % 2:
        raise ConsistencyError(f"n - k is odd for {gamma}")
    return diff // 2


def interval_shape(gamma: Comp) -> list[int]:
    """Chain lengths (g_i - 1)/2 whose product is the interval [0, gamma]."""
    return [(g - 1) // 2 for g in as_composition(gamma).parts]


@lru_cache(maxsize=4096)
def _down_tuples(g: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    ref = OddComposition(g)
    ranges = [range((x - 1) // 2 + 1) for x in g]
    return frozenset(ExpansionVector(ref, m).apply().parts for m in itertools.product(*ranges))


def down_set(gamma: Comp) -> frozenset[OddComposition]:
    """Everything below ``gamma``, generated from expansion vectors."""
    return frozenset(OddComposition(t) for t in _down_tuples(as_composition(gamma).parts))


def down_set_size(gamma: Comp) -> int:
    return math.prod(s + 1 for s in interval_shape(gamma))


def _maximal_of(elements) -> list[tuple[int, ...]]:
    elements = list(elements)
    return [
        x for x in elements
        if not any(y != x and _leq_parts(x, y) for y in elements)
    ]


def meet(gamma: Comp, rho: Comp) -> OddComposition:
    """Greatest common lower bound, by intersecting down-sets.

    Raises ConsistencyError if the intersection does not have exactly one
    maximal element.
    """
    gamma, rho = as_composition(gamma), as_composition(rho)
    _same_n(gamma, rho)
    common = _down_tuples(gamma.parts) & _down_tuples(rho.parts)
    tops = _maximal_of(common)
    if len(tops) != 1:
        raise ConsistencyError(
            f"common lower bounds of {gamma} and {rho} have {len(tops)} maximal elements"
        )
    return OddComposition(tops[0])


def _tilde(gamma: OddComposition) -> OddComposition:
    return OddComposition((1,) * gamma.parts[0] + gamma.parts[1:])


def meet_recursive(gamma: Comp, rho: Comp) -> OddComposition:
    """Meet via the inductive split F_n = F_n' + F_n''.

    Both first parts 1: strip the 1 and recurse.  Mixed: every common lower
    bound already lies under gamma-tilde (first part expanded into ones), so
    replace the F'' element by its tilde.  Both first parts > 1: the lower
    bounds starting with 1 are those of the two tildes, the others are
    psi-preimages of lower bounds of the psi-images; the larger of the two
    candidate maxima is the meet.
    """
    gamma, rho = as_composition(gamma), as_composition(rho)
    _same_n(gamma, rho)
    return _meet_rec(gamma, rho)


def _meet_rec(gamma: OddComposition, rho: OddComposition) -> OddComposition:
    if gamma == rho:
        return gamma
    g1, r1 = gamma.parts[0], rho.parts[0]
    if g1 == 1 and r1 == 1:
        return phi_inverse(_meet_rec(phi(gamma), phi(rho)))
    if g1 > 1 and r1 == 1:
        return _meet_rec(_tilde(gamma), rho)
    if g1 == 1 and r1 > 1:
        return _meet_rec(gamma, _tilde(rho))
    low_ones = _meet_rec(_tilde(gamma), _tilde(rho))
    low_big = psi_inverse(_meet_rec(psi(gamma), psi(rho)))
    if not _leq_parts(low_ones.parts, low_big.parts):
        raise ConsistencyError(f"no unique meet for {gamma} and {rho}")
    return low_big


def is_maximal_pattern(gamma: Comp) -> bool:
    """No two adjacent 1's anywhere except possibly in the first two slots."""
    g = as_composition(gamma).parts
    return not any(g[i] == 1 and g[i + 1] == 1 for i in range(1, len(g) - 1))


def has_upper_cover(rho: Comp) -> bool:
    """Whether some (x, 1, 1) run can be merged, without building the covers."""
    r = as_composition(rho).parts
    return any(r[i + 1] == 1 and r[i + 2] == 1 for i in range(len(r) - 2))


def maximal_elements(n: int) -> list[OddComposition]:
    """Elements of F_n with nothing above them, in canonical order."""
    return [g for g in enumerate_compositions(n) if not has_upper_cover(g)]


@dataclass
class PosetDiagram:
    n: int
    nodes: list[OddComposition]
    edges: list[CoverEdge]
    ranks: dict[OddComposition, int] = field(default_factory=dict)

    def index(self) -> dict[OddComposition, int]:
        return {g: i for i, g in enumerate(self.nodes)}

    def edge_indices(self) -> list[tuple[int, int]]:
        idx = self.index()
        return [(idx[e.lower], idx[e.upper]) for e in self.edges]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "nodes": [list(g.parts) for g in self.nodes],
            "edges": [list(p) for p in self.edge_indices()],
            "ranks": [self.ranks[g] for g in self.nodes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def to_dot(self) -> str:
        lines = [f"graph hasse_{self.n} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
        for i, g in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{g.compact()}"];')
        by_rank: dict[int, list[int]] = {}
        for i, g in enumerate(self.nodes):
            by_rank.setdefault(self.ranks[g], []).append(i)
        for r in sorted(by_rank):
            members = " ".join(f"n{i};" for i in by_rank[r])
            lines.append(f"  {{ rank=same; {members} }}")
        for lo, up in self.edge_indices():
            lines.append(f"  n{lo} -- n{up};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = []
        for r in sorted(set(self.ranks.values()), reverse=True):
            row = [g.compact() for g in self.nodes if self.ranks[g] == r]
            lines.append(f"rank {r}: " + " ".join(row))
        lines.append("edges:")
        for e in self.edges:
            lines.append(f"  {e.lower.compact()} < {e.upper.compact()}")
        return "\n".join(lines) + "\n"


def hasse(n: int) -> PosetDiagram:
    """Hasse diagram of F_n; edges come straight from ``covers_of``."""
    nodes = enumerate_compositions(n)
    edges = []
    for upper in nodes:
        u = upper.parts
        for i, x in enumerate(u):
            if x > 1:
                edges.append(CoverEdge(OddComposition(_split_at(u, i)), upper, i))
    idx = {g: i for i, g in enumerate(nodes)}
    edges.sort(key=lambda e: (idx[e.lower], idx[e.upper]))
    return PosetDiagram(n, nodes, edges, {g: rank(g) for g in nodes})
