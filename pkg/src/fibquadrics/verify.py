"""Run every cross-check and report one TAP line per statement checked."""

from __future__ import annotations

import itertools
import os
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from . import compositions as oc
from . import flags, poset, quadrics, topology
from .errors import BudgetError, ConsistencyError, DomainError
from .linalg import RationalMatrix, projectively_equal

__all__ = ["Budgets", "CheckResult", "verify_all", "format_report", "Y6_EDGES"]

BUDGET_ENV = "FIBQUADRICS_BUDGETS"

# Cover edges of the Y_6 Hasse diagram, as (lower, upper) compact labels.
Y6_EDGES = frozenset({
    ("111111", "3111"), ("111111", "1131"), ("111111", "1311"), ("111111", "1113"),
    ("3111", "51"), ("3111", "33"), ("1113", "33"), ("1311", "15"),
})


@dataclass
class Budgets:
    """Largest n used by each group of checks."""

    poset: int = 12
    poly: int = 25
    quadric: int = 9
    flag: int = 4
    subspaces: int = flags.DEFAULT_SUBSPACE_BUDGET

    @classmethod
    def from_env(cls, environ=None) -> "Budgets":
        """Read overrides such as ``poset=10,quadric=7`` from FIBQUADRICS_BUDGETS."""
        environ = os.environ if environ is None else environ
        b = cls()
        spec = environ.get(BUDGET_ENV, "").strip()
        if not spec:
            return b
        for item in spec.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            if not hasattr(b, key) or not value.strip().isdigit():
                raise DomainError(f"bad budget entry {item!r} in {BUDGET_ENV}")
            setattr(b, key, int(value))
        return b


@dataclass
class CheckResult:
    name: str
    status: str  # PASS, FAIL or SKIP
    seconds: float = 0.0
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "FAIL"


@lru_cache(maxsize=None)
def _meet(a: tuple, b: tuple) -> tuple:
    return poset.meet(a, b).parts


def _check_cardinality(hi):
    for n in range(1, hi + 1):
        if len(oc.enumerate_compositions(n)) != oc.fibonacci(n) or oc.count(n) != oc.fibonacci(n):
            return False, f"n={n}"
    return True, ""


def _check_bijections(hi):
    for n in range(2, hi + 1):
        comps = oc.enumerate_compositions(n)
        ones = [g for g in comps if oc.classify(g) is oc.Kind.FIRST_ONE]
        if sorted(map(oc.phi, ones)) != oc.enumerate_compositions(n - 1):
            return False, f"phi at n={n}"
        if n >= 3:
            big = [g for g in comps if oc.classify(g) is oc.Kind.FIRST_GT_ONE]
            if sorted(map(oc.psi, big)) != oc.enumerate_compositions(n - 2):
                return False, f"psi at n={n}"
    return True, ""


def _check_poincare(hi):
    for n in range(1, hi + 1):
        p = topology.poincare_from_cells(n)
        if p != topology.poincare_closed_form(n) or p != topology.poincare_by_recurrence(n):
            return False, f"n={n}"
        if n >= 3 and not topology.check_recurrence(n):
            return False, f"recurrence n={n}"
        if p(1) != oc.count(n):
            return False, f"P(1) at n={n}"
    return True, ""


def _check_unimodal(hi):
    bad = [n for n in range(1, hi + 1) if not topology.is_unimodal(topology.poincare_from_cells(n))]
    return not bad, f"n={bad}" if bad else ""


def _check_graded(hi):
    for n in range(1, hi + 1):
        comps = oc.enumerate_compositions(n)
        for g in comps:
            for r in poset.covers_of(g):
                if poset.rank(g) != poset.rank(r) + 1:
                    return False, f"cover {r} < {g}"
        for r, g in itertools.product(comps, repeat=2):
            if r != g and poset.leq(r, g) and not poset.rank(r) < poset.rank(g):
                return False, f"{r} < {g}"
    return True, ""


def _check_order_oracle(hi):
    for n in range(1, hi + 1):
        comps = oc.enumerate_compositions(n)
        for r, g in itertools.product(comps, repeat=2):
            if poset.leq(r, g) != poset.leq_oracle(r, g):
                return False, f"{r} vs {g}"
    return True, ""


def _check_covering_sequence(hi):
    for n in range(1, hi + 1):
        comps = oc.enumerate_compositions(n)
        for g in comps:
            if g[0] == 1:
                continue
            for t in poset.down_set(g):
                if t[0] == 1 and any(x != 1 for x in t.parts[: g[0]]):
                    return False, f"{t} <= {g}"
    return True, ""


def _check_semilattice(hi):
    for n in range(1, hi + 1):
        comps = [g.parts for g in oc.enumerate_compositions(n)]
        for a, b in itertools.combinations_with_replacement(comps, 2):
            try:
                m = _meet(a, b)
            except ConsistencyError as exc:
                return False, str(exc)
            common = poset._down_tuples(a) & poset._down_tuples(b)
            if not all(poset._leq_parts(c, m) for c in common):
                return False, f"meet of {a}, {b}"
    return True, ""


def _check_meet_laws(hi):
    for n in range(1, hi + 1):
        comps = [g.parts for g in oc.enumerate_compositions(n)]
        for a in comps:
            if _meet(a, a) != a:
                return False, f"idempotence {a}"
        for a, b in itertools.product(comps, repeat=2):
            if _meet(a, b) != _meet(b, a):
                return False, f"commutativity {a}, {b}"
        for a, b, c in itertools.product(comps, repeat=3):
            if _meet(_meet(a, b), c) != _meet(a, _meet(b, c)):
                return False, f"associativity {a}, {b}, {c}"
    return True, ""


def _check_meet_recursive(hi):
    for n in range(1, hi + 1):
        comps = oc.enumerate_compositions(n)
        for a, b in itertools.product(comps, repeat=2):
            if poset.meet_recursive(a, b).parts != _meet(a.parts, b.parts):
                return False, f"{a}, {b}"
    return True, ""


def _check_intervals(hi):
    for n in range(1, hi + 1):
        for g in oc.enumerate_compositions(n):
            d = poset.down_set(g)
            if d != poset.down_set_oracle(g) or len(d) != poset.down_set_size(g):
                return False, f"{g}"
    return True, ""


def _check_maximal_pattern(hi):
    for n in range(1, hi + 1):
        direct = poset.maximal_elements(n)
        pattern = [g for g in oc.enumerate_compositions(n) if poset.is_maximal_pattern(g)]
        if direct != pattern:
            return False, f"n={n}"
    return True, ""


def _check_components(hi):
    if hi < 3:
        return True, ""
    gf = topology.component_series_coeffs(hi)
    for n in range(3, hi + 1):
        vals = {
            topology.component_count_direct(n),
            topology.component_count_recurrence(n),
            gf[n],
            topology.alt_component_count(n),
        }
        if len(vals) != 1:
            return False, f"n={n}: {sorted(vals)}"
    return True, ""


def _check_gf_shift(hi):
    raw = topology.component_gf_coeffs(hi)
    bad = [n for n in range(1, hi) if raw[n - 1] != topology.component_count_recurrence(n)]
    return not bad, f"n={bad}" if bad else ""


def _check_equidimensional(hi):
    bad = [n for n in range(5, hi + 1) if len(set(topology.component_dimensions(n))) < 2]
    return not bad, f"n={bad}" if bad else ""


def _check_y6_edges(_hi):
    d = poset.hasse(6)
    edges = {(e.lower.compact(), e.upper.compact()) for e in d.edges}
    ok = len(d.nodes) == 8 and len(d.edges) == 8 and edges == Y6_EDGES
    return ok, "" if ok else f"{sorted(edges)}"


def _check_y6_components(_hi):
    dims = topology.component_dimensions(6)
    return dims == [2, 2, 2, 1] and topology.component_count_direct(6) == 4, f"{dims}"


def _random_symmetric(rng, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return RationalMatrix(m)


def _check_fixed_criterion(hi, seed=0):
    rng = random.Random(seed)
    for n in range(1, hi + 1):
        N = quadrics.jordan_nilpotent(n)
        u = quadrics.unipotent_exp(N)
        basis = quadrics.fixed_symmetric_space(n)
        for a in basis:
            if not quadrics.is_u_fixed(a, N) or quadrics.act(u, a) != a:
                return False, f"basis element at n={n}"
        for s in range(20):
            if s % 2:
                a = _random_symmetric(rng, n)
            else:
                a = RationalMatrix.zeros(n)
                for b in basis:
                    a = a + b.scale(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
            if a.is_zero():
                continue
            lie = quadrics.is_u_fixed(a, N)
            group = projectively_equal(quadrics.act(u, a), a)
            if lie != group:
                return False, f"criteria disagree at n={n}"
    return True, ""


def _check_fixed_space(hi):
    for n in range(1, hi + 1, 2):
        basis = quadrics.fixed_symmetric_space(n)
        if len(basis) != (n + 1) // 2:
            return False, f"dim at n={n}"
        if not quadrics.same_span(basis, quadrics.pattern_family(n).basis):
            return False, f"span at n={n}"
    return True, ""


def _check_even_degenerate(hi):
    evens = range(2, min(hi, 8) + 1, 2)
    for n in evens:
        cert = quadrics.nondegeneracy_certificate(n)
        if cert.exists or cert.method != "symbolic":
            return False, f"n={n}"
    for n in range(1, hi + 1, 2):
        if not quadrics.nondegenerate_exists(n):
            return False, f"odd n={n}"
    return True, ""


def _check_torus_family(hi):
    bad = [n for n in range(1, hi + 1, 2) if not quadrics.torus_fixes_family(n)]
    return not bad, f"n={bad}" if bad else ""


def _check_torus_limit(hi, seed=0):
    rng = random.Random(seed)
    for n in range(1, hi + 1, 2):
        k = (n - 1) // 2
        fixed = quadrics.t_fixed_point(n)
        N = quadrics.jordan_nilpotent(n)
        for _ in range(20):
            a = [Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(k + 1)]
            while a[-1] == 0:
                a[-1] = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
            lim = quadrics.torus_limit(n, a)
            if lim != fixed.scale(a[-1]) or not quadrics.is_u_fixed(lim, N) or lim.det() == 0:
                return False, f"n={n}, a={a}"
    return True, ""


def _check_torus_fixed_point(hi):
    bad = [n for n in range(1, hi + 1, 2) if not quadrics.t_fixed_point_unique(n)]
    return not bad, f"n={bad}" if bad else ""


def _check_flags(hi, budget):
    for n in range(1, hi + 1):
        for gamma in flags.all_compositions(n):
            for p in (2, 3):
                if not flags.invariant_flag_unique(n, gamma, p, budget):
                    return False, f"n={n}, type={gamma}, p={p}"
    return True, ""


def _check_cells(hi):
    for n in range(1, hi + 1):
        for g in oc.enumerate_compositions(n):
            fams = quadrics.block_family(g)
            if sum(f.projective_dimension for f in fams) != topology.cell_dimension(g):
                return False, f"{g}"
            a_g = quadrics.block_fixed_point(g)
            if not a_g.is_symmetric() or a_g.det() == 0:
                return False, f"fixed point of {g}"
    return True, ""


def _check_closure(hi):
    bad = [m for m in range(3, hi + 1, 2) if not quadrics.closure_stratum_ok(m)]
    return not bad, f"m={bad}" if bad else ""


def _check_exp_log(hi):
    for n in range(1, min(hi, 8) + 1):
        N = quadrics.jordan_nilpotent(n)
        if quadrics.unipotent_log(quadrics.unipotent_exp(N)) != N:
            return False, f"n={n}"
    return True, ""


@dataclass
class _Check:
    name: str
    group: str  # which budget caps n
    run: Callable
    needs: int = 1  # smallest n_max for which the check is meaningful
    cap: int | None = None
    ranged: bool = True


def _checks(budgets: Budgets) -> list[_Check]:
    return [
        _Check("Fibonacci cardinality |F_n| = F(n)", "poly", _check_cardinality),
        _Check("phi and psi are bijections onto F_{n-1}, F_{n-2}", "poly", _check_bijections, cap=15),
        _Check("Poincare polynomial: cells = closed form = recurrence", "poly", _check_poincare),
        _Check("Poincare polynomial is unimodal", "poly", _check_unimodal),
        _Check("Graded poset with rank (n - k)/2", "poset", _check_graded, cap=10),
        _Check("Order criterion equals cover reachability", "poset", _check_order_oracle),
        _Check("Covering-sequence lemma", "poset", _check_covering_sequence),
        _Check("Meet semilattice: unique greatest common lower bound", "poset", _check_semilattice),
        _Check("Meet is idempotent, commutative, associative", "poset", _check_meet_laws, cap=9),
        _Check("Inductive meet agrees with down-set meet", "poset", _check_meet_recursive),
        _Check("Interval [0, gamma] is a product of chains", "poset", _check_intervals),
        _Check("Maximal elements: no adjacent 1's past the start", "poly", _check_maximal_pattern, cap=20),
        _Check("Component count: maximal elements = recurrence = (1-x^3)/(1-x-x^3) = {1,2}-compositions", "poly", _check_components, needs=3),
        _Check("1/(1 - x - x^3) enumerates a_{n+1}", "poly", _check_gf_shift, needs=2),
        _Check("Components never equidimensional for n >= 5", "poly", _check_equidimensional, needs=5, cap=20),
        _Check("Y_6 Hasse diagram edge set", "poset", _check_y6_edges, needs=6, ranged=False),
        _Check("Y_6 component dimensions {2, 2, 2, 1}", "poset", _check_y6_components, needs=6, ranged=False),
        _Check("u-fixed quadrics: N A + A N^T = 0 iff u A u^T = A", "quadric", _check_fixed_criterion),
        _Check("Odd n: fixed space has dimension k + 1, spanned by the pattern", "quadric", _check_fixed_space),
        _Check("Even n: no non-degenerate fixed quadric (symbolic determinant)", "quadric", _check_even_degenerate),
        _Check("Torus lambda(t) preserves the fixed family", "quadric", _check_torus_family),
        _Check("Torus limit is a_{k+1} A_(n)", "quadric", _check_torus_limit),
        _Check("A_(n) is the unique torus-fixed point", "quadric", _check_torus_fixed_point),
        _Check("Unique u-fixed flag of every type over F_2 and F_3", "flag",
               lambda hi: _check_flags(hi, budgets.subspaces)),
        _Check("Cells: product structure and fixed point A_gamma", "quadric", _check_cells),
        _Check("Cell closure stratification", "quadric", _check_closure, needs=3),
        _Check("exp and log of the Jordan block are inverse", "quadric", _check_exp_log),
    ]


def verify_all(n_max: int, budgets: Budgets | None = None) -> list[CheckResult]:
    if n_max < 1:
        raise DomainError("n_max must be positive")
    budgets = budgets or Budgets.from_env()
    results = []
    for chk in _checks(budgets):
        hi = min(n_max, getattr(budgets, chk.group))
        if chk.cap is not None:
            hi = min(hi, chk.cap)
        label = f"{chk.name} (n <= {hi})" if chk.ranged else chk.name
        if n_max < chk.needs:
            results.append(CheckResult(chk.name, "SKIP", detail=f"needs n_max >= {chk.needs}"))
            continue
        start = time.perf_counter()
        try:
            ok, detail = chk.run(hi)
        except (ConsistencyError, BudgetError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        results.append(CheckResult(label, "PASS" if ok else "FAIL", elapsed, detail))
    return results


def format_report(results: list[CheckResult], timing: bool = False) -> str:
    lines = ["TAP version 13", f"1..{len(results)}"]
    for i, r in enumerate(results, 1):
        prefix = "not ok" if r.failed else "ok"
        line = f"{prefix} {i} - {r.name}: {r.status}"
        if r.status == "SKIP":
            line = f"ok {i} - {r.name} # SKIP {r.detail}"
        elif r.failed and r.detail:
            line += f" ({r.detail})"
        if timing and r.status != "SKIP":
            line += f" [{r.seconds:.3f}s]"
        lines.append(line)
    failed = sum(r.failed for r in results)
    lines.append(f"# {len(results) - failed} passed, {failed} failed")
    return "\n".join(lines) + "\n"
