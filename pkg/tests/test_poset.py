import itertools
import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from fibquadrics.compositions import OddComposition, enumerate_compositions
from fibquadrics.errors import ConsistencyError, DomainError
from fibquadrics.poset import (
    CoverEdge,
    ExpansionVector,
    covered_by,
    covers_of,
    down_set,
    has_upper_cover,
    down_set_oracle,
    hasse,
    interval_shape,
    is_maximal_pattern,
    leq,
    leq_oracle,
    maximal_elements,
    meet,
    meet_recursive,
    rank,
)

from _oracles import brute_meet, maximal, order_relation, transitive_reduction


def S(*comps):
    return {OddComposition(c) for c in comps}


class TestCovers:
    def test_covers_of(self):
        assert set(covers_of((3, 3))) == S((1, 1, 1, 3), (3, 1, 1, 1))
        assert covers_of((1, 1, 1, 1)) == []
        assert set(covers_of((5, 1))) == S((3, 1, 1, 1))

    def test_covered_by(self):
        assert set(covered_by((3, 1, 1, 1))) == S((5, 1), (3, 3))
        assert covered_by((1, 3, 1)) == []
        assert set(covered_by((1,) * 6)) == S((3, 1, 1, 1), (1, 3, 1, 1), (1, 1, 3, 1), (1, 1, 1, 3))

    @pytest.mark.parametrize("n", range(1, 10))
    def test_covers_are_the_transitive_reduction(self, n):
        # independent: Hasse edges of the brute-force order
        ours = {(r.parts, g.parts) for g in enumerate_compositions(n) for r in covers_of(g)}
        assert ours == transitive_reduction(n)

    @pytest.mark.parametrize("n", range(1, 10))
    def test_covered_by_inverts_covers_of(self, n):
        for r in enumerate_compositions(n):
            assert set(covered_by(r)) == {g for g in enumerate_compositions(n) if r in covers_of(g)}

    def test_cover_edge_validates(self):
        CoverEdge(OddComposition((3, 1, 1, 1)), OddComposition((5, 1)), 0)
        with pytest.raises(ConsistencyError):
            CoverEdge(OddComposition((1, 1, 3, 1)), OddComposition((5, 1)), 0)


class TestOrder:
    def test_examples(self):
        assert leq((3, 1, 1, 1), (5, 1))
        assert not leq((1, 3, 1, 1), (3, 3))
        assert leq((3, 3), (3, 3))

    def test_oracle_examples(self):
        assert leq_oracle((1,) * 6, (3, 3))
        assert not leq_oracle((5, 1), (1, 5))
        assert leq_oracle((1,), (1,))

    def test_mismatched_n(self):
        with pytest.raises(DomainError):
            leq((1, 1), (3,))
        with pytest.raises(DomainError):
            leq_oracle((1, 1), (3,))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_matches_brute_force_order(self, n):
        rel = order_relation(n)
        comps = enumerate_compositions(n)
        for r, g in itertools.product(comps, repeat=2):
            assert leq(r, g) == ((r.parts, g.parts) in rel) == leq_oracle(r, g)

    def test_unique_minimum(self):
        for n in range(1, 13):
            bottom = OddComposition((1,) * n)
            assert all(leq(bottom, g) for g in enumerate_compositions(n))


class TestRank:
    def test_examples(self):
        assert rank((1,) * 6) == 0
        assert rank((3, 3)) == 2
        assert rank((5, 1)) == 2

    @pytest.mark.parametrize("n", range(1, 11))
    def test_graded(self, n):
        comps = enumerate_compositions(n)
        for g in comps:
            for r in covers_of(g):
                assert rank(g) == rank(r) + 1
        for r, g in itertools.product(comps, repeat=2):
            if r != g and leq(r, g):
                assert rank(r) < rank(g)


class TestIntervals:
    @pytest.mark.parametrize(
        "gamma, shape, size",
        [((3, 3), [1, 1], 4), ((5, 1), [2, 0], 3), ((1, 1, 1), [0, 0, 0], 1)],
    )
    def test_shape(self, gamma, shape, size):
        assert interval_shape(gamma) == shape
        assert len(down_set(gamma)) == size

    def test_down_set_examples(self):
        assert down_set((3, 3)) == S((3, 3), (3, 1, 1, 1), (1, 1, 1, 3), (1,) * 6)
        assert down_set((1, 1, 3, 1)) == S((1, 1, 3, 1), (1,) * 6)
        assert down_set((1,)) == S((1,))

    @pytest.mark.parametrize("n", range(1, 13))
    def test_product_of_chains_count(self, n):
        for g in enumerate_compositions(n):
            d = down_set(g)
            assert len(d) == math.prod(s + 1 for s in interval_shape(g))
            assert d == down_set_oracle(g)

    def test_expansion_vector_bounds(self):
        ref = OddComposition((5, 1))
        assert ExpansionVector(ref, (2, 0)).apply() == OddComposition((1, 1, 1, 1, 1, 1))
        with pytest.raises(DomainError):
            ExpansionVector(ref, (3, 0))
        with pytest.raises(DomainError):
            ExpansionVector(ref, (0, 1))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_covering_sequence_lemma(self, n):
        for g in enumerate_compositions(n):
            if g[0] == 1:
                continue
            for t in enumerate_compositions(n):
                if t[0] == 1 and leq(t, g):
                    assert all(x == 1 for x in t.parts[: g[0]])


class TestMeet:
    def test_examples(self):
        assert meet((5, 1), (3, 3)) == OddComposition((3, 1, 1, 1))
        assert meet((5, 1), (1, 5)) == OddComposition((1,) * 6)
        assert meet((3, 3), (3, 3)) == OddComposition((3, 3))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_unique_maximum_brute(self, n):
        for a, b in itertools.combinations_with_replacement(enumerate_compositions(n), 2):
            tops = brute_meet(a.parts, b.parts)
            assert len(tops) == 1
            assert meet(a, b).parts == tops[0]

    @pytest.mark.parametrize("n", range(1, 10))
    def test_laws(self, n):
        comps = enumerate_compositions(n)
        for a in comps:
            assert meet(a, a) == a
        for a, b in itertools.product(comps, repeat=2):
            m = meet(a, b)
            assert m == meet(b, a)
            assert leq(m, a) and leq(m, b)
        for a, b, c in itertools.product(comps, repeat=3):
            assert meet(meet(a, b), c) == meet(a, meet(b, c))

    @pytest.mark.parametrize("n", range(1, 13))
    def test_recursive_fast_path_agrees(self, n):
        for a, b in itertools.product(enumerate_compositions(n), repeat=2):
            assert meet_recursive(a, b) == meet(a, b)

    def test_common_lower_bounds_below_meet(self):
        comps = enumerate_compositions(8)
        for a, b in itertools.product(comps, repeat=2):
            m = meet(a, b)
            for c in down_set(a) & down_set(b):
                assert leq(c, m)


class TestMaximal:
    def test_examples(self):
        assert set(maximal_elements(6)) == S((5, 1), (3, 3), (1, 5), (1, 1, 3, 1))
        assert set(maximal_elements(5)) == S((5,), (1, 1, 3), (1, 3, 1))
        assert maximal_elements(1) == [OddComposition((1,))]

    @pytest.mark.parametrize("n", range(1, 11))
    def test_against_brute_force(self, n):
        assert [g.parts for g in maximal_elements(n)] == maximal(n)

    @pytest.mark.parametrize("n", range(1, 21))
    def test_pattern_characterization(self, n):
        comps = enumerate_compositions(n)
        assert maximal_elements(n) == [g for g in comps if is_maximal_pattern(g)]

    @pytest.mark.parametrize("n", range(1, 13))
    def test_upper_cover_shortcut(self, n):
        for g in enumerate_compositions(n):
            assert has_upper_cover(g) == bool(covered_by(g))

    def test_sorted(self):
        for n in range(1, 12):
            m = maximal_elements(n)
            assert m == sorted(m)


class TestHasse:
    def test_y6_diagram(self):
        d = hasse(6)
        edges = {(e.lower.compact(), e.upper.compact()) for e in d.edges}
        assert len(d.nodes) == 8
        assert edges == {
            ("111111", "3111"), ("111111", "1131"), ("111111", "1311"), ("111111", "1113"),
            ("3111", "51"), ("3111", "33"), ("1113", "33"), ("1311", "15"),
        }
        assert sorted(d.ranks.values()) == [0, 1, 1, 1, 1, 2, 2, 2]

    def test_trivial(self):
        d = hasse(1)
        assert len(d.nodes) == 1 and d.edges == []

    def test_seven(self):
        d = hasse(7)
        assert len(d.nodes) == 13
        # transitive reduction of the brute-force order on F_7 has 15 pairs
        assert len(d.edges) == len(transitive_reduction(7)) == 15

    def test_ranks_and_nodes(self):
        for n in range(1, 10):
            d = hasse(n)
            assert d.nodes == enumerate_compositions(n)
            assert all(d.ranks[g] == (n - len(g)) // 2 for g in d.nodes)
            idx = d.index()
            assert all(e.lower in idx and e.upper in idx for e in d.edges)

    def test_json(self):
        obj = json.loads(hasse(6).to_json())
        assert set(obj) == {"n", "nodes", "edges", "ranks"}
        nodes = [tuple(x) for x in obj["nodes"]]
        assert nodes[0] == (1,) * 6
        pairs = {(nodes[lo], nodes[up]) for lo, up in obj["edges"]}
        assert pairs == transitive_reduction(6)
        assert obj["ranks"] == [(6 - len(x)) // 2 for x in nodes]

    def test_dot(self):
        dot = hasse(6).to_dot()
        assert dot.startswith("graph hasse_6 {")
        assert dot.count(" -- ") == 8
        assert dot.count("rank=same") == 3
        for label in ["111111", "3111", "1131", "1311", "1113", "51", "33", "15"]:
            assert f'label="{label}"' in dot


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 14).flatmap(lambda n: st.tuples(
    st.sampled_from(enumerate_compositions(n)), st.sampled_from(enumerate_compositions(n)))))
def test_random_pairs_order_and_meet(pair):
    a, b = pair
    assert leq(a, b) == leq_oracle(a, b)
    m = meet(a, b)
    assert m == meet_recursive(a, b)
    assert leq(m, a) and leq(m, b)
