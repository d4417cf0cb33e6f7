import pytest
from hypothesis import given, strategies as st

from fibquadrics.compositions import (
    Kind,
    OddComposition,
    classify,
    count,
    enumerate_compositions,
    fibonacci,
    parse_composition,
    phi,
    phi_inverse,
    psi,
    psi_inverse,
)
from fibquadrics.errors import DomainError

from _oracles import odd_compositions


def C(*parts):
    return OddComposition(parts)


def test_enumerate_three():
    assert enumerate_compositions(3) == [C(1, 1, 1), C(3)]


def test_enumerate_six_has_eight_nodes():
    assert len(enumerate_compositions(6)) == 8


@pytest.mark.parametrize("n", range(1, 16))
def test_enumerate_matches_brute_force(n):
    assert [g.parts for g in enumerate_compositions(n)] == odd_compositions(n)


def test_enumerate_ten_frozen():
    # brute force: 55 odd-part compositions of 10
    assert len(enumerate_compositions(10)) == 55


def test_enumerate_rejects_nonpositive():
    with pytest.raises(DomainError):
        enumerate_compositions(0)
    with pytest.raises(DomainError):
        enumerate_compositions(-3)


def test_enumerate_zero_behind_flag():
    assert enumerate_compositions(0, allow_empty=True) == [OddComposition(())]


def test_enumerate_no_duplicates_and_valid():
    comps = enumerate_compositions(12)
    assert len(set(comps)) == len(comps)
    assert all(g.n == 12 and all(p % 2 == 1 for p in g) for g in comps)
    assert comps == sorted(comps)


@pytest.mark.parametrize("parts", [(2,), (1, 0), (-1,), (3, 4)])
def test_invalid_parts_rejected(parts):
    with pytest.raises(DomainError):
        OddComposition(parts)


@pytest.mark.parametrize(
    "gamma, kind",
    [((1, 3, 1), Kind.FIRST_ONE), ((3, 3), Kind.FIRST_GT_ONE), ((5, 1), Kind.FIRST_GT_ONE)],
)
def test_classify(gamma, kind):
    assert classify(OddComposition(gamma)) is kind


@pytest.mark.parametrize("gamma, image", [((1, 3, 1), (3, 1)), ((1, 1, 1), (1, 1)), ((1, 5), (5,))])
def test_phi(gamma, image):
    assert phi(OddComposition(gamma)) == OddComposition(image)


@pytest.mark.parametrize("gamma, image", [((3, 3), (1, 3)), ((5, 1), (3, 1)), ((3,), (1,))])
def test_psi(gamma, image):
    assert psi(OddComposition(gamma)) == OddComposition(image)


def test_phi_psi_preconditions():
    with pytest.raises(DomainError):
        phi(C(3, 1))
    with pytest.raises(DomainError):
        psi(C(1, 3))


@pytest.mark.parametrize("n", range(2, 16))
def test_phi_is_bijection(n):
    src = [g for g in enumerate_compositions(n) if classify(g) is Kind.FIRST_ONE]
    images = [phi(g) for g in src]
    assert len(set(images)) == len(images) == count(n - 1)
    assert set(images) == set(enumerate_compositions(n - 1))
    assert all(phi_inverse(phi(g)) == g for g in src)


@pytest.mark.parametrize("n", range(3, 16))
def test_psi_is_bijection(n):
    src = [g for g in enumerate_compositions(n) if classify(g) is Kind.FIRST_GT_ONE]
    images = [psi(g) for g in src]
    assert len(set(images)) == len(images) == count(n - 2)
    assert set(images) == set(enumerate_compositions(n - 2))
    assert all(psi_inverse(psi(g)) == g for g in src)


@pytest.mark.parametrize("n, expected", [(1, 1), (6, 8), (12, 144)])
def test_count_examples(n, expected):
    assert count(n) == expected


def test_count_recurrence_to_25():
    for n in range(3, 26):
        assert count(n) == count(n - 1) + count(n - 2)
    assert count(1) == count(2) == 1
    assert all(count(n) == fibonacci(n) for n in range(1, 26))


def test_count_domain():
    with pytest.raises(DomainError):
        count(0)


def test_serialization():
    g = C(3, 1, 1, 1)
    assert g.to_json() == "[3, 1, 1, 1]"
    assert OddComposition.from_json("[3,1,1,1]") == g
    assert g.compact() == "3111"
    assert C(11, 1).compact() == "11,1"
    assert parse_composition("5,1") == C(5, 1)


@pytest.mark.parametrize("text", ["", "5,,1", "a,1", "5;1", "2,1"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        parse_composition(text)


odd_parts = st.lists(st.integers(0, 6).map(lambda x: 2 * x + 1), min_size=1, max_size=8)


@given(odd_parts)
def test_roundtrips(parts):
    g = OddComposition(parts)
    assert parse_composition(str(g)) == g
    assert OddComposition.from_json(g.to_json()) == g
    if g[0] == 1 and len(g) > 1:
        assert phi(g).n == g.n - 1
    elif g[0] > 1:
        assert psi(g).n == g.n - 2
