import pytest
from hypothesis import given, strategies as st

from oracles import chains
from telescope.errors import NotMonotone, ParseError, UnknownElement
from telescope.homology import betti
from telescope.poset import (Cover, Poset, face_poset, flag_nerve, format_poset, nerve, order_complex, parse_cover,
                             parse_poset, poset_fiber)
from telescope.simplicial import barycentric_subdivision, build_complex


@st.composite
def posets(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    rel = [(a, b) for a in range(n) for b in range(a + 1, n) if draw(st.booleans())]
    return Poset(range(n), rel)


complexes = st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=3, unique=True), min_size=1, max_size=5)


def test_transitive_closure_and_cycles():
    P = Poset(range(3), [(0, 1), (1, 2)])
    assert P.less(0, 2) and not P.less(2, 0)
    with pytest.raises(ValueError):
        Poset(range(2), [(0, 1), (1, 0)])
    with pytest.raises(UnknownElement):
        Poset(range(2), [(0, 5)])


def test_order_complex_examples():
    assert order_complex(Poset(range(3), [(0, 1), (1, 2)])).maximal == ((0, 1, 2),)
    assert order_complex(Poset(range(3))).maximal == ((0,), (1,), (2,))
    P, _ = face_poset(build_complex([(0, 1), (1, 2), (0, 2)]))
    assert betti(order_complex(P)).free == (1, 1)


def test_nerve_examples():
    assert nerve(Cover({0: {1, 2}, 1: {2, 3}})).maximal == ((0, 1),)
    hollow = nerve(Cover({0: {1, 2}, 1: {2, 3}, 2: {3, 1}}))
    assert betti(hollow).free == (1, 1)
    # closed stars of the vertices of the path 0-1-2-3, as sets of edge ids
    stars = Cover({0: {"a"}, 1: {"a", "b"}, 2: {"b", "c"}, 3: {"c"}})
    assert betti(nerve(stars)).free[0] == 1 and not any(betti(nerve(stars)).free[1:])


def test_flag_nerve_examples():
    assert betti(flag_nerve(build_complex([(0, 1)]))).free == (1, 0)
    assert flag_nerve(build_complex([(0,)])).f_vector == (1,)


def test_flag_nerve_is_the_subdivision():
    K = build_complex([(0, 1, 2), (2, 3)])
    assert flag_nerve(K) == barycentric_subdivision(K)[0]


def test_poset_fiber_examples():
    P = Poset(range(4), [(0, 1), (1, 2), (0, 3)])
    ident = {x: x for x in P.elements}
    assert poset_fiber(ident, P, P, 2) == order_complex(P.restrict(P.down_set(2)))
    one = Poset([0])
    assert poset_fiber({x: 0 for x in P.elements}, P, one, 0) == order_complex(P)


def test_poset_fiber_errors():
    P = Poset(range(2), [(0, 1)])
    with pytest.raises(NotMonotone):
        poset_fiber({0: 1, 1: 0}, P, P, 1)
    with pytest.raises(UnknownElement):
        poset_fiber({0: 0}, P, P, 1)
    with pytest.raises(UnknownElement):
        poset_fiber({0: 0, 1: 1}, P, P, 9)


def test_product_projection_fiber():
    # A = 0<1, B = 0<1; product elements 2a+b, projection to A
    prod = Poset(range(4), [(x, y) for x in range(4) for y in range(4)
                            if x != y and x // 2 <= y // 2 and x % 2 <= y % 2])
    A = Poset(range(2), [(0, 1)])
    f = {x: x // 2 for x in range(4)}
    F = poset_fiber(f, prod, A, 0)
    brute = {c for c in chains([0, 1], prod.less)}
    assert set(F.faces()) == brute


def test_text_formats():
    P = parse_poset("0 < 1\n1 < 2  # chain\n", elements=[5])
    assert P.elements == (0, 1, 2, 5)
    assert parse_poset(format_poset(P), P.elements).relation == P.relation
    with pytest.raises(ParseError):
        parse_poset("0 1\n")
    C = parse_cover("0: 1 2\n1: 2 3\n")
    assert C.sets == {0: frozenset({1, 2}), 1: frozenset({2, 3})}
    with pytest.raises(ParseError):
        parse_cover("0 1 2\n")


@given(posets())
def test_order_complex_simplices_are_chains(P):
    assert set(order_complex(P).faces()) == set(chains(P.elements, P.less))


@given(st.dictionaries(st.integers(0, 4), st.sets(st.integers(0, 6), min_size=1, max_size=4), min_size=1))
def test_nerve_definition_and_monotonicity(sets):
    C = Cover(sets)
    N = nerve(C)
    for s in N.faces():
        assert frozenset.intersection(*(C.sets[i] for i in s))
    drop = min(sets)
    rest = {i: s for i, s in sets.items() if i != drop}
    if rest:
        assert set(nerve(Cover(rest)).faces()) <= set(N.faces())


@given(complexes)
def test_flag_nerve_and_face_poset_keep_betti(maximal):
    K = build_complex(maximal)
    P, _ = face_poset(K)
    assert betti(flag_nerve(K)) == betti(K) == betti(order_complex(P))
