import pytest
from hypothesis import given, strategies as st

from oracles import betti_rational, components, invariant_factors
from telescope.errors import EmptyComplex
from telescope.homology import (BettiVector, betti, betti_from_faces, boundary_matrix, connected_components,
                                homology_report, reduced_betti, smith_normal_form)
from telescope.simplicial import build_complex
from telescope.suite import RP2

complexes = st.lists(st.lists(st.integers(0, 7), min_size=1, max_size=5, unique=True), min_size=1, max_size=8)
matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


def circle():
    return build_complex([(0, 1), (1, 2), (0, 2)])


@pytest.mark.parametrize("M, factors", [
    ([[2, 0], [0, 3]], (1, 6)),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, 1, 1)),
    ([[2]], (2,)),
    ([[0, 0]], ()),
])
def test_snf_examples(M, factors):
    assert smith_normal_form(M) == (factors, len(factors))


def test_snf_empty():
    assert smith_normal_form([]) == ((), 0)


@given(matrices)
def test_snf_matches_determinantal_divisors(M):
    factors, rank = smith_normal_form(M)
    assert factors == invariant_factors(M)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))


def test_snf_is_deterministic():
    M = [[4, 6, 2], [6, 9, 3], [2, 8, 10]]
    assert smith_normal_form(M) == smith_normal_form([row[:] for row in M])


def test_classic_spaces():
    assert betti(circle()).free == (1, 1)
    assert betti(build_complex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])).free == (1, 0, 1)
    rp2 = betti(build_complex(RP2))
    assert rp2.free == (1, 0, 0)
    assert rp2.torsion == ((), (2,), ())


def test_torus_has_no_torsion():
    # 7-vertex torus
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    b = betti(build_complex(tris))
    assert b.free == (1, 2, 1)
    assert not any(b.torsion)


def test_reduced_betti_examples():
    assert reduced_betti(build_complex([(0,)])).free == (0,)
    assert reduced_betti(build_complex([(0,), (1,)])).free == (1,)
    assert reduced_betti(circle()).free == (0, 1)


def test_empty_complex_rejected():
    from telescope.simplicial import SimplicialComplex
    with pytest.raises(EmptyComplex):
        betti(SimplicialComplex())


def test_components_examples():
    assert len(connected_components(build_complex([(0, 1), (2, 3)]))) == 2
    assert len(connected_components(build_complex([(0, 1), (1, 2), (2, 3)]))) == 1


def test_boundary_columns_alternate():
    D = boundary_matrix(build_complex([(0, 1, 2)]), 2)
    assert D.rows == ((0, 1), (0, 2), (1, 2))
    assert [D.columns[0][i] for i in range(3)] == [1, -1, 1]


def test_max_degree_truncates():
    K = build_complex([(0, 1, 2, 3)])
    assert betti(K, max_degree=1).free == (1, 0)


def test_report_shape():
    r = homology_report(circle())
    assert r == {"betti": [1, 1], "torsion": [[], []], "euler": 0}


def test_parallel_matches_sequential():
    K = build_complex([(0, 1, 2, 3, 4), (2, 3, 4, 5, 6), (0, 6, 7)])
    assert betti(K, workers=2, parallel_threshold=0) == betti(K, workers=1)


def test_betti_vector_helpers():
    b = BettiVector((1, 2, 1))
    assert b.euler == 0
    assert b.padded(2).free == (1, 2)
    assert b.padded(4).free == (1, 2, 1, 0)
    assert b[7] == 0


@given(complexes)
def test_boundary_squared_is_zero(maximal):
    K = build_complex(maximal)
    for k in range(2, K.dim + 1):
        A, B = boundary_matrix(K, k - 1).to_dense(), boundary_matrix(K, k).to_dense()
        for i in range(len(A)):
            for j in range(len(B[0])):
                assert sum(A[i][l] * B[l][j] for l in range(len(B))) == 0


@given(complexes)
def test_euler_poincare_and_rational_ranks(maximal):
    K = build_complex(maximal)
    b = betti(K)
    assert b.euler == K.euler_characteristic()
    assert b.free == betti_rational(maximal)


@given(complexes)
def test_component_count_equals_b0(maximal):
    K = build_complex(maximal)
    edges = [f for f in K.faces(1)]
    assert len(connected_components(K)) == betti(K)[0] == components(K.vertices, edges)


@given(complexes)
def test_betti_from_faces_agrees(maximal):
    K = build_complex(maximal)
    assert betti_from_faces([K.faces(d) for d in range(K.dim + 1)]) == betti(K)
