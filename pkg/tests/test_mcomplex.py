import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from oracles import cliques
from telescope.errors import BNotInS, CriterionFails, FlagMismatch, InvalidParams, NotAFlag, WitnessRejected
from telescope.homology import betti
from telescope.marking import core, mark_all_soft, strictly_succ
from telescope.mcomplex import (BaryPoint, Collapse, LadderParams, MSpec, build_M, build_M_B, check_connectivity,
                                collapse, element_ranks, in_Z_K, membership_K_B, z_nonempty, z_witness)
from telescope.poset import Poset
from telescope.simplicial import build_complex
from telescope.suite import random_mspec, triangle_markings

MARKS = triangle_markings()
FIG2 = MSpec(Poset(range(2), [(0, 1)]), (2, 2))


def admissible_chains(spec):
    """Vertex sets (p, i) obeying conditions (a)-(c), by brute force over subsets."""
    P = spec.order
    verts = [(p, i) for p in range(spec.N + 1) for i in range(spec.caps[p] + 1)]

    def ok(a, b):  # a before b in the chain order
        (p, i), (q, j) = sorted((a, b))
        above = p == q or P.less(p, q)
        return not above or j > i

    return {tuple(sorted(spec.vertex_id(*v) for v in c)) for c in cliques(verts, ok)}


@st.composite
def specs(draw):
    N = draw(st.integers(0, 2))
    rel = [(a, b) for a in range(N + 1) for b in range(a + 1, N + 1) if draw(st.booleans())]
    caps = draw(st.lists(st.integers(0, 2), min_size=N + 1, max_size=N + 1))
    return MSpec(Poset(range(N + 1), rel), caps)


def test_fig2():
    K = build_M(FIG2)
    assert K.f_vector == (6, 9, 4)
    assert betti(K).free == (1, 0, 0)
    assert collapse(K) is Collapse.COLLAPSIBLE


def test_antichain_two_edges():
    K = build_M(MSpec(Poset(range(2)), (1, 1)))
    assert K.maximal == ((0, 1, 2, 3),)
    assert betti(K).free[0] == 1 and not any(betti(K).free[1:])


@pytest.mark.parametrize("m0", [0, 1, 3])
def test_single_element_gives_a_simplex(m0):
    assert build_M(MSpec(Poset([0]), (m0,))).maximal == (tuple(range(m0 + 1)),)


def test_spec_validation():
    with pytest.raises(InvalidParams):
        MSpec(Poset(range(2), [(0, 1)]), ())
    with pytest.raises(InvalidParams):
        MSpec(Poset(range(2), [(0, 1)]), (1, -1))
    with pytest.raises(InvalidParams):
        MSpec(Poset(range(3), [(0, 1)]), (1, 1))


def test_m_reads_indices_one_to_n():
    spec = MSpec(Poset(range(3)), (0, 2, 3))
    assert spec.m == 2 and spec.m_with_zero == 0
    assert MSpec(Poset([0]), (4,)).m == 4


def test_element_ranks_count_steps():
    assert element_ranks(Poset(range(2), [(0, 1)])) == {0: 0, 1: 1}
    assert element_ranks(Poset(range(3))) == {0: 0, 1: 0, 2: 0}


@given(specs())
def test_build_M_is_exactly_the_admissible_chains(spec):
    assert set(build_M(spec).faces()) == admissible_chains(spec)


def test_connectivity_examples():
    assert check_connectivity(build_M(FIG2), 2)["homology_ok"]
    assert not check_connectivity(build_complex([(0, 1), (1, 2), (0, 2)]), 2)["homology_ok"]
    assert check_connectivity(build_complex([(0,)]), 5)["homology_ok"]
    assert check_connectivity(build_complex([(0,), (1,)]), 0) == {"homology_ok": True, "degrees_checked": []}


def test_collapse_examples():
    assert collapse(build_complex([(0, 1, 2, 3)])) is Collapse.COLLAPSIBLE
    assert collapse(build_complex([(0, 1), (1, 2), (0, 2)])) is Collapse.UNKNOWN
    # the dunce-hat style obstruction: a 2-sphere has no free face at all
    assert collapse(build_complex(list(combinations(range(4), 3)))) is Collapse.UNKNOWN


def test_connectivity_on_seeded_specs():
    rng = random.Random(3)
    for _ in range(25):
        spec, K, _ = random_mspec(rng)
        assert check_connectivity(K, spec.m)["homology_ok"]


def test_corollary_on_seeded_specs():
    rng = random.Random(4)
    for _ in range(25):
        spec, K, _ = random_mspec(rng, corollary=True)
        r = element_ranks(spec.order)
        assert all(spec.caps[j] >= r[j] for j in range(spec.N + 1))
        b = betti(K)
        assert b.free[0] == 1 and not any(b.free[1:]) and not any(b.torsion)


# -- M_B ------------------------------------------------------------------------

def test_M_B_of_a_vertex_is_a_simplex():
    M = MARKS["signs"]
    v = next(B for B in M.S_hat if len(B) == 1)
    assert build_M_B(M, v, 3).maximal == ((0, 1, 2, 3),)


def test_M_B_matches_M_on_a_chain():
    R = build_complex([(0, 1)])
    M = mark_all_soft(R, [(0, 1)])
    idx = R.face_index
    B = (idx[(0,)], idx[(0, 1)])
    faces = sorted((F for F in M.S_hat if set(F) <= set(B)), key=lambda F: (-len(F), F))
    assert len(faces) == 2
    rel = [(a, b) for a in range(2) for b in range(2) if strictly_succ(faces[b], faces[a], M)]
    for m in range(3):
        assert build_M_B(M, B, m).maximal == build_M(MSpec(Poset(range(2), rel), (m, m))).maximal


@pytest.mark.parametrize("label", sorted(MARKS))
def test_M_B_connectivity(label):
    M = MARKS[label]
    for B in M.S_hat:
        for m in (1, 2):
            assert check_connectivity(build_M_B(M, B, m), m)["homology_ok"]


def test_M_B_rejects_simplices_outside_s():
    R = build_complex([(0, 1)])
    M = mark_all_soft(R, [(0,)])
    with pytest.raises(BNotInS):
        build_M_B(M, (R.face_index[(0, 1)],), 1)


# -- ladders and regions --------------------------------------------------------------

def test_ladder():
    L = LadderParams.geometric(2, Fraction(1, 10))
    assert L.epsilons == (Fraction(1, 10**6), Fraction(1, 10**4), Fraction(1, 100))
    assert L.deltas == (Fraction(1, 10**5), Fraction(1, 10**3), Fraction(1, 10))
    with pytest.raises(InvalidParams):
        LadderParams(0, (Fraction(1, 2),), (Fraction(1, 3),))
    with pytest.raises(InvalidParams):
        LadderParams.geometric(1, 2)


def test_bary_point_validation():
    with pytest.raises(ValueError):
        BaryPoint((0, 1), {0: Fraction(1, 2)})
    with pytest.raises(ValueError):
        BaryPoint((0, 1), {0: 2, 1: -1})
    with pytest.raises(ValueError):
        BaryPoint((0, 1), {5: 1})


def test_membership_examples():
    x = BaryPoint((0, 1, 2), {0: Fraction(1, 2), 1: Fraction(1, 2)})
    assert membership_K_B(x, (0, 1), (0,), Fraction(1, 3), Fraction(1, 100))
    assert not membership_K_B(x, (0, 1), (2,), Fraction(1, 100), Fraction(1, 100))
    assert membership_K_B(x, (0, 1), (0,), None, Fraction(1, 100))
    with pytest.raises(FlagMismatch):
        membership_K_B(x, (0, 7), (0,), None, Fraction(1, 2))


points = st.lists(st.integers(1, 10**6), min_size=4, max_size=4)
thresholds = st.fractions(min_value=Fraction(1, 10**6), max_value=Fraction(1, 2))


@given(points, st.integers(1, 3), thresholds, thresholds, thresholds, thresholds, st.integers(0, 6))
def test_intersection_identity(w, size, d1, e1, d2, e2, scale):
    J = (0, 1, 2, 3)
    B = J[:size]
    w = [Fraction(v) * (1 if i < size else Fraction(1, 10 ** scale)) for i, v in enumerate(w)]
    x = BaryPoint(J, {v: t / sum(w) for v, t in zip(J, w)})
    C = B[:1]
    both = membership_K_B(x, B, C, d1, e1) and membership_K_B(x, B, C, d2, e2)
    assert both == membership_K_B(x, B, C, max(d1, d2), min(e1, e2))


def flags_of(M):
    Shat = sorted(M.S_hat)
    out, frontier = [], [[B] for B in Shat]
    while frontier:
        out.extend(frontier)
        frontier = [f + [F] for f in frontier for F in Shat if set(F) < set(f[-1])]
    return out


def test_z_nonempty_examples():
    M = MARKS["all-soft"]
    L = LadderParams.geometric(2)
    for fl in flags_of(M):
        if len(fl) == 1:
            assert z_nonempty(fl, [(2, 0)], M, L)
    two = next(f for f in flags_of(M) if len(f) == 2 and strictly_succ(f[1], f[0], M))
    assert not z_nonempty(two, [(1, 0), (0, 1)], M, L)
    assert z_nonempty(two, [(1, 0), (0, 2)], M, L)
    with pytest.raises(NotAFlag):
        z_nonempty([two[1], two[0]], [(0, 0), (0, 0)], M, L)
    with pytest.raises(NotAFlag):
        z_nonempty(two, [(0, 0)], M, L)


@pytest.mark.parametrize("label", sorted(MARKS))
def test_witnesses_exist_exactly_when_the_criterion_holds(label):
    M = MARKS[label]
    L = LadderParams.geometric(1)
    for fl in flags_of(M):
        J = next(T for T in M.subdivision.maximal if set(fl[0]) <= set(T))
        for idx in product(range(2), repeat=2 * len(fl)):
            seq = list(zip(idx[::2], idx[1::2]))
            if z_nonempty(fl, seq, M, L):
                x = z_witness(fl, seq, M, J, L)
                assert in_Z_K(x, fl, seq, M, L)
            else:
                with pytest.raises(CriterionFails):
                    z_witness(fl, seq, M, J, L)


def test_witness_needs_an_ambient_simplex_containing_the_flag():
    M = MARKS["signs"]
    fl = [next(B for B in M.S_hat if len(B) == 3)]
    other = next(T for T in M.subdivision.maximal if T != fl[0])
    with pytest.raises(FlagMismatch):
        z_witness(fl, [(0, 0)], M, other, LadderParams.geometric(1))


def test_literal_recipe_can_be_rejected():
    # the three-step recipe taken literally misses some sequences the criterion admits
    M = MARKS["all-soft"]
    L = LadderParams.geometric(2)
    rejected = 0
    for fl in flags_of(M):
        if len(fl) < 2:
            continue
        J = next(T for T in M.subdivision.maximal if set(fl[0]) <= set(T))
        for idx in product(range(3), repeat=2 * len(fl)):
            seq = list(zip(idx[::2], idx[1::2]))
            if z_nonempty(fl, seq, M, L):
                try:
                    z_witness(fl, seq, M, J, L, construction="paper")
                except WitnessRejected:
                    rejected += 1
    assert rejected > 0


@pytest.mark.parametrize("label", sorted(MARKS))
def test_regions_of_unnested_simplices_are_disjoint(label):
    # either B ⊂ closure(B') or B' ⊂ closure(B) whenever K_B and K_B' meet
    M = MARKS[label]
    rng = random.Random(11)
    L = LadderParams.geometric(1)
    tops = M.subdivision.maximal
    for _ in range(3000):
        J = rng.choice(tops)
        B1 = tuple(sorted(rng.sample(J, rng.randint(1, 3))))
        B2 = tuple(sorted(rng.sample(J, rng.randint(1, 3))))
        if set(B1) <= set(B2) or set(B2) <= set(B1):
            continue
        w = {v: Fraction(rng.randint(1, 1000)) * (1 if v in B1 + B2 else Fraction(1, 1000)) for v in J}
        x = BaryPoint(J, {v: t / sum(w.values()) for v, t in w.items()})
        e = L.epsilons[1]
        assert not (membership_K_B(x, B1, core(B1, M), None, e) and membership_K_B(x, B2, core(B2, M), None, e))
