"""The complexes M(m0, ..., mN) and M_B, collapsibility, and the K_B / Z_K regions.

Both M and M_B are flag complexes: their admissibility conditions only
ever compare two vertices at a time, so they are the clique complexes of
a pairwise admissibility graph.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import BNotInS, CriterionFails, FlagMismatch, InvalidParams, NotAFlag, WitnessRejected
from .homology import betti
from .marking import MarkedComplex, core, strictly_succ
from .poset import Poset
from .simplicial import Simplex, SimplicialComplex


# -- M(m0, ..., mN) -----------------------------------------------------------

@dataclass(frozen=True)
class MSpec:
    order: Poset
    caps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "caps", tuple(int(c) for c in self.caps))
        if not self.caps:
            raise InvalidParams("caps must be non-empty")
        if any(c < 0 for c in self.caps):
            raise InvalidParams("caps must be non-negative")
        if set(self.order.elements) - set(range(self.N + 1)):
            raise InvalidParams(f"poset elements must lie in 0..{self.N}")
        for a, b in self.order.relation:
            if a > b:
                raise InvalidParams(f"{a} > {b} in the integer order but {b} ≻ {a} in the poset")
        if set(self.order.elements) != set(range(self.N + 1)):
            object.__setattr__(self, "order", Poset(range(self.N + 1), self.order.relation))

    @property
    def N(self) -> int:
        return len(self.caps) - 1

    @property
    def m(self) -> int:
        """min{m1, ..., mN}; for N = 0 the single cap m0 is used."""
        return min(self.caps[1:]) if self.N else self.caps[0]

    @property
    def m_with_zero(self) -> int:
        return min(self.caps)

    def vertex_id(self, p: int, i: int) -> int:
        return sum(c + 1 for c in self.caps[:p]) + i


def element_ranks(P: Poset) -> dict[int, int]:
    """r(p): length in steps of the longest chain with top element p."""
    r = {}
    for p in P.elements:  # integer order extends the poset order, see MSpec
        r[p] = max((r[q] + 1 for q in P.down(p)), default=0)
    return r


def _clique_complex(G: nx.Graph, labels: Mapping[int, str]) -> SimplicialComplex:
    return SimplicialComplex((tuple(c) for c in nx.find_cliques(G)), labels)


def build_M(spec: MSpec) -> SimplicialComplex:
    P = spec.order
    verts = [(p, i) for p in range(spec.N + 1) for i in range(spec.caps[p] + 1)]
    vid = {v: spec.vertex_id(*v) for v in verts}
    G = nx.Graph()
    G.add_nodes_from(vid.values())
    for a, (p, i) in enumerate(verts):
        for q, j in verts[a + 1:]:
            # verts is sorted, so p <= q and for p == q also i < j
            if p == q or not P.less(p, q) or j > i:
                G.add_edge(vid[(p, i)], vid[(q, j)])
    return _clique_complex(G, {vid[v]: f"({v[0]},{v[1]})" for v in verts})


def build_M_B(M: MarkedComplex, B: Iterable[int], m: int) -> SimplicialComplex:
    """Nerve of the cover {U_(B',i)} of V_B, vertices (B', i) for B' in S_B."""
    B = tuple(sorted(B))
    if m < 0:
        raise InvalidParams("m must be non-negative")
    if B not in M.subdivision or not M.in_S_hat(B):
        raise BNotInS(f"{B} is not a simplex of the marked subcomplex")
    faces = [F for F in M.S_hat if set(F) <= set(B)]
    faces.sort(key=lambda F: (-len(F), F))
    verts = [(F, i) for F in faces for i in range(m + 1)]
    G = nx.Graph()
    G.add_nodes_from(range(len(verts)))
    for a, (X, i) in enumerate(verts):
        for b in range(a + 1, len(verts)):
            Y, j = verts[b]
            if X == Y:
                G.add_edge(a, b)
            elif set(Y) < set(X):
                if not strictly_succ(Y, X, M) or j > i:
                    G.add_edge(a, b)
    labels = {a: f"({' '.join(map(str, F))};{i})" for a, (F, i) in enumerate(verts)}
    return _clique_complex(G, labels)


def check_connectivity(K: SimplicialComplex, m: int) -> dict:
    """Homological (m-1)-connectivity: reduced homology vanishes in degrees 0..m-1."""
    if m < 0:
        raise InvalidParams("m must be non-negative")
    degrees = list(range(m))
    if not degrees:
        return {"homology_ok": True, "degrees_checked": []}
    b = betti(K, max_degree=m - 1)
    ok = all((b[k] - (1 if k == 0 else 0)) == 0 and not b.torsion[k] for k in range(len(b)))
    return {"homology_ok": ok, "degrees_checked": degrees}


# -- collapsibility ----------------------------------------------------------

class Collapse(enum.Enum):
    COLLAPSIBLE = "Collapsible"
    UNKNOWN = "Unknown"


def _collapse_once(faces: list[Simplex], rng: random.Random | None) -> bool:
    up: dict[Simplex, set[Simplex]] = {f: set() for f in faces}
    for f in faces:
        if len(f) > 1:
            for i in range(len(f)):
                up[f[:i] + f[i + 1:]].add(f)
    alive = set(faces)

    def free(s):
        if len(up[s]) != 1:
            return None
        (t,) = up[s]
        return t if not up[t] else None

    while len(alive) > 1:
        pairs = [(s, t) for s in alive if (t := free(s)) is not None]
        if not pairs:
            return False
        top = max(len(t) for _, t in pairs)
        pairs = sorted(p for p in pairs if len(p[1]) == top)
        if rng is not None:
            rng.shuffle(pairs)
        used = set()
        for s, t in pairs:
            # several collapses per sweep; re-check freeness after each one
            if s in used or t in used or s not in alive or free(s) != t:
                continue
            for f in (t, s):
                alive.discard(f)
                used.add(f)
                for i in range(len(f)):
                    if len(f) > 1:
                        up[f[:i] + f[i + 1:]].discard(f)
    return len(alive) == 1


def collapse(K: SimplicialComplex, restarts: int = 32, seed: int = 0) -> Collapse:
    """Search for a sequence of elementary collapses down to a single vertex.

    Each pass collapses free pairs whose coface has the highest available
    dimension.  The first pass is in sorted order, later ones shuffle ties
    with seeded generators.  ``Unknown`` proves nothing.
    """
    if not K:
        raise ValueError("cannot collapse the empty complex")
    faces = list(K.faces())
    for r in range(max(1, restarts)):
        rng = None if r == 0 else random.Random(seed * 1_000_003 + r)
        if _collapse_once(faces, rng):
            return Collapse.COLLAPSIBLE
    return Collapse.UNKNOWN


# -- ladders and barycentric regions ------------------------------------------

@dataclass(frozen=True)
class LadderParams:
    """Thresholds ε0 < δ0 < ε1 < δ1 < ... < εm < δm < 1."""
    m: int
    epsilons: tuple[Fraction, ...]
    deltas: tuple[Fraction, ...]

    def __post_init__(self):
        eps = tuple(Fraction(e) for e in self.epsilons)
        dels = tuple(Fraction(d) for d in self.deltas)
        if len(eps) != self.m + 1 or len(dels) != self.m + 1:
            raise InvalidParams("need m+1 epsilons and m+1 deltas")
        seq = [x for pair in zip(eps, dels) for x in pair]
        if seq[0] <= 0 or seq[-1] >= 1 or any(a >= b for a, b in zip(seq, seq[1:])):
            raise InvalidParams("thresholds must interleave strictly inside (0, 1)")
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "deltas", dels)

    @classmethod
    def geometric(cls, m: int, eta=Fraction(1, 10)) -> "LadderParams":
        eta = Fraction(eta)
        if not 0 < eta < 1:
            raise InvalidParams("eta must lie in (0, 1)")
        if m < 0:
            raise InvalidParams("m must be non-negative")
        return cls(m, tuple(eta ** (2 * (m - i) + 2) for i in range(m + 1)),
                   tuple(eta ** (2 * (m - i) + 1) for i in range(m + 1)))


@dataclass(frozen=True)
class BaryPoint:
    simplex: Simplex
    coords: Mapping[int, Fraction]

    def __post_init__(self):
        K = tuple(sorted(self.simplex))
        coords = {int(v): Fraction(t) for v, t in self.coords.items() if t}
        if not set(coords) <= set(K):
            raise ValueError("support must lie in the simplex")
        if any(t < 0 for t in coords.values()):
            raise ValueError("barycentric coordinates must be non-negative")
        if sum(coords.values()) != 1:
            raise ValueError("barycentric coordinates must sum to 1")
        object.__setattr__(self, "simplex", K)
        object.__setattr__(self, "coords", coords)

    def __getitem__(self, v: int) -> Fraction:
        return self.coords.get(v, Fraction(0))


def membership_K_B(x: BaryPoint, B: Iterable[int], core_: Iterable[int], delta, eps) -> bool:
    """x ∈ K_B(δ, ε), or x ∈ K_B(ε) when ``delta`` is None."""
    I = set(B)
    if not I <= set(x.simplex):
        raise FlagMismatch(f"{tuple(sorted(I))} is not a face of {x.simplex}")
    if delta is not None and not sum(x[v] for v in core_) > delta:
        return False
    if not sum(x[v] for v in I) > 1 - Fraction(eps):
        return False
    inner = min(x[v] for v in I)
    outer = max((x[v] for v in x.simplex if v not in I), default=None)
    return outer is None or inner > outer


def _check_flag(flag: Sequence[Iterable[int]], M: MarkedComplex) -> list[Simplex]:
    out = [tuple(sorted(B)) for B in flag]
    if not out:
        raise NotAFlag("empty flag")
    for B in out:
        if B not in M.subdivision or not M.in_S_hat(B):
            raise NotAFlag(f"{B} is not a simplex of the marked subcomplex")
    for a, b in zip(out, out[1:]):
        if not set(b) < set(a):
            raise NotAFlag(f"{b} is not a proper face of {a}")
    return out


def z_nonempty(flag, seq: Sequence[tuple[int, int]], M: MarkedComplex, P: LadderParams | None = None) -> bool:
    """Z_K is non-empty iff B_mu ≻ B_nu forces j_mu > i_nu."""
    Bs = _check_flag(flag, M)
    if len(seq) != len(Bs):
        raise NotAFlag("need one (i, j) pair per flag member")
    if P is not None and any(not (0 <= i <= P.m and 0 <= j <= P.m) for i, j in seq):
        raise InvalidParams(f"indices must lie in 0..{P.m}")
    for mu, Bm in enumerate(Bs):
        for nu, Bn in enumerate(Bs):
            if strictly_succ(Bm, Bn, M) and not seq[mu][1] > seq[nu][0]:
                return False
    return True


def in_Z_K(x: BaryPoint, flag, seq, M: MarkedComplex, P: LadderParams) -> bool:
    return all(membership_K_B(x, B, core(B, M), P.deltas[i], P.epsilons[j])
               for B, (i, j) in zip(flag, seq))


def z_witness(flag, seq, M: MarkedComplex, K: Iterable[int], P: LadderParams,
              construction: str = "layered") -> BaryPoint:
    """A rational point of Z_K(i0, j0, ..., ik, jk), checked before it is returned.

    ``layered`` places each core's δ mass on the core vertex lying in the
    deepest flag member and raises coordinates layer by layer, so every
    domination inequality is strict.  ``paper`` follows the three-step recipe
    with the last core index; it is kept for comparison and can be rejected.
    """
    Bs = _check_flag(flag, M)
    if not z_nonempty(Bs, seq, M, P):
        raise CriterionFails("the index sequence violates the ≻ criterion")
    J = tuple(sorted(K))
    if not set(Bs[0]) <= set(J):
        raise FlagMismatch(f"{Bs[0]} is not a face of {J}")
    k = len(Bs) - 1
    gamma = [P.epsilons[0] * (nu + 1) / (100 * (k + 3)) for nu in range(k + 2)]
    cores = [core(B, M) for B in Bs]
    omega = M.flag_of(Bs[k])[-1]
    if construction == "layered":
        t = _layered(J, Bs, cores, seq, P, gamma)
    elif construction == "paper":
        t = _paper(J, Bs, cores, seq, M, P, gamma)
    else:
        raise ValueError(f"unknown construction {construction!r}")
    t[omega] = 1 - sum(v for x, v in t.items() if x != omega)
    if t[omega] <= 0:
        raise WitnessRejected("the remaining mass is not positive")
    x = BaryPoint(J, t)
    if not in_Z_K(x, Bs, seq, M, P):
        raise WitnessRejected("constructed point fails a membership test")
    return x


def _layered(J, Bs, cores, seq, P, gamma) -> dict[int, Fraction]:
    k = len(Bs) - 1
    depth = {x: max((lam for lam, B in enumerate(Bs) if x in B), default=-1) for x in J}
    need: dict[int, Fraction] = {}
    for nu, C in enumerate(cores):
        w = max(C, key=lambda x: (depth[x], x))
        need[w] = max(need.get(w, Fraction(0)), P.deltas[seq[nu][0]])
    t: dict[int, Fraction] = {}
    floor = Fraction(0)
    for lam in range(-1, k + 1):
        layer = [x for x in J if depth[x] == lam]
        for x in layer:
            t[x] = max(need.get(x, Fraction(0)), floor) + gamma[lam + 1]
        if layer:
            floor = max(t[x] for x in layer)
    return t


def _paper(J, Bs, cores, seq, M, P, gamma) -> dict[int, Fraction]:
    k = len(Bs) - 1
    t: dict[int, Fraction] = {}
    ell = set()
    for nu, C in enumerate(cores):
        l_nu = C[-1]
        ell.add(l_nu)
        t[l_nu] = max(t.get(l_nu, Fraction(0)), P.deltas[seq[nu][0]])
    for x in J:
        if x not in Bs[0]:
            t[x] = gamma[0]
    for nu in range(1, k + 1):
        below = [P.deltas[seq[mu][0]] for mu in range(k + 1) if strictly_succ(Bs[nu], Bs[mu], M)]
        for x in Bs[nu - 1]:
            if x not in ell and x not in Bs[nu]:
                t[x] = gamma[nu] + max(below, default=0)
    top = max(P.deltas[i] for i, _ in seq)
    for x in Bs[k]:
        if x not in ell:
            t[x] = gamma[k + 1] + top
    return t
