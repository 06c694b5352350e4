"""Finite abstract simplicial complexes over integer vertex ids.

A simplex is a strictly increasing tuple of non-negative ints.  A complex
stores only its inclusion-maximal simplices; faces are enumerated on
demand and cached.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .errors import DimensionLimit, EmptyComplex, ParseError

Simplex = tuple[int, ...]
Flag = tuple[Simplex, ...]

MAX_DIM = 12


def simplex(vertices: Iterable[int]) -> Simplex:
    """Validate and canonicalize a vertex collection into a Simplex."""
    vs = tuple(sorted(vertices))
    if not vs:
        raise ValueError("a simplex needs at least one vertex")
    for a, b in zip(vs, vs[1:]):
        if a == b:
            raise ValueError(f"duplicate vertex {a} in simplex")
    if vs[0] < 0:
        raise ValueError("vertex ids must be non-negative")
    if len(vs) - 1 > MAX_DIM:
        raise DimensionLimit(f"simplex of dimension {len(vs) - 1} exceeds limit {MAX_DIM}")
    return vs


def _antichain(simplices: Iterable[Simplex]) -> list[Simplex]:
    """Keep only the inclusion-maximal members."""
    uniq = sorted(set(simplices), key=lambda s: (-len(s), s))
    kept: list[Simplex] = []
    by_vertex: dict[int, list[int]] = {}
    for s in uniq:
        rare = min(s, key=lambda v: len(by_vertex.get(v, ())))
        cands = by_vertex.get(rare, ())
        sset = set(s)
        if any(sset.issubset(kept[i]) for i in cands if len(kept[i]) > len(s)):
            continue
        idx = len(kept)
        kept.append(s)
        for v in s:
            by_vertex.setdefault(v, []).append(idx)
    kept.sort()
    return kept


class SimplicialComplex:
    """Immutable finite simplicial complex given by its maximal simplices."""

    def __init__(self, maximal: Iterable[Sequence[int]] = (), vertex_labels: Mapping[int, str] | None = None,
                 *, reduced: bool = False):
        simplices = [simplex(s) for s in maximal]
        self.maximal: tuple[Simplex, ...] = tuple(sorted(set(simplices)) if reduced else _antichain(simplices))
        self.vertex_labels = dict(vertex_labels) if vertex_labels else {}

    def __repr__(self):
        return f"SimplicialComplex(f_vector={self.f_vector})"

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.maximal == other.maximal

    def __hash__(self):
        return hash(self.maximal)

    def __contains__(self, s) -> bool:
        s = tuple(sorted(s))
        return s in self._face_set

    def __bool__(self):
        return bool(self.maximal)

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.maximal), default=-1)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for s in self.maximal for v in s}))

    @cached_property
    def _faces_by_dim(self) -> tuple[tuple[Simplex, ...], ...]:
        buckets: list[set[Simplex]] = [set() for _ in range(self.dim + 1)]
        for s in self.maximal:
            buckets[len(s) - 1].add(s)
        # top-down: faces of a face set are generated once per distinct face
        for d in range(self.dim, 0, -1):
            below = buckets[d - 1]
            for s in buckets[d]:
                for i in range(len(s)):
                    below.add(s[:i] + s[i + 1:])
        return tuple(tuple(sorted(b)) for b in buckets)

    @cached_property
    def _face_set(self) -> frozenset:
        return frozenset(f for fs in self._faces_by_dim for f in fs)

    def faces(self, dim: int | None = None) -> tuple[Simplex, ...]:
        """Faces of the given dimension, or all faces ordered by (dim, lex)."""
        if dim is None:
            return tuple(f for fs in self._faces_by_dim for f in fs)
        if dim < 0 or dim > self.dim:
            return ()
        return self._faces_by_dim[dim]

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self._faces_by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    @cached_property
    def face_index(self) -> dict[Simplex, int]:
        """Canonical face ids: position in the (dim, lex) ordering."""
        return {f: i for i, f in enumerate(self.faces())}

    def relabel(self, mapping: Mapping[int, int]) -> "SimplicialComplex":
        labels = {mapping[v]: t for v, t in self.vertex_labels.items()}
        return SimplicialComplex((tuple(mapping[v] for v in s) for s in self.maximal), labels)


def build_complex(maximal: Iterable[Sequence[int]], vertex_labels: Mapping[int, str] | None = None) -> SimplicialComplex:
    maximal = list(maximal)
    if not maximal:
        raise EmptyComplex("cannot build a complex from no simplices")
    return SimplicialComplex(maximal, vertex_labels)


def is_face(a: Simplex, b: Simplex) -> bool:
    """True when a is a (not necessarily proper) face of b."""
    return len(a) <= len(b) and set(a).issubset(b)


def barycentric_subdivision(K: SimplicialComplex) -> tuple[SimplicialComplex, dict[int, Simplex]]:
    """Subdivide K.  New vertex j is the barycenter of face ``centers[j]``.

    The new simplices are the flags of faces of K.
    """
    if not K:
        raise EmptyComplex("cannot subdivide the empty complex")
    index = K.face_index
    centers = {i: f for f, i in index.items()}
    chains = set()
    for top in K.maximal:
        for perm in permutations(top):
            chains.add(tuple(sorted(index[tuple(sorted(perm[j:]))] for j in range(len(perm)))))
    labels = {i: " ".join(map(str, f)) for i, f in centers.items()}
    return SimplicialComplex(chains, labels, reduced=True), centers


def flags(K: SimplicialComplex, k: int) -> list[Flag]:
    """All chains Δ0 ⊋ Δ1 ⊋ … ⊋ Δk of faces of K."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out: list[Flag] = []

    def extend(chain: list[Simplex]):
        if len(chain) == k + 1:
            out.append(tuple(chain))
            return
        last = chain[-1]
        for size in range(len(last) - 1, 0, -1):
            for sub in combinations(last, size):
                chain.append(sub)
                extend(chain)
                chain.pop()

    for f in K.faces():
        if len(f) - 1 >= k:
            extend([f])
    return out


def skeleton(K: SimplicialComplex, k: int) -> SimplicialComplex:
    if k < 0:
        raise ValueError("k must be non-negative")
    if k >= K.dim:
        return K
    keep = [s for s in K.maximal if len(s) - 1 < k]
    return SimplicialComplex(list(K.faces(k)) + keep, K.vertex_labels, reduced=True)


def subcomplex_on(K: SimplicialComplex, maximal: Iterable[Simplex]) -> SimplicialComplex:
    return SimplicialComplex(maximal, {v: t for v, t in K.vertex_labels.items()})


# -- text format ---------------------------------------------------------

def parse_complex(text: str) -> SimplicialComplex:
    """One maximal simplex per line, whitespace separated ids, '#' comments."""
    simplices = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            simplices.append(simplex(int(tok) for tok in line.split()))
        except ValueError as exc:
            raise ParseError(f"bad simplex {line!r}: {exc}", lineno) from None
    return build_complex(simplices)


def read_complex(path) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


def format_complex(K: SimplicialComplex) -> str:
    return "".join(" ".join(map(str, s)) + "\n" for s in K.maximal)
