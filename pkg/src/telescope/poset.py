"""Finite posets, order complexes, nerves and poset-map fibres."""
from __future__ import annotations

from typing import Iterable, Mapping

from .errors import NotMonotone, ParseError, UnknownElement
from .simplicial import SimplicialComplex


class Poset:
    """A finite strict partial order on integer ids.

    ``relation`` holds pairs (a, b) meaning a < b.  The transitive closure
    is taken at construction and cycles are rejected.
    """

    def __init__(self, elements: Iterable[int], relation: Iterable[tuple[int, int]] = ()):
        self.elements = tuple(sorted(set(elements)))
        elems = set(self.elements)
        above: dict[int, set[int]] = {e: set() for e in self.elements}
        for a, b in relation:
            if a not in elems or b not in elems:
                raise UnknownElement(f"relation ({a}, {b}) mentions an unknown element")
            above[a].add(b)
        # transitive closure by DFS from each element
        closed = {}
        for e in self.elements:
            seen, stack = set(), list(above[e])
            while stack:
                x = stack.pop()
                if x not in seen:
                    seen.add(x)
                    stack.extend(above[x])
            if e in seen:
                raise ValueError(f"relation has a cycle through {e}")
            closed[e] = frozenset(seen)
        self._above = closed
        self._below = {e: frozenset(a for a in self.elements if e in closed[a]) for e in self.elements}

    @property
    def relation(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a, ups in self._above.items() for b in ups)

    def less(self, a: int, b: int) -> bool:
        return b in self._above[a]

    def leq(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b)

    def up(self, a: int) -> frozenset[int]:
        return self._above[a]

    def down(self, a: int) -> frozenset[int]:
        return self._below[a]

    def down_set(self, q: int) -> frozenset[int]:
        if q not in self._above:
            raise UnknownElement(q)
        return self._below[q] | {q}

    def covers(self) -> dict[int, list[int]]:
        """Upper covers of each element."""
        out = {}
        for a in self.elements:
            ups = self._above[a]
            out[a] = sorted(b for b in ups if not any(b in self._above[c] for c in ups))
        return out

    def restrict(self, subset: Iterable[int]) -> "Poset":
        sub = set(subset)
        return Poset(sub, ((a, b) for a in sub for b in self._above[a] if b in sub))

    def chains(self) -> list[tuple[int, ...]]:
        """All non-empty chains, each listed bottom-up."""
        out = []

        def grow(chain):
            out.append(tuple(chain))
            for b in sorted(self._above[chain[-1]]):
                chain.append(b)
                grow(chain)
                chain.pop()

        for e in self.elements:
            grow([e])
        return out

    def __repr__(self):
        return f"Poset({len(self.elements)} elements, {len(self.relation)} relations)"


def face_poset(K: SimplicialComplex) -> tuple[Poset, dict[int, tuple[int, ...]]]:
    """Faces of K ordered by inclusion, with ids from ``K.face_index``."""
    index = K.face_index
    rel = []
    for f, i in index.items():
        for j in range(len(f)):
            sub = f[:j] + f[j + 1:]
            if sub:
                rel.append((index[sub], i))
    return Poset(index.values(), rel), {i: f for f, i in index.items()}


def order_complex(P: Poset) -> SimplicialComplex:
    """Simplices are the chains of P; maximal ones are saturated min-to-max chains."""
    cov = P.covers()
    minimal = [e for e in P.elements if not P.down(e)]
    out = []

    def walk(chain):
        ups = cov[chain[-1]]
        if not ups:
            out.append(tuple(chain))
            return
        for b in ups:
            chain.append(b)
            walk(chain)
            chain.pop()

    for e in minimal:
        walk([e])
    return SimplicialComplex(out, reduced=True)


class Cover:
    """A finite family of finite sets indexed by non-negative ints."""

    def __init__(self, sets: Mapping[int, Iterable]):
        self.sets = {int(i): frozenset(s) for i, s in sets.items()}

    @property
    def index(self) -> tuple[int, ...]:
        return tuple(sorted(self.sets))

    def ground(self) -> frozenset:
        return frozenset().union(*self.sets.values()) if self.sets else frozenset()


def nerve(C: Cover) -> SimplicialComplex:
    """σ ⊂ I is a simplex iff the sets indexed by σ share an element."""
    idx = [i for i in C.index if C.sets[i]]
    out = []

    def grow(sigma, common, start):
        extended = False
        for pos in range(start, len(idx)):
            i = idx[pos]
            inter = common & C.sets[i]
            if inter:
                extended = True
                grow(sigma + (i,), inter, pos + 1)
        if not extended:
            out.append(sigma)

    for pos, i in enumerate(idx):
        grow((i,), C.sets[i], pos + 1)
    return SimplicialComplex(out)


def flag_nerve(K: SimplicialComplex) -> SimplicialComplex:
    """Nerve of the cover of K by its closed faces, in the flag sense.

    A set of faces spans a simplex iff it is a chain under inclusion, so this
    is the order complex of the face poset.  Vertex ids are face ids.
    """
    P, centers = face_poset(K)
    N = order_complex(P)
    N.vertex_labels.update({i: " ".join(map(str, f)) for i, f in centers.items()})
    return N


def poset_fiber(f: Mapping[int, int], P: Poset, Q: Poset, q: int) -> SimplicialComplex:
    """Order complex of f⁻¹(Q≤q), after checking that f is a poset map."""
    for x in P.elements:
        if x not in f:
            raise UnknownElement(f"map undefined on {x}")
        if f[x] not in Q.elements:
            raise UnknownElement(f"image {f[x]} not in target poset")
    for a in P.elements:
        for b in P.up(a):
            if not Q.leq(f[a], f[b]):
                raise NotMonotone(f"{a} < {b} but f({a}) = {f[a]} is not <= f({b}) = {f[b]}")
    if q not in Q.elements:
        raise UnknownElement(q)
    down = Q.down_set(q)
    pre = [x for x in P.elements if f[x] in down]
    return order_complex(P.restrict(pre))


# -- text formats ---------------------------------------------------------

def parse_poset(text: str, elements: Iterable[int] = ()) -> Poset:
    """Lines ``a < b``; extra isolated elements may be passed explicitly."""
    elems = set(elements)
    rel = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("<")
        if len(parts) != 2:
            raise ParseError(f"expected 'a < b', got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer element in {line!r}", lineno) from None
        elems.update((a, b))
        rel.append((a, b))
    return Poset(elems, rel)


def format_poset(P: Poset) -> str:
    cov = P.covers()
    return "".join(f"{a} < {b}\n" for a in P.elements for b in cov[a])


def parse_cover(text: str) -> Cover:
    """Lines ``i: e1 e2 e3``."""
    sets = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'i: e1 e2 ...', got {line!r}", lineno)
        try:
            sets[int(head)] = [int(t) for t in rest.split()]
        except ValueError:
            raise ParseError(f"non-integer entry in {line!r}", lineno) from None
    return Cover(sets)
