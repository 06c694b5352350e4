"""Marked complexes: hard/soft subsimplex pairs, cores, the order ≽, ranks.

Simplices of the barycentric subdivision R̂ are vertex tuples whose ids are
the canonical face ids of R (``R.face_index``).  The flag of such a simplex
lists its faces of R by decreasing dimension.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

from .errors import IncompatibleSigns, ParseError
from .simplicial import Simplex, SimplicialComplex, barycentric_subdivision, is_face

SIGNS = "+0-"


@dataclass(frozen=True, eq=False)
class MarkedComplex:
    R: SimplicialComplex
    S_faces: frozenset
    hardness: Mapping[tuple[Simplex, Simplex], bool] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "S_faces", frozenset(tuple(sorted(f)) for f in self.S_faces))
        faces = set(self.R.faces())
        missing = [f for f in self.S_faces if f not in faces]
        if missing:
            raise ValueError(f"S_faces contains non-faces of R: {missing[:3]}")
        for sup in self.S_faces:
            for sub in proper_faces(sup):
                if sub in self.S_faces and (sub, sup) not in self.hardness:
                    raise ValueError(f"no hard/soft mark for pair {sub} < {sup}")

    def is_hard(self, sub: Simplex, sup: Simplex) -> bool:
        if sub not in self.S_faces or sup not in self.S_faces:
            return False
        return bool(self.hardness.get((sub, sup), False))

    @cached_property
    def subdivision(self) -> SimplicialComplex:
        return barycentric_subdivision(self.R)[0]

    @cached_property
    def centers(self) -> dict[int, Simplex]:
        return {i: f for f, i in self.R.face_index.items()}

    def flag_of(self, B: Iterable[int]) -> tuple[int, ...]:
        """Vertex ids of B ordered by decreasing dimension of their faces."""
        c = self.centers
        ids = sorted(B, key=lambda j: (-len(c[j]), c[j]))
        for a, b in zip(ids, ids[1:]):
            if not (len(c[b]) < len(c[a]) and is_face(c[b], c[a])):
                raise ValueError(f"{tuple(B)} is not a simplex of the subdivision")
        return tuple(ids)

    def in_S_hat(self, B: Iterable[int]) -> bool:
        return self.centers[self.flag_of(B)[0]] in self.S_faces

    @cached_property
    def S_hat(self) -> tuple[Simplex, ...]:
        return tuple(B for B in self.subdivision.faces() if self.in_S_hat(B))


def proper_faces(s: Simplex):
    for size in range(len(s) - 1, 0, -1):
        yield from combinations(s, size)


def mark_all_soft(R: SimplicialComplex, S_faces: Iterable[Simplex]) -> MarkedComplex:
    S = frozenset(tuple(sorted(f)) for f in S_faces)
    marks = {(sub, sup): False for sup in S for sub in proper_faces(sup) if sub in S}
    return MarkedComplex(R, S, marks)


def mark_from_signs(R: SimplicialComplex, S_faces: Iterable[Simplex], signs: Mapping[Simplex, str]) -> MarkedComplex:
    """A pair is hard iff both faces carry the same sign vector."""
    S = frozenset(tuple(sorted(f)) for f in S_faces)
    signs = {tuple(sorted(f)): v for f, v in signs.items()}
    lengths = {len(v) for v in signs.values()}
    if len(lengths) > 1 or any(ch not in SIGNS for v in signs.values() for ch in v):
        raise IncompatibleSigns("sign vectors must be equal-length strings over '+0-'")
    for f in S:
        if f not in signs:
            raise IncompatibleSigns(f"no sign vector for face {f}")
    marks = {}
    for sup in S:
        for sub in proper_faces(sup):
            if sub not in S:
                continue
            for a, b in zip(signs[sup], signs[sub]):
                if a != "0" and b not in ("0", a):
                    raise IncompatibleSigns(f"face {sub} has sign {signs[sub]} inside {sup} of sign {signs[sup]}")
            marks[(sub, sup)] = signs[sub] == signs[sup]
    return MarkedComplex(R, S, marks)


def core(B: Iterable[int], M: MarkedComplex) -> tuple[int, ...]:
    """Longest prefix j0..jp of B's flag whose members are pairwise hard."""
    flag = M.flag_of(B)
    c = M.centers
    if c[flag[0]] not in M.S_faces:
        return ()
    out = [flag[0]]
    for j in flag[1:]:
        if all(M.is_hard(c[j], c[i]) for i in out):
            out.append(j)
        else:
            break
    return tuple(out)


def succ(Bp: Iterable[int], B: Iterable[int], M: MarkedComplex) -> bool:
    """B' ≽ B: equal, or B' a proper face of B with disjoint cores.

    Only simplices of Ŝ are ordered; anything else compares False unless equal.
    """
    Bp, B = tuple(sorted(Bp)), tuple(sorted(B))
    if Bp == B:
        return True
    if len(Bp) >= len(B) or not set(Bp) < set(B):
        return False
    if not (M.in_S_hat(Bp) and M.in_S_hat(B)):
        return False
    return not set(core(Bp, M)) & set(core(B, M))


def strictly_succ(Bp, B, M) -> bool:
    return tuple(sorted(Bp)) != tuple(sorted(B)) and succ(Bp, B, M)


@dataclass(frozen=True)
class Ranks:
    total: int
    local: dict
    element: dict


def ranks(M: MarkedComplex) -> Ranks:
    """Longest ≻-chain lengths, counted in steps.

    ``element[B]`` is the longest chain whose top is B, ``local[B]`` the rank
    of the induced poset on S_B, ``total`` the rank of Ŝ.
    """
    Shat = M.S_hat
    cores = {B: set(core(B, M)) for B in Shat}
    inS = set(Shat)
    # B ≻ X iff B is a proper face of X with disjoint cores
    below: dict[Simplex, list[Simplex]] = {B: [] for B in Shat}
    for X in Shat:
        for F in proper_faces(X):
            if F in inS and not cores[F] & cores[X]:
                below[F].append(X)
    element = {}
    for B in sorted(Shat, key=len, reverse=True):
        element[B] = max((element[X] + 1 for X in below[B]), default=0)
    local = {}
    for B in Shat:
        members = [F for F in ((B,) + tuple(proper_faces(B))) if F in inS]
        mset = set(members)
        h = {}
        for F in sorted(members, key=len, reverse=True):
            h[F] = max((h[X] + 1 for X in below[F] if X in mset), default=0)
        local[B] = max(h.values(), default=0)
    return Ranks(max(element.values(), default=0), local, element)


# -- text formats ---------------------------------------------------------

def parse_marking(text: str, R: SimplicialComplex, S_faces: Iterable[Simplex]) -> MarkedComplex:
    """Lines ``hard a b`` / ``soft a b``: face a is hard/soft in face b (face ids)."""
    faces = R.faces()
    S = frozenset(tuple(sorted(f)) for f in S_faces)
    marks = {(sub, sup): False for sup in S for sub in proper_faces(sup) if sub in S}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("hard", "soft"):
            raise ParseError(f"expected 'hard|soft a b', got {line!r}", lineno)
        try:
            sub, sup = faces[int(parts[1])], faces[int(parts[2])]
        except (ValueError, IndexError):
            raise ParseError(f"bad face id in {line!r}", lineno) from None
        if not (len(sub) < len(sup) and is_face(sub, sup)):
            raise ParseError(f"face {parts[1]} is not a proper face of {parts[2]}", lineno)
        marks[(sub, sup)] = parts[0] == "hard"
    return MarkedComplex(R, S, marks)


def format_marking(M: MarkedComplex) -> str:
    idx = M.R.face_index
    lines = sorted((idx[sub], idx[sup], hard) for (sub, sup), hard in M.hardness.items())
    return "".join(f"{'hard' if h else 'soft'} {a} {b}\n" for a, b, h in lines)


def parse_signs(text: str, R: SimplicialComplex) -> dict[Simplex, str]:
    """Lines ``face <id> signs +0-...``."""
    faces = R.faces()
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "face" or parts[2] != "signs":
            raise ParseError(f"expected 'face <id> signs <vector>', got {line!r}", lineno)
        try:
            f = faces[int(parts[1])]
        except (ValueError, IndexError):
            raise ParseError(f"bad face id in {line!r}", lineno) from None
        if any(ch not in SIGNS for ch in parts[3]):
            raise ParseError(f"sign vector {parts[3]!r} is not over '+0-'", lineno)
        out[f] = parts[3]
    return out


def format_signs(signs: Mapping[Simplex, str], R: SimplicialComplex) -> str:
    idx = R.face_index
    return "".join(f"face {idx[f]} signs {v}\n" for f, v in sorted(signs.items(), key=lambda kv: idx[kv[0]]))
