"""Exact integer simplicial homology.

Boundary matrices use the ascending-vertex orientation.  Ranks and torsion
come from a sparse elimination over unit pivots followed by a dense Smith
normal form of whatever is left; both steps are unimodular, so the
invariant factors are those of the full matrix.
"""
from __future__ import annotations

import heapq
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import EmptyComplex
from .simplicial import Simplex, SimplicialComplex


@dataclass(frozen=True)
class BettiVector:
    free: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        tors = tuple(tuple(t) for t in self.torsion) or tuple(() for _ in self.free)
        if len(tors) != len(self.free):
            raise ValueError("torsion must have one entry per degree")
        object.__setattr__(self, "torsion", tors)

    def __getitem__(self, k):
        return self.free[k] if 0 <= k < len(self.free) else 0

    def __len__(self):
        return len(self.free)

    @property
    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.free))

    def padded(self, length: int) -> "BettiVector":
        """Truncate or zero-pad to the given number of degrees."""
        free = (self.free + (0,) * length)[:length]
        tors = (self.torsion + ((),) * length)[:length]
        return BettiVector(free, tors)

    def as_dict(self) -> dict:
        return {"betti": list(self.free), "torsion": [list(t) for t in self.torsion]}


@dataclass(frozen=True)
class BoundaryMatrix:
    """Matrix of ∂_k: rows are (k-1)-faces, columns are k-faces."""
    rows: tuple[Simplex, ...]
    cols: tuple[Simplex, ...]
    columns: tuple[dict, ...]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * len(self.cols) for _ in self.rows]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out


def boundary_matrix(K: SimplicialComplex, k: int) -> BoundaryMatrix:
    return _boundary(K.faces(k - 1) if k > 0 else (), K.faces(k))


def _boundary(rows, cols) -> BoundaryMatrix:
    if not rows:
        return BoundaryMatrix((), tuple(cols), tuple({} for _ in cols))
    index = {f: i for i, f in enumerate(rows)}
    columns = []
    for s in cols:
        col = {}
        for i in range(len(s)):
            col[index[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
        columns.append(col)
    return BoundaryMatrix(tuple(rows), tuple(cols), tuple(columns))


# -- Smith normal form -----------------------------------------------------

def _smallest(A, cells):
    best = None
    for i, j in cells:
        v = A[i][j]
        if v and (best is None or (abs(v), i, j) < best):
            best = (abs(v), i, j)
    return None if best is None else best[1:]


def _swap(A, t, r, c):
    if r != t:
        A[t], A[r] = A[r], A[t]
    if c != t:
        for row in A:
            row[t], row[c] = row[c], row[t]


def smith_normal_form(M) -> tuple[tuple[int, ...], int]:
    """Invariant factors d1 | d2 | … of an integer matrix, and its rank.

    Pivot: smallest non-zero absolute value, ties broken by lowest (row, col).
    """
    A = [[int(v) for v in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    factors = []
    t = 0
    while t < min(m, n):
        piv = _smallest(A, ((i, j) for i in range(t, m) for j in range(t, n)))
        if piv is None:
            break
        _swap(A, t, *piv)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    Ai, At = A[i], A[t]
                    for j in range(t, n):
                        if At[j]:
                            Ai[j] -= q * At[j]
                    clean = clean and not Ai[t]
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A[t:]:
                        if row[t]:
                            row[j] -= q * row[t]
                    clean = clean and not A[t][j]
            if not clean:
                cells = [(i, t) for i in range(t, m)] + [(t, j) for j in range(t + 1, n)]
                _swap(A, t, *_smallest(A, cells))
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        factors.append(abs(A[t][t]))
        t += 1
    return tuple(factors), len(factors)


# -- sparse unit-pivot elimination ------------------------------------------

def _reduce(columns) -> tuple[int, tuple[int, ...]]:
    """Rank and non-unit invariant factors of a sparse integer matrix."""
    cols = {j: dict(c) for j, c in enumerate(columns) if c}
    rows: dict[int, set[int]] = {}
    for j, c in cols.items():
        for i in c:
            rows.setdefault(i, set()).add(j)
    heap = [(len(s), i) for i, s in rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, r = heapq.heappop(heap)
        rset = rows.get(r)
        if rset is None or len(rset) != cnt:
            continue
        unit = [c for c in rset if cols[c][r] in (1, -1)]
        if not unit:
            continue
        c = min(unit, key=lambda j: (len(cols[j]), j))
        pc = cols.pop(c)
        a = pc[r]
        touched = set(pc)
        for c2 in list(rset):
            if c2 == c:
                continue
            col2 = cols[c2]
            f = col2[r] * a
            for rr, v in pc.items():
                nv = col2.get(rr, 0) - f * v
                if nv:
                    if rr not in col2:
                        rows[rr].add(c2)
                    col2[rr] = nv
                else:
                    col2.pop(rr, None)
                    rows[rr].discard(c2)
            if not col2:
                del cols[c2]
        for rr in pc:
            rows[rr].discard(c)
        del rows[r]
        touched.discard(r)
        rank += 1
        for rr in touched:
            s = rows.get(rr)
            if s is not None:
                if s:
                    heapq.heappush(heap, (len(s), rr))
                else:
                    del rows[rr]
    if not cols:
        return rank, ()
    rid = {r: i for i, r in enumerate(sorted({r for c in cols.values() for r in c}))}
    dense = [[0] * len(cols) for _ in rid]
    for j, c in enumerate(sorted(cols)):
        for r, v in cols[c].items():
            dense[rid[r]][j] = v
    factors, rk = smith_normal_form(dense)
    return rank + rk, tuple(f for f in factors if f > 1)


def _reduce_degree(args):
    rows, cols = args
    return _reduce(_boundary(rows, cols).columns)


def _workers() -> int:
    raw = os.environ.get("TELESCOPE_THREADS", "1").strip() or "1"
    n = int(raw)
    if n < 0:
        raise ValueError("TELESCOPE_THREADS must be >= 0")
    if n == 0:
        return os.cpu_count() or 1
    return n


def betti(K: SimplicialComplex, max_degree: int | None = None, *, workers: int | None = None,
          parallel_threshold: int = 50_000) -> BettiVector:
    """Betti numbers and torsion of K over the integers.

    With ``max_degree`` only degrees 0..max_degree are computed.
    """
    if not K:
        raise EmptyComplex("homology of the empty complex is not defined here")
    faces = [K.faces(d) for d in range(K.dim + 1)]
    return betti_from_faces(faces, max_degree, workers=workers, parallel_threshold=parallel_threshold)


def betti_from_faces(faces, max_degree: int | None = None, *, workers: int | None = None,
                     parallel_threshold: int = 50_000) -> BettiVector:
    """Homology from explicit face lists: ``faces[d]`` holds the sorted d-simplices.

    The lists must be closed under taking faces up to the highest dimension given.
    """
    dim = len(faces) - 1
    top = dim if max_degree is None else min(dim, max_degree)
    degrees = list(range(1, min(top + 1, dim) + 1))
    workers = _workers() if workers is None else workers
    jobs = [(faces[k - 1], faces[k]) for k in degrees]
    if workers > 1 and len(degrees) > 1 and sum(map(len, faces)) >= parallel_threshold:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_reduce_degree, jobs))
    else:
        results = [_reduce_degree(job) for job in jobs]
    ranks = dict(zip(degrees, results))
    free, torsion = [], []
    for k in range(top + 1):
        rk = ranks[k][0] if k in ranks else 0
        rk1, tors = ranks.get(k + 1, (0, ()))
        free.append(len(faces[k]) - rk - rk1)
        torsion.append(tuple(sorted(tors)))
    return BettiVector(tuple(free), tuple(torsion))


def reduced_betti(K: SimplicialComplex, max_degree: int | None = None) -> BettiVector:
    b = betti(K, max_degree)
    return BettiVector((b.free[0] - 1,) + b.free[1:], b.torsion)


def euler_characteristic(K: SimplicialComplex) -> int:
    return K.euler_characteristic()


def connected_components(K: SimplicialComplex) -> list[SimplicialComplex]:
    parent = {v: v for v in K.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s in K.maximal:
        r0 = find(s[0])
        for v in s[1:]:
            rv = find(v)
            if rv != r0:
                parent[max(rv, r0)] = min(rv, r0)
                r0 = min(rv, r0)
    groups: dict[int, list[Simplex]] = {}
    for s in K.maximal:
        groups.setdefault(find(s[0]), []).append(s)
    labels = K.vertex_labels
    out = []
    for root in sorted(groups):
        simplices = groups[root]
        vs = {v for s in simplices for v in s}
        out.append(SimplicialComplex(simplices, {v: labels[v] for v in vs if v in labels}, reduced=True))
    return out


def homology_report(K: SimplicialComplex) -> dict:
    b = betti(K)
    return {**b.as_dict(), "euler": K.euler_characteristic()}
