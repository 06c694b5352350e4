"""Finite unions of closed axis-aligned boxes with rational corners.

Exact set comparisons, projections and homology all go through coordinate
compression: the distinct endpoint values on each axis become integer
ranks, and every box is a union of cells of the resulting grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ParseError
from .homology import BettiVector, betti, betti_from_faces
from .simplicial import SimplicialComplex

Box = tuple[tuple[Fraction, Fraction], ...]


def make_box(intervals: Iterable[Sequence]) -> Box:
    out = []
    for lo, hi in intervals:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        out.append((lo, hi))
    if not out:
        raise ValueError("a box needs at least one coordinate")
    return tuple(out)


def _ranks(boxes: Sequence[Box], n: int, extra: Sequence[Box] = ()):
    """Per-axis sorted coordinates and integer rank arrays (lo, hi) of shape (B, n)."""
    coords = [sorted({v for b in list(boxes) + list(extra) for v in b[k]}) for k in range(n)]
    index = [{v: i for i, v in enumerate(c)} for c in coords]
    lo = np.array([[index[k][b[k][0]] for k in range(n)] for b in boxes], dtype=np.int64).reshape(-1, n)
    hi = np.array([[index[k][b[k][1]] for k in range(n)] for b in boxes], dtype=np.int64).reshape(-1, n)
    return coords, lo, hi


def _maximal(boxes: Sequence[Box], n: int) -> list[Box]:
    uniq = sorted(set(boxes))
    if len(uniq) < 2:
        return uniq
    _, lo, hi = _ranks(uniq, n)
    keep = np.ones(len(uniq), dtype=bool)
    chunk = max(1, 4_000_000 // (len(uniq) * n))
    for s in range(0, len(uniq), chunk):
        L, H = lo[s:s + chunk, None, :], hi[s:s + chunk, None, :]
        inside = np.all((lo[None, :, :] <= L) & (H <= hi[None, :, :]), axis=2)
        idx = np.arange(s, min(s + chunk, len(uniq)))
        inside[np.arange(len(idx)), idx] = False
        keep[idx] = ~inside.any(axis=1)
    return [b for b, k in zip(uniq, keep) if k]


@dataclass(frozen=True)
class BoxComplex:
    """The union of finitely many closed boxes in ℝⁿ, stored as a sorted antichain."""
    n: int
    boxes: tuple[Box, ...]

    def __init__(self, n: int, boxes: Iterable = (), *, reduce: bool = True):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        bs = [make_box(b) for b in boxes]
        if any(len(b) != n for b in bs):
            raise ValueError(f"every box must have {n} coordinates")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "boxes", tuple(_maximal(bs, n) if reduce else sorted(set(bs))))

    def __len__(self):
        return len(self.boxes)

    def __bool__(self):
        return bool(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def contains(self, x: Sequence) -> bool:
        x = [Fraction(v) for v in x]
        return any(all(lo <= v <= hi for v, (lo, hi) in zip(x, b)) for b in self.boxes)

    def union(self, other: "BoxComplex") -> "BoxComplex":
        _same_dim(self, other)
        return BoxComplex(self.n, self.boxes + other.boxes)

    def intersection(self, other: "BoxComplex") -> "BoxComplex":
        _same_dim(self, other)
        out = []
        for a in self.boxes:
            for b in other.boxes:
                c = tuple((max(x[0], y[0]), min(x[1], y[1])) for x, y in zip(a, b))
                if all(lo <= hi for lo, hi in c):
                    out.append(c)
        return BoxComplex(self.n, out)

    def volume(self) -> Fraction:
        """Sum of box volumes; equals the union's volume when interiors are disjoint."""
        return sum((math.prod((hi - lo for lo, hi in b), start=Fraction(1)) for b in self.boxes), Fraction(0))

    def bounding_box(self) -> Box:
        return tuple((min(b[k][0] for b in self.boxes), max(b[k][1] for b in self.boxes)) for k in range(self.n))

    # exact point-set comparisons on the common compressed grid
    def _raster(self, coords) -> np.ndarray:
        shape = tuple(max(1, 2 * len(c) - 1) for c in coords)
        grid = np.zeros(shape, dtype=bool)
        index = [{v: i for i, v in enumerate(c)} for c in coords]
        for b in self.boxes:
            grid[tuple(slice(2 * index[k][lo], 2 * index[k][hi] + 1) for k, (lo, hi) in enumerate(b))] = True
        return grid

    def _pair(self, other):
        _same_dim(self, other)
        coords = [sorted({v for b in self.boxes + other.boxes for v in b[k]}) for k in range(self.n)]
        return self._raster(coords), other._raster(coords)

    def same_set(self, other: "BoxComplex") -> bool:
        a, b = self._pair(other)
        return bool(np.array_equal(a, b))

    def subset_of(self, other: "BoxComplex") -> bool:
        a, b = self._pair(other)
        return not bool((a & ~b).any())


def _same_dim(a: BoxComplex, b: BoxComplex):
    if a.n != b.n:
        raise ValueError(f"dimension mismatch {a.n} vs {b.n}")


def project(B: BoxComplex, n: int) -> BoxComplex:
    """Keep the first n coordinates."""
    if not 1 <= n <= B.n:
        raise ValueError(f"cannot keep {n} of {B.n} coordinates")
    return BoxComplex(n, (b[:n] for b in B.boxes))


# -- homology -------------------------------------------------------------

def intersection_graph(B: BoxComplex) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(len(B)))
    if len(B) < 2:
        return G
    _, lo, hi = _ranks(B.boxes, B.n)
    for i in range(len(B) - 1):
        meet = np.all((lo[i] <= hi[i + 1:]) & (lo[i + 1:] <= hi[i]), axis=1)
        G.add_edges_from((i, i + 1 + int(j)) for j in np.flatnonzero(meet))
    return G


def strong_collapse(G: nx.Graph) -> nx.Graph:
    """Repeatedly delete dominated vertices (closed neighbourhood inside another's).

    Deleting a dominated vertex preserves the homotopy type of the clique complex.
    """
    nbr = {v: set(G[v]) | {v} for v in G}
    queue = sorted(nbr)
    queued = set(queue)
    while queue:
        v = queue.pop()
        queued.discard(v)
        if v not in nbr:
            continue
        Nv = nbr[v]
        if any(u != v and Nv <= nbr[u] for u in Nv):
            del nbr[v]
            for w in Nv - {v}:
                nbr[w].discard(v)
                if w not in queued:
                    queue.append(w)
                    queued.add(w)
    H = nx.Graph()
    H.add_nodes_from(nbr)
    H.add_edges_from((v, w) for v, ws in nbr.items() for w in ws if v < w)
    return H


def _nerve_betti(B: BoxComplex, top: int) -> BettiVector:
    G = intersection_graph(B)
    if top == 0:
        if len(B) == 0:
            return BettiVector((0,))
        edges = np.array(list(G.edges()), dtype=np.int64).reshape(-1, 2)
        A = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(len(B), len(B)))
        return BettiVector((connected_components(A, directed=False)[0],))
    H = strong_collapse(G)
    faces: list[list] = [[] for _ in range(top + 2)]
    for clique in nx.enumerate_all_cliques(H):
        if len(clique) > top + 2:
            break
        faces[len(clique) - 1].append(tuple(sorted(clique)))
    while faces and not faces[-1]:
        faces.pop()
    faces = [sorted(f) for f in faces]
    return betti_from_faces(faces, top).padded(top + 1)


def kuhn_complex(B: BoxComplex) -> SimplicialComplex:
    """Triangulate every box on the common grid by the sorted-coordinate rule."""
    n = B.n
    coords, lo, hi = _ranks(B.boxes, n)
    shape = [len(c) for c in coords]
    strides = [math.prod(shape[k + 1:]) for k in range(n)]
    simplices = set()
    for L, H in zip(lo.tolist(), hi.tolist()):
        moving = [k for k in range(n) if H[k] > L[k]]
        ranges = [range(L[k], H[k]) if H[k] > L[k] else (L[k],) for k in range(n)]
        for corner in product(*ranges):
            base = sum(c * s for c, s in zip(corner, strides))
            if not moving:
                simplices.add((base,))
                continue
            for order in permutations(moving):
                v, path = base, [base]
                for k in order:
                    v += strides[k]
                    path.append(v)
                simplices.add(tuple(path))
    return SimplicialComplex(simplices)


def kuhn_size(B: BoxComplex) -> int:
    """Number of top simplices the Kuhn route would generate (before reduction)."""
    if not B:
        return 0
    _, lo, hi = _ranks(B.boxes, B.n)
    ext = hi - lo
    cells = np.prod(np.maximum(ext, 1), axis=1)
    fact = np.array([math.factorial(int(d)) for d in (ext > 0).sum(axis=1)])
    return int((cells * fact).sum())


def box_homology(B: BoxComplex, max_degree: int | None = None, method: str = "auto",
                 kuhn_limit: int = 4000) -> BettiVector:
    """Betti numbers of the union in degrees 0..min(max_degree, n-1).

    ``kuhn`` triangulates on the common grid.  ``nerve`` uses that finite
    intersections of boxes are boxes (hence contractible) and that pairwise
    intersecting boxes share a point, so the union has the homotopy type of
    the clique complex of the intersection graph.  ``auto`` takes the
    triangulation when it is small.
    """
    top = B.n - 1 if max_degree is None else min(max_degree, B.n - 1)
    if top < 0:
        raise ValueError("max_degree must be non-negative")
    if not B:
        return BettiVector((0,) * (top + 1))
    if method == "auto":
        method = "kuhn" if kuhn_size(B) <= kuhn_limit else "nerve"
    if method == "kuhn":
        return betti(kuhn_complex(B), top).padded(top + 1)
    if method == "nerve":
        return _nerve_betti(B, top)
    raise ValueError(f"unknown method {method!r}")


# -- text formats ----------------------------------------------------------

def parse_box(text: str, line: int | None = None) -> Box:
    """``lo,hi x lo,hi x ...`` with rational endpoints."""
    parts = [p.strip() for p in text.strip().split("x")]
    try:
        out = []
        for p in parts:
            lo, hi = (Fraction(v.strip()) for v in p.split(","))
            out.append((lo, hi))
        return make_box(out)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad box {text!r}; expected 'lo,hi x lo,hi ...'", line) from None


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_box(b: Box) -> str:
    return " x ".join(f"{_fmt(lo)},{_fmt(hi)}" for lo, hi in b)


def parse_boxes(text: str) -> BoxComplex:
    """One box per line; an optional ``dim n`` line fixes n for an empty file."""
    n = None
    boxes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dim"):
            try:
                n = int(line.split()[1])
            except (IndexError, ValueError):
                raise ParseError(f"bad dimension line {line!r}", lineno) from None
            continue
        b = parse_box(line, lineno)
        if n is None:
            n = len(b)
        elif len(b) != n:
            raise ParseError(f"box has {len(b)} coordinates, expected {n}", lineno)
        boxes.append(b)
    if n is None:
        raise ParseError("no boxes and no 'dim n' line")
    return BoxComplex(n, boxes)


def format_boxes(B: BoxComplex) -> str:
    return f"dim {B.n}\n" + "".join(format_box(b) + "\n" for b in B.boxes)


def write_ppm(B: BoxComplex, path, size: int = 256, window: Box | None = None) -> None:
    """Binary PPM of a planar box set: covered pixels black on white."""
    if B.n != 2:
        raise ValueError("image output needs a planar box set")
    if window is None:
        window = B.bounding_box() if B else ((Fraction(0), Fraction(1)),) * 2
    (x0, x1), (y0, y1) = window
    wx, wy = (x1 - x0) or Fraction(1), (y1 - y0) or Fraction(1)
    img = np.full((size, size, 3), 255, dtype=np.uint8)
    for (a, b), (c, d) in B.boxes:
        i0 = max(0, math.floor((a - x0) / wx * size))
        i1 = min(size, max(i0 + 1, math.ceil((b - x0) / wx * size)))
        j0 = max(0, math.floor((c - y0) / wy * size))
        j1 = min(size, max(j0 + 1, math.ceil((d - y0) / wy * size)))
        if i0 < i1 and j0 < j1:
            img[size - j1:size - j0, i0:i1] = 0  # row 0 is the top edge
    with open(path, "wb") as fh:
        fh.write(f"P6\n{size} {size}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
