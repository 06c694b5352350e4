"""Fibred powers of box sets over a coordinate projection, and the Betti bound
b_k(ρT) ≤ Σ_{p+q=k} b_q(W_p)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boxes import BoxComplex, _ranks, box_homology, project
from .errors import InvalidParams

MAX_P = 4


@dataclass(frozen=True)
class FibredPower:
    n: int
    r: int
    p: int
    boxes: BoxComplex


def fibred_power(T: BoxComplex, n: int, p: int) -> FibredPower:
    """W_p = T ×_ρ ... ×_ρ T (p+1 factors) for ρ the projection to the first n coordinates.

    Coordinates are ordered x, y_0, ..., y_p.
    """
    if not 0 <= p <= MAX_P:
        raise InvalidParams(f"p must lie in 0..{MAX_P}")
    if not 1 <= n < T.n:
        raise InvalidParams(f"need 1 ≤ n < {T.n}")
    if not T:
        raise InvalidParams("the box set is empty")
    r = T.n - n
    boxes = T.boxes
    _, lo, hi = _ranks(boxes, T.n)
    lo, hi = lo[:, :n], hi[:, :n]
    meets = np.all((lo[:, None, :] <= hi[None, :, :]) & (lo[None, :, :] <= hi[:, None, :]), axis=2)
    out = []

    def grow(tup):
        if len(tup) == p + 1:
            x = tuple((max(boxes[i][k][0] for i in tup), min(boxes[i][k][1] for i in tup)) for k in range(n))
            out.append(x + tuple(c for i in tup for c in boxes[i][n:]))
            return
        ok = np.all(meets[list(tup)], axis=0) if tup else np.ones(len(boxes), dtype=bool)
        for j in np.flatnonzero(ok):
            grow(tup + (int(j),))

    grow(())
    return FibredPower(n, r, p, BoxComplex(n + (p + 1) * r, out))


def spectral_upper_bound(T: BoxComplex, n: int, k: int, method: str = "auto") -> tuple[int, list]:
    """Σ_{p+q=k} b_q(W_p), with the table of (p, q, b_q(W_p))."""
    if not 0 <= k <= MAX_P:
        raise InvalidParams(f"k must lie in 0..{MAX_P}")
    table = []
    for p in range(k + 1):
        q = k - p
        W = fibred_power(T, n, p).boxes
        b = box_homology(W, max_degree=q, method=method)[q] if q < W.n else 0
        table.append([p, q, b])
    return sum(row[2] for row in table), table


def check_inequality(T: BoxComplex, n: int, k: int, method: str = "auto") -> dict:
    rho = project(T, n)
    lhs = box_homology(rho, max_degree=k, method=method)[k] if k < n else 0
    rhs, table = spectral_upper_bound(T, n, k, method)
    return {"lhs": lhs, "rhs": rhs, "table": table, "holds": lhs <= rhs}


def random_box_complex(rng, n: int, r: int, count: int, grid: int = 6) -> BoxComplex:
    """Boxes with integer corners in [0, grid], some of them degenerate."""
    boxes = []
    for _ in range(count):
        b = []
        for _ in range(n + r):
            a = int(rng.integers(0, grid))
            b.append((a, a + int(rng.integers(0, 3))))
        boxes.append(b)
    return BoxComplex(n + r, boxes)

