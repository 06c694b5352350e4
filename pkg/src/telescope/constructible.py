"""Box approximations of closed formulas, telescopes and stabilization.

``approximate`` works on the dyadic grid of depth ``max_depth`` over the
bounding box.  Its output is defined face by face, independently of the
adaptive search that finds it:

* outer: a grid face is kept unless the formula is certified false on its
  open star (the union of the relative interiors of the grid faces that
  contain it);
* inner: a grid face is kept when the formula is certified true on it;
* strict: like inner, but an undecided finest cell raises ``DepthExceeded``.

Both rules commute with conjunction and disjunction of closed formulas,
so box sets of compound formulas are intersections and unions of box sets
on the same grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from gmpy2 import mpq

from .boxes import Box, BoxComplex, box_homology, make_box
from .errors import DepthExceeded, InvalidParams
from .formula import ClosedFormula, SignFormula, compactify, relax
from .homology import BettiVector
from .mcomplex import LadderParams

MAX_DEPTH = 24
POLICIES = ("outer", "inner", "strict")


class _Grid:
    def __init__(self, box: Box, depth: int):
        self.box = box
        self.depth = depth
        self.N = 1 << depth
        self._lo = [mpq(lo.numerator, lo.denominator) for lo, _ in box]
        self._step = [mpq((hi - lo).numerator, (hi - lo).denominator) / self.N for lo, hi in box]

    def coord(self, k: int, u: int):
        return self._lo[k] + self._step[k] * u

    def closed(self, cell) -> list:
        return [(self.coord(k, a), False, self.coord(k, b), False) for k, (a, b) in enumerate(cell)]

    def open_star(self, cell) -> list:
        """Open neighbourhood of a closed grid box: one finest step on each side, clipped."""
        out = []
        for k, (a, b) in enumerate(cell):
            if a == b:  # a grid vertex on this axis; closed only where clipped
                out.append((self.coord(k, max(a - 1, 0)), a != 0, self.coord(k, min(b + 1, self.N)), b != self.N))
            else:
                out.append((self.coord(k, a), True, self.coord(k, b), True))
        return out

    def to_box(self, cell) -> Box:
        return tuple((_frac(self.coord(k, a)), _frac(self.coord(k, b))) for k, (a, b) in enumerate(cell))


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _faces(cell):
    """All closed faces of a grid cell, the cell itself first."""
    choices = [((a, b), (a, a), (b, b)) if a != b else ((a, b),) for a, b in cell]
    return [tuple(f) for f in product(*choices)]


def approximate(C: ClosedFormula, box: Sequence, max_depth: int, policy: str = "outer") -> BoxComplex:
    """Box set approximating {C} inside ``box`` on the dyadic grid of the given depth."""
    box = make_box(box)
    if policy not in POLICIES:
        raise InvalidParams(f"unknown policy {policy!r}")
    if not 0 <= max_depth <= MAX_DEPTH:
        raise InvalidParams(f"depth must lie in 0..{MAX_DEPTH}")
    if C.table and C.n != len(box):
        raise InvalidParams(f"formula has {C.n} variables, box has {len(box)} coordinates")
    grid = _Grid(box, max_depth)
    n = len(box)
    keep: list = []
    star_cache: dict = {}

    def star_not_false(face):
        if face not in star_cache:
            star_cache[face] = C.evaluate(grid.open_star(face)) is not False
        return star_cache[face]

    stack = [(0, tuple((0, grid.N) for _ in range(n)))]
    while stack:
        level, cell = stack.pop()
        v = C.evaluate(grid.closed(cell))
        if v is True:
            keep.append(cell)
            continue
        if policy == "outer":
            if v is False and _enlarged_false(C, grid, cell):
                continue
        elif v is False:
            continue
        if level < max_depth:
            half = grid.N >> (level + 1)
            for pick in product((0, 1), repeat=n):
                stack.append((level + 1, tuple((a + p * half, a + (p + 1) * half) for (a, _), p in zip(cell, pick))))
            continue
        if policy == "strict":
            raise DepthExceeded(f"cell {grid.to_box(cell)} undecided at depth {max_depth}")
        for face in _faces(cell):
            if policy == "outer":
                if star_not_false(face):
                    keep.append(face)
            elif face != cell and C.evaluate(grid.closed(face)) is True:
                keep.append(face)
    return BoxComplex(n, (grid.to_box(c) for c in keep))


def _enlarged_false(C, grid, cell) -> bool:
    # every finest face inside the cell has its open star inside this box
    grown = tuple((max(a - 1, 0), min(b + 1, grid.N)) for a, b in cell)
    iv = []
    for k, ((a, b), (ga, gb)) in enumerate(zip(cell, grown)):
        iv.append((grid.coord(k, ga), ga != 0 or a != 0, grid.coord(k, gb), gb != grid.N or b != grid.N))
    return C.evaluate(iv) is False


def brute_force_faces(C: ClosedFormula, box: Sequence, depth: int, policy: str = "outer") -> BoxComplex:
    """The defining face rule applied to every face of the grid (small depths only)."""
    box = make_box(box)
    grid = _Grid(box, depth)
    keep = []
    per_axis = [[(u, u) for u in range(grid.N + 1)] + [(u, u + 1) for u in range(grid.N)] for _ in box]
    for face in product(*per_axis):
        if policy == "outer":
            ok = C.evaluate(grid.open_star(face)) is not False
        else:
            ok = C.evaluate(grid.closed(face)) is True
        if ok:
            keep.append(face)
    return BoxComplex(len(box), (grid.to_box(f) for f in keep))


# -- telescopes --------------------------------------------------------------

def ball_inside(box: Box, delta) -> bool:
    """Whether the ball |x|² ≤ 1/δ lies in the box."""
    r2 = 1 / Fraction(delta)
    return all(lo <= 0 <= hi and lo * lo >= r2 and hi * hi >= r2 for lo, hi in box)


@dataclass(frozen=True)
class Telescope:
    boxes: BoxComplex
    ladder: LadderParams
    levels: tuple[BoxComplex, ...]
    truncated: bool = False


def telescope(F: SignFormula, m: int, eta, box, depth: int, policy: str = "outer",
              compact: bool = False) -> Telescope:
    """T(S) = S_{δ0,ε0} ∪ ... ∪ S_{δm,εm} on the geometric ladder with base η."""
    if m < 1:
        raise InvalidParams("the telescope needs m ≥ 1")
    box = make_box(box)
    P = LadderParams.geometric(m, eta)
    levels, truncated = [], False
    for d, e in zip(P.deltas, P.epsilons):
        G = F
        if compact:
            G = compactify(F, d)
            truncated |= not ball_inside(box, d)
        levels.append(approximate(relax(G, d, e), box, depth, policy))
    union = BoxComplex(len(box), (b for L in levels for b in L.boxes))
    return Telescope(union, P, tuple(levels), truncated)


@dataclass
class StabilizeResult:
    betti: BettiVector
    eta_used: Fraction
    stable: bool
    runs: list = field(default_factory=list)


def eta_schedule(eta, rounds: int = 2) -> list[Fraction]:
    out = [Fraction(eta)]
    for _ in range(rounds - 1):
        out.append(out[-1] ** 2)
    return out


def stabilize(F: SignFormula, m: int, box, depth: int, schedule: Sequence = (Fraction(1, 10), Fraction(1, 100)),
              policy: str = "outer", compact: bool = False, method: str = "auto") -> StabilizeResult:
    """Run telescopes along the η schedule until two successive Betti vectors agree."""
    schedule = [Fraction(e) for e in schedule]
    if len(schedule) < 2:
        raise InvalidParams("the η schedule needs at least two entries")
    runs = []
    for eta in schedule:
        T = telescope(F, m, eta, box, depth, policy, compact)
        b = box_homology(T.boxes, method=method)
        runs.append((eta, b, T.truncated))
        if len(runs) >= 2 and runs[-1][1] == runs[-2][1]:
            return StabilizeResult(b, eta, True, runs)
    return StabilizeResult(runs[-1][1], runs[-1][0], False, runs)
