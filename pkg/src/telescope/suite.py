"""Seeded acceptance suite and the canonical example corpus.

Every check derives its randomness from one integer seed, so a run is
reproducible byte for byte.  Ground truth is either forced by the
mathematics (a quadrant is contractible, a punctured disk is a circle) or
recomputed here by an independent route (rational rank, explicit values).
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

import numpy as np

from . import bounds as bd
from .boxes import BoxComplex, box_homology
from .constructible import approximate, stabilize, telescope
from .errors import CriterionFails, DimensionLimit
from .fibred import check_inequality, random_box_complex
from .formula import And, Atom, Not, Or, SignFormula, conj, disj, parse_formula, relax
from .homology import betti, boundary_matrix
from .marking import MarkedComplex, core, mark_all_soft, mark_from_signs
from .mcomplex import (BaryPoint, LadderParams, MSpec, build_M, check_connectivity, collapse,
                       element_ranks, in_Z_K, membership_K_B, z_nonempty, z_witness)
from .polynomial import Polynomial
from .poset import Poset, parse_poset
from .simplicial import SimplicialComplex, build_complex

# -- corpus --------------------------------------------------------------------

QUADRANT = """\
# the closed quadrant as a union of four sign sets of x and y
p1: x0
p2: x1
(or (and (> p1) (> p2))
    (and (> p1) (= p2))
    (and (= p1) (> p2))
    (and (= p1) (= p2)))
"""

PUNCTURED_DISK = """\
# the open unit disk with the origin removed
p1: x0^2 + x1^2 - 1
p2: x0^2 + x1^2
(and (< p1) (> p2))
"""

TWO_INTERVALS = """\
# (x+1)(x-1) > 0 and 9 - x^2 > 0: two open intervals
p1: x0^2 - 1
p2: 9 - x0^2
(and (> p1) (> p2))
"""

FIG2_POSET = """\
# M(2,2): element 1 lies above element 0
0 < 1
"""
FIG2_CAPS = (2, 2)

WORKED_BOXES = """\
dim 2
0,2 x 0,1
1,3 x 2,3
"""

RP2 = ((0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
       (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3))

BOX2 = ((-2, 2), (-2, 2))
BOX1 = ((-4, 4),)


def corpus() -> dict[str, str]:
    """File name to contents for the canonical inputs."""
    return {
        "quadrant.formula": QUADRANT,
        "punctured_disk.formula": PUNCTURED_DISK,
        "two_intervals.formula": TWO_INTERVALS,
        "fig2.poset": FIG2_POSET,
        "worked.boxes": WORKED_BOXES,
        "rp2.complex": "".join(" ".join(map(str, s)) + "\n" for s in RP2),
    }


def triangle_markings() -> dict[str, MarkedComplex]:
    """A solid triangle with every face in S, marked all-soft and by signs."""
    R = build_complex([(0, 1, 2)])
    S = list(R.faces())
    signs = {(0,): "00", (1,): "+0", (2,): "0+", (0, 1): "+0", (0, 2): "0+", (1, 2): "++", (0, 1, 2): "++"}
    return {"all-soft": mark_all_soft(R, S), "signs": mark_from_signs(R, S, signs)}


# -- generators ----------------------------------------------------------------

def random_poset(rng: random.Random, N: int) -> Poset:
    rel = [(a, b) for a in range(N + 1) for b in range(a + 1, N + 1) if rng.random() < 0.5]
    return Poset(range(N + 1), rel)


def random_mspec(rng: random.Random, max_n: int = 3, max_cap: int = 3, corollary: bool = False):
    """An MSpec with N ≤ max_n and caps ≤ max_cap whose M fits the dimension limit.

    With ``corollary`` the caps satisfy m_j ≥ r(j).  Returns (spec, M, resamples).
    """
    resamples = 0
    while True:
        N = rng.randint(0, max_n)
        P = random_poset(rng, N)
        if corollary:
            r = element_ranks(P)
            caps = [rng.randint(r[j], max(r[j], max_cap)) for j in range(N + 1)]
        else:
            caps = [rng.randint(0, max_cap) for _ in range(N + 1)]
        spec = MSpec(P, caps)
        try:
            return spec, build_M(spec), resamples
        except DimensionLimit:
            resamples += 1


def random_complex(rng: random.Random, vertices: int = 8, simplices: int = 8, max_size: int = 5) -> SimplicialComplex:
    return build_complex(tuple(rng.sample(range(vertices), rng.randint(1, max_size))) for _ in range(simplices))


def random_sign_formula(rng: random.Random, n: int = 2, s: int = 2, depth: int = 2) -> SignFormula:
    """Random quadratics with small integer coefficients and a random Boolean tree."""
    monos = [e for e in product(range(3), repeat=n) if sum(e) <= 2]
    table = tuple(Polynomial(n, [(rng.randint(-2, 2), e) for e in monos if rng.random() < 0.6] or [(1, monos[0])])
                  for _ in range(s))

    def node(d):
        if d == 0 or rng.random() < 0.3:
            return Atom(rng.randrange(s), rng.choice("<=>"))
        kind = rng.choice((And, Or, Not))
        if kind is Not:
            return Not(node(d - 1))
        return kind(tuple(node(d - 1) for _ in range(rng.randint(2, 3))))

    return SignFormula(node(depth), table)


def rational_rank(rows: list[list[int]]) -> int:
    """Rank over ℚ by fraction-exact Gaussian elimination."""
    A = [[Fraction(v) for v in r] for r in rows]
    rank, col = 0, 0
    ncols = len(A[0]) if A else 0
    while rank < len(A) and col < ncols:
        piv = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][col]:
                f = A[i][col] / A[rank][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
        col += 1
    return rank


# -- criteria -------------------------------------------------------------------

@dataclass
class Outcome:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:>2} {self.name} ({self.seconds:.2f}s / {self.limit:g}s)"


def c1_fig2(seed: int) -> dict:
    spec = MSpec(parse_poset(FIG2_POSET), FIG2_CAPS)
    K = build_M(spec)
    b = betti(K)
    res = collapse(K, seed=seed)
    ok = K.f_vector == (6, 9, 4) and b.free == (1, 0, 0) and not any(b.torsion) and res.value == "Collapsible"
    return {"ok": ok, "f_vector": list(K.f_vector), "betti": list(b.free), "collapse": res.value}


def c2_connectivity(seed: int, count: int = 100) -> dict:
    rng = random.Random(seed)
    failures, with_zero_fail, resamples = [], 0, 0
    for t in range(count):
        spec, K, extra = random_mspec(rng)
        resamples += extra
        if not check_connectivity(K, spec.m)["homology_ok"]:
            failures.append(t)
        if not check_connectivity(K, spec.m_with_zero)["homology_ok"]:
            with_zero_fail += 1
    return {"ok": not failures, "failures": failures, "resamples": resamples,
            "failures_with_m0_included": with_zero_fail}


def c3_corollary(seed: int, count: int = 100) -> dict:
    rng = random.Random(seed + 1)
    bad, collapsible = [], 0
    for t in range(count):
        spec, K, _ = random_mspec(rng, corollary=True)
        b = betti(K)
        if b.free[0] != 1 or any(b.free[1:]) or any(b.torsion):
            bad.append(t)
        if collapse(K, restarts=32, seed=seed + t).value == "Collapsible":
            collapsible += 1
    return {"ok": not bad and collapsible >= 95 * count // 100, "homology_failures": bad, "collapsible": collapsible}


# Per-example policy at depth 8.  The quadrant's ε-strips are far thinner than
# a depth-8 cell, so only the outer rule keeps them; the puncture has radius
# √δ0, also below a cell, so only the inner rule keeps the hole.
TELESCOPE_CASES = {
    "quadrant": (QUADRANT, BOX2, "outer", (1, 0)),
    "punctured_disk": (PUNCTURED_DISK, BOX2, "inner", (1, 1)),
}


def c4_telescope(seed: int, limit: float = 30.0) -> dict:
    out, ok = {}, True
    for name, (text, box, policy, truth) in TELESCOPE_CASES.items():
        t0 = time.perf_counter()
        r = stabilize(parse_formula(text), 2, box, 8, (Fraction(1, 10), Fraction(1, 100)), policy=policy)
        dt = time.perf_counter() - t0
        good = r.stable and r.betti.free == truth and dt < limit
        ok &= good
        out[name] = {"betti": list(r.betti.free), "stable": r.stable, "policy": policy, "seconds": round(dt, 2)}
    return {"ok": ok, **out}


COMPONENT_CASES = {
    "two_intervals": (TWO_INTERVALS, BOX1, "outer", 2),
    "quadrant": (QUADRANT, BOX2, "outer", 1),
}


def c5_components(seed: int) -> dict:
    out, ok = {}, True
    for name, (text, box, policy, truth) in COMPONENT_CASES.items():
        T = telescope(parse_formula(text), 1, Fraction(1, 10), box, 8, policy=policy)
        comps = box_homology(T.boxes, max_degree=0)[0]
        ok &= comps == truth
        out[name] = comps
    return {"ok": ok, **out}


def _random_bary(rng: random.Random, J, focus) -> BaryPoint:
    """Random rational point of J with mass concentrated on ``focus`` at a random scale."""
    scale = Fraction(1, 10 ** rng.randint(0, 6))
    w = {v: Fraction(rng.randint(1, 1000), 1000) * (1 if v in focus else scale) for v in J}
    tot = sum(w.values())
    return BaryPoint(J, {v: x / tot for v, x in w.items()})


def c6_regions(seed: int, samples: int = 1000, empty_samples: int = 10_000) -> dict:
    rng = random.Random(seed + 6)
    P = LadderParams.geometric(2)
    info = {}
    identity_fail = 0
    # (a) K_B(δ,ε) ∩ K_B(δ',ε') = K_B(max δ, min ε)
    choices = [(P.deltas[a], P.epsilons[b], P.deltas[c], P.epsilons[d])
               for a, b, c, d in ((0, 0, 1, 2), (2, 1, 0, 0), (1, 2, 2, 1), (0, 2, 2, 0))]
    marks = triangle_markings()
    for label, M in marks.items():
        tops = [B for B in M.subdivision.maximal]
        for choice in choices:
            d1, e1, d2, e2 = choice
            for _ in range(samples):
                J = rng.choice(tops)
                B = tuple(sorted(rng.sample(J, rng.randint(1, len(J)))))
                if not M.in_S_hat(B):
                    continue
                C = core(B, M)
                x = _random_bary(rng, J, B)
                lhs = membership_K_B(x, B, C, d1, e1) and membership_K_B(x, B, C, d2, e2)
                rhs = membership_K_B(x, B, C, max(d1, d2), min(e1, e2))
                identity_fail += lhs != rhs
    # (b) z_nonempty ⇔ z_witness on every flag and index sequence with m ≤ 2
    mismatches, successes, empties = 0, 0, []
    for label, M in marks.items():
        Shat = set(M.S_hat)
        chains = [[B] for B in sorted(Shat)]
        flags_ = []
        while chains:
            flags_.extend(chains)
            chains = [c + [F] for c in chains for F in sorted(Shat) if set(F) < set(c[-1])]
        for m in range(3):
            L = LadderParams.geometric(m)
            for fl in flags_:
                J = next(T for T in M.subdivision.maximal if set(fl[0]) <= set(T))
                for idx in product(range(m + 1), repeat=2 * len(fl)):
                    seq = list(zip(idx[::2], idx[1::2]))
                    if z_nonempty(fl, seq, M, L):
                        try:
                            z_witness(fl, seq, M, J, L)
                            successes += 1
                        except Exception:
                            mismatches += 1
                    else:
                        try:
                            z_witness(fl, seq, M, J, L)
                            mismatches += 1
                        except CriterionFails:
                            empties.append((M, fl, seq, J, L))
    # sampled points never land in a Z_K declared empty
    members = 0
    for t in range(empty_samples):
        M, fl, seq, J, L = empties[rng.randrange(len(empties))]
        x = _random_bary(rng, J, fl[rng.randrange(len(fl))])
        members += in_Z_K(x, fl, seq, M, L)
    info.update(identity_failures=identity_fail, witness_mismatches=mismatches, witnesses=successes,
                empty_cases=len(empties), empty_members=members)
    info["ok"] = identity_fail == 0 and mismatches == 0 and members == 0
    return info


def c7_fibred(seed: int, count: int = 50) -> dict:
    rng = np.random.default_rng(seed + 7)
    fails = []
    for t in range(count):
        n, r = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        T = random_box_complex(rng, n, r, int(rng.integers(1, 13)))
        for k in range(3):
            if not check_inequality(T, n, k)["holds"]:
                fails.append((t, k))
    from .boxes import parse_boxes
    W = parse_boxes(WORKED_BOXES)
    k0, k1 = check_inequality(W, 1, 0), check_inequality(W, 1, 1)
    worked = (k0["lhs"], k0["rhs"], k1["lhs"], k1["rhs"]) == (1, 2, 0, 4)
    return {"ok": not fails and worked, "failures": fails,
            "worked": {"k0": [k0["lhs"], k0["rhs"]], "k1": [k1["lhs"], k1["rhs"]]}}


def c8_homology(seed: int, count: int = 100) -> dict:
    b = betti(build_complex(RP2))
    rp2 = b.free == (1, 0, 0) and b.torsion == ((), (2,), ())
    rng = random.Random(seed + 8)
    dd = euler = rank = 0
    for _ in range(count):
        K = random_complex(rng)
        bv = betti(K).padded(K.dim + 1)
        f = K.f_vector
        euler += sum((-1) ** k * x for k, x in enumerate(f)) != bv.euler
        ranks = [0] * (K.dim + 2)
        for k in range(1, K.dim + 1):
            D = boundary_matrix(K, k).to_dense()
            ranks[k] = rational_rank(D)
            if k >= 2:
                prev = boundary_matrix(K, k - 1).to_dense()
                prod_ = [[sum(prev[i][l] * D[l][j] for l in range(len(D))) for j in range(len(D[0]))]
                         for i in range(len(prev))]
                dd += any(any(row) for row in prod_)
        rank += any(f[k] - ranks[k] - ranks[k + 1] != bv.free[k] for k in range(K.dim + 1))
    return {"ok": rp2 and not (dd or euler or rank), "rp2": b.as_dict(),
            "dd_failures": dd, "euler_failures": euler, "rank_failures": rank}


def monotonicity_sweep() -> list[str]:
    """Names of the bounds that decrease somewhere on a small parameter grid."""
    bad = set()
    grid = range(1, 4)
    cs = (Fraction(1), Fraction(3, 2), Fraction(2))
    for n, s, d, k, r in product(grid, grid, grid, range(0, 3), range(1, 3)):
        for ci, c in enumerate(cs):
            base = dict(n=n, s=s, d=d, k=k, r=r, c=c, pfaffian=(1, 1, 1))
            vals = _bound_values(base)
            bumps = [dict(base, **{key: base[key] + 1}) for key in ("s", "d", "n")]
            if ci + 1 < len(cs):
                bumps.append(dict(base, c=cs[ci + 1]))
            for nb in bumps:
                for key, v in _bound_values(nb).items():
                    if key in vals and v < vals[key]:
                        bad.add(key)
    return sorted(bad)


def _bound_values(kw) -> dict:
    P = bd.BoundParams(**kw)
    out = {f"classical_{v}": bd.classical_bound(v, P) for v in ("equations", "nonstrict", "mixed")}
    out["projection"] = bd.projection_bound(P)["value"]
    out["pfaffian_total"] = bd.pfaffian_bounds("total", P)
    if P.k <= P.n:
        out["gv"] = bd.gv_bound_k(P)
    if P.k >= 1:
        out["pfaffian_projection"] = bd.pfaffian_bounds("projection", P)
    return out


def c9_bounds(seed: int) -> dict:
    vals = {
        "equations": bd.classical_bound("equations", bd.BoundParams(n=3, d=2)),
        "nonstrict": bd.classical_bound("nonstrict", bd.BoundParams(n=2, s=2, d=1)),
        "nu": bd.nu(3, 1, 5),
        "telescope_count": bd.telescope_polynomial_count(1, 3),
        "fibred_count": bd.fibred_polynomial_count(1, 1, 3),
        "projection": bd.projection_bound(bd.BoundParams(n=2, r=1, k=1, s=2, d=2))["value"],
    }
    want = {"equations": 18, "nonstrict": 9, "nu": 2, "telescope_count": 24, "fibred_count": 48,
            "projection": 66048}
    bad = monotonicity_sweep()
    return {"ok": vals == want and not bad, "values": vals, "non_monotone": bad}


def c10_algebra(seed: int, pairs: int = 20, depth: int = 4) -> dict:
    rng = random.Random(seed + 10)
    d, e, d2, e2 = Fraction(1, 10), Fraction(1, 100), Fraction(1, 5), Fraction(1, 50)
    fails = []
    for t in range(pairs):
        F1, F2 = random_sign_formula(rng), random_sign_formula(rng)
        for policy in ("outer", "inner"):
            def A(C):
                return approximate(C, BOX2, depth, policy)
            C1, C2 = relax(F1, d, e), relax(F2, d, e)
            a1, a2 = A(C1), A(C2)
            if not A(conj(C1, C2)).same_set(a1.intersection(a2)):
                fails.append((t, policy, "and"))
            if not A(disj(C1, C2)).same_set(a1.union(a2)):
                fails.append((t, policy, "or"))
            if not a1.subset_of(A(relax(F1, d, e2))):
                fails.append((t, policy, "eps"))
            if not A(relax(F1, d2)).subset_of(A(relax(F1, d))):
                fails.append((t, policy, "delta"))
    return {"ok": not fails, "failures": fails}


CRITERIA: list[tuple[int, str, Callable[[int], dict], float]] = [
    (1, "M(2,2) reproduction", c1_fig2, 1),
    (2, "homological (m-1)-connectivity of M", c2_connectivity, 60),
    (3, "M acyclic and collapsible when m_j >= r(j)", c3_corollary, 120),
    (4, "telescope Betti numbers stabilize to ground truth", c4_telescope, 60),
    (5, "telescope component counts (m=1)", c5_components, 10),
    (6, "K_B intersection identity and Z_K witnesses", c6_regions, 60),
    (7, "fibred-power Betti inequality", c7_fibred, 120),
    (8, "homology backend", c8_homology, 60),
    (9, "explicit bounds", c9_bounds, 5),
    (10, "box-set algebra of relaxations", c10_algebra, 30),
]


def run_criterion(number: int, seed: int = 0) -> Outcome:
    num, name, fn, limit = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    detail = fn(seed)
    dt = time.perf_counter() - t0
    return Outcome(num, name, bool(detail.pop("ok")) and dt < limit, dt, limit, detail)


def run_suite(seed: int = 0, only=None) -> list[Outcome]:
    return [run_criterion(num, seed) for num, *_ in CRITERIA if only is None or num in only]
