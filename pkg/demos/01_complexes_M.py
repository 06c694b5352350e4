"""A walk through the complex M(m0, ..., mN) and its relative M_B.

Run with:  python3 demos/01_complexes_M.py
"""
from fractions import Fraction

from telescope.homology import betti
from telescope.marking import core
from telescope.mcomplex import (LadderParams, MSpec, build_M, build_M_B, check_connectivity, collapse, z_nonempty,
                                z_witness)
from telescope.poset import Poset
from telescope.suite import triangle_markings

# Start with the smallest interesting case: two poset elements with 1 ≻ 0
# and two copies of each.  A vertex (p, i) is the i-th copy of element p.
spec = MSpec(Poset(range(2), [(0, 1)]), (2, 2))
M = build_M(spec)
print("M(2,2) with 1 > 0")
print("  f-vector:", M.f_vector)
print("  maximal simplices:", M.maximal)
print("  Betti:", betti(M).free, " collapse:", collapse(M).value)

# Drop the relation and the poset becomes an antichain.  Chains may then mix
# copies freely, and the complex grows.
flat = build_M(MSpec(Poset(range(2)), (2, 2)))
print("\nM(2,2) on an antichain has f-vector", flat.f_vector)

# The connectivity statement says reduced homology vanishes below degree m.
# Here m = min(m1..mN) = 2, so degrees 0 and 1 are checked.
print("connectivity check:", check_connectivity(M, spec.m))

# Markings live on the barycentric subdivision of a triangle.  The "signs"
# marking comes from the sign vectors of the closed quadrant near the origin.
marking = triangle_markings()["signs"]
print("\nsubdivided triangle:", marking.subdivision.f_vector, "faces;", len(marking.S_hat), "of them in S-hat")

B = max(marking.S_hat, key=len)
print("a top simplex B =", B, "with core", core(B, marking))
MB = build_M_B(marking, B, 2)
print("M_B for m = 2: f-vector", MB.f_vector, ", Betti", betti(MB).free)

# Regions Z_K are cut out by a ladder of thresholds.  When the combinatorial
# criterion holds we can also produce an explicit rational witness point.
ladder = LadderParams.geometric(1, Fraction(1, 10))
flag = [B]
for seq in ([(0, 0)], [(1, 1)]):
    ok = z_nonempty(flag, seq, marking, ladder)
    print(f"\nZ_K for index sequence {seq}: non-empty = {ok}")
    if ok:
        x = z_witness(flag, seq, marking, B, ladder)
        print("  witness:", {v: str(t) for v, t in sorted(x.coords.items())})
