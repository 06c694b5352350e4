"""Telescopes of sign-condition sets and their Betti numbers.

Run with:  python3 demos/02_telescopes.py
The script writes two small PPM pictures into the current directory.
"""
from fractions import Fraction

from telescope.boxes import box_homology, write_ppm
from telescope.constructible import approximate, stabilize, telescope
from telescope.formula import parse_formula, relax, sign_sets
from telescope.suite import BOX2, PUNCTURED_DISK, QUADRANT

quadrant = parse_formula(QUADRANT)
print("quadrant sign vectors:", sign_sets(quadrant))

# One relaxation first.  S_{δ,ε} keeps points where each function is at least
# δ, at most -δ, or within ε of zero, following a satisfying sign vector.
C = relax(quadrant, Fraction(1, 10), Fraction(1, 100))
for policy in ("outer", "inner"):
    boxes = approximate(C, BOX2, 6, policy)
    print(f"{policy:>5} approximation at depth 6: {len(boxes)} boxes, Betti {box_homology(boxes).free}")

# A single relaxation falls apart: the four sign vectors give four pieces
# separated by gaps of width about δ - ε.  The outer grid happens to bridge
# them at this depth, the inner one does not.  Gluing several levels is what
# reconnects them honestly.

# The telescope glues m+1 relaxations along a geometric ladder.  Stabilizing
# means shrinking η until two successive Betti vectors agree.
r = stabilize(quadrant, 2, BOX2, 6, policy="outer")
print("\nquadrant telescope: Betti", r.betti.free, "stable", r.stable, "at eta", r.eta_used)
T = telescope(quadrant, 2, r.eta_used, BOX2, 6).boxes
write_ppm(T, "quadrant.ppm", size=128, window=BOX2)

# The open unit disk without the origin has a hole, so b1 = 1.  Near the
# origin the relaxations cut out a small disk of radius about sqrt(δ), and
# the inner policy keeps that hole open at depth 8.
disk = parse_formula(PUNCTURED_DISK)
r = stabilize(disk, 2, BOX2, 8, policy="inner")
print("punctured disk telescope: Betti", r.betti.free, "stable", r.stable)
for eta, b, _ in r.runs:
    print("   eta", eta, "->", b.free)
write_ppm(telescope(disk, 2, r.eta_used, BOX2, 8, "inner").boxes, "punctured_disk.ppm", size=128, window=BOX2)

# A coarse grid cannot see the ladder, and stabilization then says so.
starved = stabilize(disk, 2, BOX2, 5, (Fraction(1, 2), Fraction(1, 4)), policy="outer")
print("\ndepth 5 with a coarse schedule: stable =", starved.stable, [b.free for _, b, _ in starved.runs])
