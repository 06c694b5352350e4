"""Fibred powers over a projection, and the explicit bounds next to them.

Run with:  python3 demos/03_fibres_and_bounds.py
"""
from telescope import bounds as bd
from telescope.boxes import box_homology, format_boxes, parse_boxes, project
from telescope.fibred import check_inequality, fibred_power
from telescope.suite import WORKED_BOXES

T = parse_boxes(WORKED_BOXES)
print("T, one box per line:")
print(format_boxes(T))
print("its shadow on the first axis:")
print(format_boxes(project(T, 1)))

# W_p is the (p+1)-fold fibred product of T over the projection.  Its points
# are tuples of points of T sharing the same shadow.
for p in range(3):
    W = fibred_power(T, 1, p).boxes
    print(f"W_{p}: {len(W)} boxes in R^{W.n}, Betti {box_homology(W).free}")

# The bound b_k(image) <= sum over p+q=k of b_q(W_p), checked for k = 0 and 1.
for k in (0, 1):
    res = check_inequality(T, 1, k)
    print(f"k={k}: {res['lhs']} <= {res['rhs']}   table (p, q, b_q(W_p)) = {res['table']}")

# The closed-form bounds.  Every O(...) site carries the constant c, here 1.
P = bd.BoundParams(n=2, r=1, k=1, s=2, d=2)
res = bd.projection_bound(P)
print("\nprojection bound at n=2, r=1, k=1, s=2, d=2:", res["value"], "from terms", res["terms"])
print("quantifier elimination comparison value:", res["quantifier_elimination"])
print("classical (sd+1)^n at n=2, s=2, d=1:", bd.classical_bound("nonstrict", bd.BoundParams(n=2, s=2)))
print("polynomials needed for the telescope at k=1, s=3:", bd.telescope_polynomial_count(1, 3))
