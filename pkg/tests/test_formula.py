import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from telescope.errors import BadThresholds, ParseError, TooManyFunctions
from telescope.formula import (And, Atom, Not, Or, SignFormula, compactify, conj, disj, format_formula,
                               parse_formula, relax, sign_sets)
from telescope.polynomial import Polynomial, format_polynomial, parse_polynomial
from telescope.suite import PUNCTURED_DISK, QUADRANT, TWO_INTERVALS, random_sign_formula

X0 = Polynomial.variable(1, 0)


def truth(node, vec):
    """Plain two-valued evaluation on a full sign vector."""
    if isinstance(node, Atom):
        return vec[node.index] == {">": "+", "=": "0", "<": "-"}[node.rel]
    if isinstance(node, Not):
        return not truth(node.child, vec)
    vals = [truth(c, vec) for c in node.children]
    return all(vals) if isinstance(node, And) else any(vals)


def formula_of(tree, s):
    return SignFormula(tree, tuple(Polynomial.variable(1, 0) for _ in range(s)))


def test_parse_examples():
    F = parse_formula(QUADRANT)
    assert (F.n, F.s) == (2, 2)
    assert isinstance(F.tree, Or) and len(F.tree.children) == 4
    G = parse_formula(PUNCTURED_DISK)
    assert G.tree == And((Atom(0, "<"), Atom(1, ">")))


@pytest.mark.parametrize("text", [
    "p1: x0\n(> p1",
    "p1: x0\n(> p1))",
    "p1: x0\n(> p2)",
    "p1: x0\n(xor (> p1))",
    "p1: x0\np1: x1\n(> p1)",
    "p2: x0\n(> p2)",
    "(> p1)",
    "p1: x0\n(not (> p1) (< p1))",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_parse_error_location():
    with pytest.raises(ParseError) as exc:
        parse_formula("p1: x0\n(and (> p1)\n  (>= p1))")
    assert exc.value.line == 3


def test_format_round_trip():
    for text in (QUADRANT, PUNCTURED_DISK, TWO_INTERVALS):
        F = parse_formula(text)
        assert parse_formula(format_formula(F)) == F


def test_sign_set_examples():
    assert sign_sets(formula_of(Atom(0, ">"), 1)) == ["+"]
    assert sign_sets(formula_of(Not(Atom(0, "=")), 1)) == ["+", "-"]
    assert sign_sets(parse_formula(QUADRANT)) == ["++", "+0", "0+", "00"]
    assert sign_sets(formula_of(And((Atom(0, ">"), Atom(0, "<"))), 1)) == []


def test_too_many_functions():
    tree = Or(tuple(Atom(i, ">") for i in range(17)))
    with pytest.raises(TooManyFunctions):
        sign_sets(formula_of(tree, 17))


@given(st.integers(0, 2**31))
def test_sign_sets_match_brute_force(seed):
    F = random_sign_formula(random.Random(seed), n=1, s=3, depth=3)
    want = ["".join(v) for v in product("+0-", repeat=F.s) if truth(F.tree, v)]
    assert sign_sets(F) == want


def test_relax_examples():
    F = parse_formula("p1: x0\n(> p1)")
    C = relax(F, Fraction(1, 4))
    assert C.holds_at([Fraction(1, 4)]) and not C.holds_at([Fraction(1, 5)])
    Z = relax(parse_formula("p1: x0\n(= p1)"), Fraction(1, 2), Fraction(1, 8))
    assert Z.holds_at([Fraction(1, 8)]) and Z.holds_at([Fraction(-1, 8)])
    assert not Z.holds_at([Fraction(1, 7)])
    assert relax(parse_formula("p1: x0\n(= p1)"), Fraction(1, 2)).holds_at([0])


@pytest.mark.parametrize("delta, eps", [(0, None), (1, None), (Fraction(1, 2), Fraction(1, 2)),
                                        (Fraction(1, 2), 0), (Fraction(1, 4), Fraction(1, 2))])
def test_bad_thresholds(delta, eps):
    with pytest.raises(BadThresholds):
        relax(parse_formula(QUADRANT), delta, eps)


def test_relaxation_point_semantics():
    F = parse_formula(TWO_INTERVALS)
    rng = random.Random(0)
    delta, eps = Fraction(1, 8), Fraction(1, 16)
    C = relax(F, delta, eps)
    for _ in range(300):
        x = [Fraction(rng.randint(-4000, 4000), 1000)]
        h = [p(x) for p in F.table]
        want = any(all((c == "+" and v >= delta) or (c == "-" and v <= -delta) or (c == "0" and abs(v) <= eps)
                       for c, v in zip(vec, h)) for vec in sign_sets(F))
        assert C.holds_at(x) == want


def test_conj_and_disj_shift_tables():
    a = relax(parse_formula("p1: x0\n(> p1)"), Fraction(1, 2))
    b = relax(parse_formula("p1: x0\n(< p1)"), Fraction(1, 2))
    assert len(conj(a, b).table) == 2
    for v in (-1, 0, 1):
        assert conj(a, b).holds_at([v]) is False
        assert disj(a, b).holds_at([v]) == (v != 0)


def test_compactify():
    F = compactify(parse_formula("p1: x0\n(> p1)"), Fraction(1, 4))
    C = relax(F, Fraction(1, 10))
    assert C.holds_at([2]) and not C.holds_at([Fraction(201, 100)])
    with pytest.raises(BadThresholds):
        compactify(F, 0)


def test_polynomial_text():
    p = parse_polynomial("x0^2 - 2 x0 x1 + 1/3")
    assert p.n == 2 and p.degree == 2
    assert p([1, 1]) == Fraction(1, 3) - 1
    assert parse_polynomial(format_polynomial(p)) == p
    assert format_polynomial(X0 - X0) == "0"
    with pytest.raises(ParseError):
        parse_polynomial("x0 + y")
    with pytest.raises(ParseError):
        parse_polynomial("")


def test_polynomial_arithmetic():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p([3, 2]) == 5


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(coeffs, st.tuples(st.integers(0, 3), st.integers(0, 3)))
ends = st.fractions(min_value=-3, max_value=3, max_denominator=8)


@given(st.lists(monos, min_size=1, max_size=5), ends, ends, ends, ends, st.booleans(), st.data())
def test_enclosure_is_sound(terms, a, b, c, d, open_box, data):
    p = Polynomial(2, terms)
    (a, b), (c, d) = sorted((a, b)), sorted((c, d))
    box = [(a, open_box and a < b, b, open_box and a < b), (c, open_box and c < d, d, open_box and c < d)]
    lo, lo_o, hi, hi_o = p.enclose(box)
    pts = [(u, v) for u in (a, b) for v in (c, d)]
    pts += [(data.draw(st.fractions(a, b)), data.draw(st.fractions(c, d))) for _ in range(3)]
    for x in pts:
        inside = all(not (iv[1] and t == iv[0]) and not (iv[3] and t == iv[2]) for t, iv in zip(x, box))
        if not inside:
            continue
        v = p(x)
        assert lo <= v <= hi
        assert not (lo_o and v == lo) and not (hi_o and v == hi)
