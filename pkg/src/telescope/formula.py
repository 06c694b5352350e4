"""Sign formulas, their sign sets, and the closed relaxations S_δ and S_{δ,ε}.

A ``SignFormula`` is a Boolean combination of atoms ``(rel pN)`` with
``rel`` one of ``= > <`` over a table of polynomials.  ``relax`` replaces
the formula by the union, over satisfying sign vectors, of the closed
conditions h ≥ δ, h ≤ -δ and -ε ≤ h ≤ ε.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from gmpy2 import mpq

from .errors import BadThresholds, ParseError, TooManyFunctions
from .polynomial import Polynomial, format_polynomial, parse_polynomial

MAX_FUNCTIONS = 16
SIGNS = "+0-"
_REL_SIGN = {">": "+", "=": "0", "<": "-"}


# -- sign formula AST ------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    index: int  # 0-based position in the table
    rel: str


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Not:
    child: object


Node = Union[Atom, And, Or, Not]


@dataclass(frozen=True)
class SignFormula:
    """``constraints`` are polynomials q that enter every relaxation verbatim as q ≥ 0."""
    tree: Node
    table: tuple[Polynomial, ...]
    constraints: tuple[Polynomial, ...] = field(default=())

    def __post_init__(self):
        if not self.table:
            raise ValueError("the function table is empty")
        n = max(p.n for p in self.table + self.constraints)
        object.__setattr__(self, "table", tuple(p.with_vars(n) for p in self.table))
        object.__setattr__(self, "constraints", tuple(p.with_vars(n) for p in self.constraints))
        for a in _atoms(self.tree):
            if not 0 <= a.index < len(self.table):
                raise ValueError(f"atom refers to p{a.index + 1}, table has {len(self.table)} entries")

    @property
    def n(self) -> int:
        return self.table[0].n

    @property
    def s(self) -> int:
        return len(self.table)

    def holds(self, signs: str) -> bool:
        return _truth(self.tree, signs) is True


def _atoms(node):
    if isinstance(node, Atom):
        yield node
    elif isinstance(node, Not):
        yield from _atoms(node.child)
    else:
        for c in node.children:
            yield from _atoms(c)


def _truth(node, signs: str):
    """Three-valued truth under a partial sign assignment (``?`` = unknown)."""
    if isinstance(node, Atom):
        s = signs[node.index] if node.index < len(signs) else "?"
        return None if s == "?" else s == _REL_SIGN[node.rel]
    if isinstance(node, Not):
        v = _truth(node.child, signs)
        return None if v is None else not v
    vals = [_truth(c, signs) for c in node.children]
    if isinstance(node, And):
        return False if False in vals else (None if None in vals else True)
    return True if True in vals else (None if None in vals else False)


# -- parsing -------------------------------------------------------------

_TABLE = re.compile(r"^p(\d+)\s*:(.*)$")
_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_formula(text: str) -> SignFormula:
    """Table lines ``pN: <polynomial>`` and one S-expression (may span lines)."""
    table: dict[int, Polynomial] = {}
    expr_parts: list[tuple[int, int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _TABLE.match(line.strip())
        if m:
            idx = int(m.group(1))
            if idx < 1 or idx in table:
                raise ParseError(f"bad or repeated table entry p{idx}", lineno)
            table[idx] = parse_polynomial(m.group(2), line=lineno)
        else:
            for tok in _TOKEN.finditer(line):
                expr_parts.append((lineno, tok.start() + 1, tok.group()))
    if not table:
        raise ParseError("no polynomial table lines 'pN: ...'")
    if sorted(table) != list(range(1, len(table) + 1)):
        raise ParseError("table entries must be p1..ps without gaps")
    if not expr_parts:
        raise ParseError("no formula expression")
    tree, pos = _parse_node(expr_parts, 0, len(table))
    if pos != len(expr_parts):
        ln, col, tok = expr_parts[pos]
        raise ParseError(f"unexpected {tok!r} after the formula", ln, col)
    n = max(p.n for p in table.values())
    return SignFormula(tree, tuple(table[i].with_vars(n) for i in sorted(table)))


def _parse_node(toks, pos, s):
    if pos >= len(toks):
        ln, col, _ = toks[-1]
        raise ParseError("unexpected end of formula", ln, col)
    ln, col, tok = toks[pos]
    if tok != "(":
        raise ParseError(f"expected '(', got {tok!r}", ln, col)
    if pos + 1 >= len(toks):
        raise ParseError("unbalanced parentheses", ln, col)
    ln2, col2, head = toks[pos + 1]
    if head in ("and", "or", "not"):
        children = []
        pos += 2
        while pos < len(toks) and toks[pos][2] != ")":
            child, pos = _parse_node(toks, pos, s)
            children.append(child)
        if pos >= len(toks):
            raise ParseError("unbalanced parentheses", ln, col)
        if not children:
            raise ParseError(f"'{head}' needs at least one operand", ln2, col2)
        if head == "not":
            if len(children) != 1:
                raise ParseError("'not' takes exactly one operand", ln2, col2)
            return Not(children[0]), pos + 1
        return (And if head == "and" else Or)(tuple(children)), pos + 1
    if head in _REL_SIGN:
        if pos + 3 >= len(toks) or toks[pos + 3][2] != ")":
            raise ParseError("atom must look like '(rel pN)'", ln, col)
        ln3, col3, ref = toks[pos + 2]
        m = re.fullmatch(r"p(\d+)", ref)
        if not m or not 1 <= int(m.group(1)) <= s:
            raise ParseError(f"unknown polynomial reference {ref!r}", ln3, col3)
        return Atom(int(m.group(1)) - 1, head), pos + 4
    raise ParseError(f"unknown operator {head!r}", ln2, col2)


def format_formula(F: SignFormula) -> str:
    lines = [f"p{i + 1}: {format_polynomial(p)}" for i, p in enumerate(F.table)]
    lines.append(_format_node(F.tree))
    return "\n".join(lines) + "\n"


def _format_node(node) -> str:
    if isinstance(node, Atom):
        return f"({node.rel} p{node.index + 1})"
    if isinstance(node, Not):
        return f"(not {_format_node(node.child)})"
    op = "and" if isinstance(node, And) else "or"
    return f"({op} " + " ".join(_format_node(c) for c in node.children) + ")"


# -- sign sets ------------------------------------------------------------

def sign_sets(F: SignFormula) -> list[str]:
    """Satisfying sign vectors over ``+0-``, in lexicographic order of that alphabet.

    A depth-first assignment prunes a branch once the formula is already
    decided false.  Whether a sign set is non-empty in ℝⁿ is not examined.
    """
    s = F.s
    if s > MAX_FUNCTIONS:
        raise TooManyFunctions(f"{s} functions exceed the enumeration bound {MAX_FUNCTIONS}")
    out: list[str] = []

    def extend(prefix: str):
        v = _truth(F.tree, prefix + "?" * (s - len(prefix)))
        if v is False:
            return
        if len(prefix) == s:
            out.append(prefix)
            return
        if v is True:
            _fill(prefix, s, out)
            return
        for c in SIGNS:
            extend(prefix + c)

    extend("")
    return out


def _fill(prefix, s, out):
    if len(prefix) == s:
        out.append(prefix)
        return
    for c in SIGNS:
        _fill(prefix + c, s, out)


# -- closed formulas --------------------------------------------------------

@dataclass(frozen=True)
class CAtom:
    """lo ≤ h_index ≤ hi with ``None`` for a missing side."""
    index: int
    lo: Fraction | None
    hi: Fraction | None

    def __post_init__(self):
        # gmpy2 copies of the bounds for the interval hot path
        q = lambda v: None if v is None else mpq(Fraction(v).numerator, Fraction(v).denominator)
        object.__setattr__(self, "_qlo", q(self.lo))
        object.__setattr__(self, "_qhi", q(self.hi))


@dataclass(frozen=True)
class CAnd:
    children: tuple


@dataclass(frozen=True)
class COr:
    children: tuple


@dataclass(frozen=True)
class ClosedFormula:
    tree: object
    table: tuple[Polynomial, ...]

    @property
    def n(self) -> int:
        return self.table[0].n if self.table else 1

    def evaluate(self, box) -> bool | None:
        """Three-valued truth on a box of flagged intervals."""
        cache: dict[int, tuple] = {}

        def enc(i):
            if i not in cache:
                cache[i] = self.table[i].enclose(box)
            return cache[i]

        return _ceval(self.tree, enc)

    def holds_at(self, x) -> bool:
        vals = [p(x) for p in self.table]
        return _cpoint(self.tree, vals)


def _ceval(node, enc):
    if isinstance(node, CAtom):
        lo, lo_o, hi, hi_o = enc(node.index)
        a, b = node._qlo, node._qhi
        if a is not None and (hi < a or (hi == a and hi_o)):
            return False
        if b is not None and (lo > b or (lo == b and lo_o)):
            return False
        if (a is None or lo >= a) and (b is None or hi <= b):
            return True
        return None
    if isinstance(node, CAnd):
        result = True
        for c in node.children:
            v = _ceval(c, enc)
            if v is False:
                return False
            if v is None:
                result = None
        return result
    result = False
    for c in node.children:
        v = _ceval(c, enc)
        if v is True:
            return True
        if v is None:
            result = None
    return result


def _cpoint(node, vals) -> bool:
    if isinstance(node, CAtom):
        v = vals[node.index]
        return (node.lo is None or v >= node.lo) and (node.hi is None or v <= node.hi)
    if isinstance(node, CAnd):
        return all(_cpoint(c, vals) for c in node.children)
    return any(_cpoint(c, vals) for c in node.children)


def _shift(node, k):
    if isinstance(node, CAtom):
        return CAtom(node.index + k, node.lo, node.hi)
    return type(node)(tuple(_shift(c, k) for c in node.children))


def _combine(kind, formulas: Sequence[ClosedFormula]) -> ClosedFormula:
    n = max(C.n for C in formulas)
    table, children = [], []
    for C in formulas:
        children.append(_shift(C.tree, len(table)))
        table.extend(p.with_vars(n) for p in C.table)
    return ClosedFormula(kind(tuple(children)), tuple(table))


def conj(*formulas: ClosedFormula) -> ClosedFormula:
    return _combine(CAnd, formulas)


def disj(*formulas: ClosedFormula) -> ClosedFormula:
    return _combine(COr, formulas)


def relax(F: SignFormula, delta, eps=None) -> ClosedFormula:
    """S_δ (``eps`` None) or S_{δ,ε} as a closed formula."""
    delta = Fraction(delta)
    if eps is not None:
        eps = Fraction(eps)
        if not 0 < eps < delta < 1:
            raise BadThresholds(f"need 0 < ε < δ < 1, got ε={eps}, δ={delta}")
    elif not 0 < delta < 1:
        raise BadThresholds(f"need 0 < δ < 1, got δ={delta}")
    zero = Fraction(0)
    disjuncts = []
    for vec in sign_sets(F):
        atoms = []
        for i, c in enumerate(vec):
            if c == "+":
                atoms.append(CAtom(i, delta, None))
            elif c == "-":
                atoms.append(CAtom(i, None, -delta))
            elif eps is None:
                atoms.append(CAtom(i, zero, zero))
            else:
                atoms.append(CAtom(i, -eps, eps))
        disjuncts.append(CAnd(tuple(atoms)))
    tree = COr(tuple(disjuncts))
    table = F.table
    if F.constraints:
        extra = tuple(CAtom(len(table) + j, zero, None) for j in range(len(F.constraints)))
        tree = CAnd((tree,) + extra)
        table = table + F.constraints
    return ClosedFormula(tree, table)


def ball_polynomial(n: int, delta) -> Polynomial:
    """1/δ - |x|², non-negative exactly on the ball of radius 1/√δ."""
    return Polynomial(n, [(1 / Fraction(delta), (0,) * n)]
                      + [(-1, tuple(2 if j == i else 0 for j in range(n))) for i in range(n)])


def compactify(F: SignFormula, delta) -> SignFormula:
    """Conjoin |x|² ≤ 1/δ, kept unrelaxed in every relaxation."""
    delta = Fraction(delta)
    if delta <= 0:
        raise BadThresholds("δ must be positive")
    return SignFormula(F.tree, F.table, F.constraints + (ball_polynomial(F.n, delta),))
