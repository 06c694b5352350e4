"""Sparse rational polynomials and their interval enclosures.

Intervals carry openness flags: ``(lo, lo_open, hi, hi_open)`` encloses the
values of a polynomial on a box, and an open endpoint means that value is
never attained.  All arithmetic is exact: coefficients are ``Fraction``,
and enclosures run over gmpy2 ``mpq``, which compares and hashes equal to
the matching ``Fraction``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from gmpy2 import mpq

from .errors import ParseError

Interval = tuple  # (lo, lo_open, hi, hi_open)


@dataclass(frozen=True)
class Polynomial:
    n: int
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    def __init__(self, n: int, terms):
        if n < 1:
            raise ValueError("a polynomial needs at least one variable")
        if isinstance(terms, Mapping):
            terms = terms.items()
            terms = [(c, e) for e, c in terms]
        merged: dict[tuple[int, ...], Fraction] = {}
        for c, e in terms:
            e = tuple(int(a) for a in e)
            e = e + (0,) * (n - len(e))
            if len(e) != n or any(a < 0 for a in e):
                raise ValueError(f"bad exponent vector {e} for {n} variables")
            merged[e] = merged.get(e, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", tuple(sorted(((c, e) for e, c in merged.items() if c),
                                                       key=lambda t: t[1], reverse=True)))

    @classmethod
    def constant(cls, n: int, c) -> "Polynomial":
        return cls(n, [(Fraction(c), (0,) * n)])

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        return cls(n, [(1, tuple(1 if j == i else 0 for j in range(n)))])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.n, other.n)
        return Polynomial(n, list(self.terms) + list(other.terms))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n, [(-c, e) for c, e in self.terms])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        n = max(self.n, other.n)
        pad = lambda e: e + (0,) * (n - len(e))
        return Polynomial(n, [(a * b, tuple(x + y for x, y in zip(pad(e), pad(f))))
                              for a, e in self.terms for b, f in other.terms])

    def with_vars(self, n: int) -> "Polynomial":
        if n < self.n:
            raise ValueError("cannot drop variables")
        return Polynomial(n, self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def __call__(self, x: Sequence) -> Fraction:
        total = Fraction(0)
        for c, e in self.terms:
            v = c
            for xi, a in zip(x, e):
                if a:
                    v *= Fraction(xi) ** a
            total += v
        return total

    def enclose(self, box: Sequence[Interval]) -> Interval:
        """Enclosure of the values on a box of per-coordinate intervals."""
        lo, lo_open, hi, hi_open = mpq(0), False, mpq(0), False
        powers: dict[tuple[int, int], Interval] = {}
        for c, e in self._mpq_terms:
            iv = None
            for k, a in enumerate(e):
                if a:
                    if (k, a) not in powers:
                        powers[k, a] = _pow(box[k], a)
                    iv = powers[k, a] if iv is None else _mul(iv, powers[k, a])
            if iv is None:
                lo += c
                hi += c
                continue
            if c > 0:
                lo += c * iv[0]
                hi += c * iv[2]
                lo_open |= iv[1]
                hi_open |= iv[3]
            else:
                lo += c * iv[2]
                hi += c * iv[0]
                lo_open |= iv[3]
                hi_open |= iv[1]
        return lo, lo_open, hi, hi_open

    @property
    def _mpq_terms(self):
        try:
            return self.__dict__["_mpq"]
        except KeyError:
            out = tuple((mpq(c.numerator, c.denominator), e) for c, e in self.terms)
            self.__dict__["_mpq"] = out
            return out

    def __str__(self) -> str:
        return format_polynomial(self)


def _pow(iv: Interval, a: int) -> Interval:
    lo, lo_o, hi, hi_o = iv
    if a % 2 or lo >= 0:
        return lo ** a, lo_o, hi ** a, hi_o
    if hi <= 0:
        return hi ** a, hi_o, lo ** a, lo_o
    top_lo, top_hi = lo ** a, hi ** a
    if top_lo > top_hi:
        return mpq(0), False, top_lo, lo_o
    if top_hi > top_lo:
        return mpq(0), False, top_hi, hi_o
    return mpq(0), False, top_hi, lo_o and hi_o


def _mul(x: Interval, y: Interval) -> Interval:
    """Product of independent quantities; an endpoint is open when no
    attaining pair of factor endpoints is attained."""
    cands = []
    for a, ao in ((x[0], x[1]), (x[2], x[3])):
        for b, bo in ((y[0], y[1]), (y[2], y[3])):
            attained = (not ao and not bo) or (a == 0 and not ao) or (b == 0 and not bo)
            cands.append((a * b, not attained))
    lo = min(v for v, _ in cands)
    hi = max(v for v, _ in cands)
    return (lo, all(o for v, o in cands if v == lo), hi, all(o for v, o in cands if v == hi))


# -- text format ---------------------------------------------------------

_VAR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_polynomial(text: str, n: int | None = None, line: int | None = None) -> Polynomial:
    """Terms ``c x0^a x1^b`` joined by ``+`` (a leading ``-`` negates a term)."""
    src = text.strip()
    if not src:
        raise ParseError("empty polynomial", line)
    src = re.sub(r"(?<=[^\s^+])\s*-\s*", " + -", src)
    terms = []
    top = 0
    for raw in src.split("+"):
        toks = raw.split()
        if not toks:
            raise ParseError(f"empty term in {text!r}", line)
        coef = Fraction(1)
        exps: dict[int, int] = {}
        for tok in toks:
            sign = 1
            while tok.startswith("-"):
                sign, tok = -sign, tok[1:]
            coef *= sign
            if not tok:
                continue
            m = _VAR.match(tok)
            if m:
                i, a = int(m.group(1)), int(m.group(2) or 1)
                exps[i] = exps.get(i, 0) + a
                top = max(top, i + 1)
                continue
            try:
                coef *= Fraction(tok)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad token {tok!r} in {text!r}", line) from None
        terms.append((coef, exps))
    n = max(n or 1, top)
    return Polynomial(n, [(c, tuple(e.get(i, 0) for i in range(n))) for c, e in terms])


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for c, e in p.terms:
        mono = [f"x{i}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a]
        parts.append(" ".join([_frac(c)] + mono))
    return " + ".join(parts)
