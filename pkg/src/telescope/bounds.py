"""Explicit Betti-number bounds with the unstated O-constants made explicit.

``(c·g)^n`` stands for O(g)^n and ``g^(c·h)`` for g^O(h).  Constants at
base positions may be positive rationals.  Constants sitting in an exponent
must be positive integers so that values stay exact.  Results are ``int``
when integral and ``Fraction`` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParams

CONSTANTS_NOTE = "up to unstated constants: every O-site is evaluated with the given constant"


@dataclass(frozen=True)
class BoundParams:
    n: int = 1
    s: int = 1
    d: int = 1
    k: int = 0
    r: int = 0
    pfaffian: tuple[int, int, int] | None = None  # (ℓ, α, β)
    c: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("n", "s", "d", "k", "r"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise InvalidParams(f"{name} must be a non-negative integer")
        if self.n < 1:
            raise InvalidParams("n must be at least 1")
        c = Fraction(self.c)
        if c <= 0:
            raise InvalidParams("c must be positive")
        object.__setattr__(self, "c", c)
        if self.pfaffian is not None:
            if len(self.pfaffian) != 3 or any(int(v) != v or v < 0 for v in self.pfaffian):
                raise InvalidParams("pfaffian parameters (ℓ, α, β) must be non-negative integers")
            object.__setattr__(self, "pfaffian", tuple(int(v) for v in self.pfaffian))

    def need(self, *names):
        for name in names:
            if getattr(self, name) < 1:
                raise InvalidParams(f"{name} must be at least 1 here")


def _exact(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


def _int_const(c, name="c") -> int:
    c = Fraction(c)
    if c.denominator != 1 or c < 1:
        raise InvalidParams(f"{name} appears in an exponent and must be a positive integer")
    return int(c)


def nu(n: int, k: int, s: int) -> int:
    """ν = min{k+1, n-k, s}."""
    return min(k + 1, n - k, s)


def classical_bound(variant: str, P: BoundParams):
    """(i) equations: d(2d-1)^(n-1); (ii) non-strict: (sd+1)^n; (iii) mixed: (c·s·d)^n."""
    if variant in ("equations", "i"):
        P.need("d")
        return P.d * (2 * P.d - 1) ** (P.n - 1)
    if variant in ("nonstrict", "ii"):
        P.need("s", "d")
        return (P.s * P.d + 1) ** P.n
    if variant in ("mixed", "iii"):
        P.need("s", "d")
        return _exact((P.c * P.s * P.d) ** P.n)
    raise InvalidParams(f"unknown classical variant {variant!r}")


def gv_bound_k(P: BoundParams):
    """b_k(S) ≤ (c·ν·s·d)^n."""
    P.need("s", "d")
    if P.k > P.n:
        raise InvalidParams("k must not exceed n")
    return _exact((P.c * nu(P.n, P.k, P.s) * P.s * P.d) ** P.n)


def projection_bound(P: BoundParams, c_qe=1) -> dict:
    """Σ_{p=0..k} (c(p+1)(k+1)sd)^(n+(p+1)r), and the elimination value (sd)^(c'·n²·r)."""
    P.need("s", "d", "r")
    terms = [_exact((P.c * (p + 1) * (P.k + 1) * P.s * P.d) ** (P.n + (p + 1) * P.r)) for p in range(P.k + 1)]
    qe = (P.s * P.d) ** (_int_const(c_qe, "c'") * P.n ** 2 * P.r)
    return {"value": _exact(sum(Fraction(t) for t in terms)), "terms": terms, "quantifier_elimination": qe}


def telescope_polynomial_count(k: int, s: int) -> int:
    """Polynomials defining T(S) with m = k: h ± δ_i and h ± ε_i for i ≤ k."""
    return 4 * (k + 1) * s


def fibred_polynomial_count(p: int, k: int, s: int) -> int:
    """Polynomials defining the fibred power W_p of T(S)."""
    return 4 * (p + 1) * (k + 1) * s


def pfaffian_bounds(variant: str, P: BoundParams, c1=1, c2=1):
    """Semi- and sub-Pfaffian bounds.

    total:      s^n 2^(ℓ(ℓ-1)/2) (c(nβ + min{n,ℓ}α))^(n+ℓ)
    degree_k:   (νs)^n 2^(ℓ(ℓ-1)/2) (c(nβ + min{n,ℓ}α))^(n+ℓ)
    projection: (ks)^(c1(n+(k+1)r)) 2^((c2·k·ℓ)²) ((n+(k+1)r)(α+β))^(n+(k+1)r+kℓ), k ≥ 1
    """
    if P.pfaffian is None:
        raise InvalidParams("pfaffian parameters (ℓ, α, β) are required")
    ell, alpha, beta = P.pfaffian
    P.need("s")
    if variant in ("total", "degree_k"):
        factor = P.s ** P.n if variant == "total" else (nu(P.n, P.k, P.s) * P.s) ** P.n
        if variant == "degree_k" and P.k > P.n:
            raise InvalidParams("k must not exceed n")
        base = P.c * (P.n * beta + min(P.n, ell) * alpha)
        return _exact(factor * 2 ** (ell * (ell - 1) // 2) * base ** (P.n + ell))
    if variant == "projection":
        if P.k < 1:
            raise InvalidParams("the projection form needs k ≥ 1 (its (ks) factor vanishes at k = 0)")
        P.need("r")
        e = P.n + (P.k + 1) * P.r
        return ((P.k * P.s) ** (_int_const(c1, "c1") * e)
                * 2 ** ((_int_const(c2, "c2") * P.k * ell) ** 2)
                * (e * (alpha + beta)) ** (e + P.k * ell))
    raise InvalidParams(f"unknown pfaffian variant {variant!r}")


FORMULAS = {
    "equations": "d(2d-1)^(n-1)",
    "nonstrict": "(sd+1)^n",
    "mixed": "(c s d)^n",
    "gv": "(c nu s d)^n, nu = min(k+1, n-k, s)",
    "projection": "sum_{p=0..k} (c (p+1)(k+1) s d)^(n+(p+1)r)",
    "pfaffian_total": "s^n 2^(l(l-1)/2) (c(n beta + min(n,l) alpha))^(n+l)",
    "pfaffian_degree_k": "(nu s)^n 2^(l(l-1)/2) (c(n beta + min(n,l) alpha))^(n+l)",
    "pfaffian_projection": "(ks)^(c1(n+(k+1)r)) 2^((c2 k l)^2) ((n+(k+1)r)(alpha+beta))^(n+(k+1)r+kl)",
}
