"""Shestakov-Umirbaev reductions of type I: witness checking and construction.

Condition (iv) involves an existential over an infinite field, so it is only
ever *certified* from an explicit witness; this module never claims that (iv)
fails.  Non-admission is reported only when :func:`prefilter_type_one` (which
decides the finite conditions (i)-(iii)) comes back empty.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional

from .automorphism import MapError, PolyMap, bracket_degree, compose, image_degrees, make_elementary
from .certificate import Certificate, CertificateBuilder
from .polyring import (
    NEG_INF,
    Polynomial,
    PolynomialError,
    highest_homogeneous_part,
    is_homogeneous,
    solve_linear,
    substitute,
    total_degree,
)

IDENTITY_ORDER = (0, 1, 2)


class LemmaHypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class TypeOneWitness:
    """Data certifying a type-I reduction.

    ``perm[k]`` is the index of the image playing the role of ``f_{k+1}``;
    ``phi_expr`` is a polynomial in two formal variables ``T1, T2`` evaluated
    at ``(f_1, f_2 - alpha * f_3)``.
    """

    perm: tuple
    s: int
    alpha: Fraction
    phi_expr: Polynomial

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError(f"perm must be a permutation of (0, 1, 2), got {self.perm}")
        if self.s < 3 or self.s % 2 == 0:
            raise ValueError("s must be an odd integer >= 3")
        if not self.alpha:
            raise ValueError("alpha must be nonzero")
        if self.phi_expr.nvars != 2 or self.phi_expr.laurent:
            raise ValueError("phi_expr must be a polynomial in T1, T2")
        object.__setattr__(self, "alpha", Fraction(self.alpha))


def homogeneous_membership(h: Polynomial, a: Polynomial, b: Polynomial) -> Optional[dict]:
    """Coefficients ``{(i, j): c}`` with ``h = sum c a^i b^j``, or ``None``.

    All three inputs must be nonzero homogeneous polynomials.  Every product
    ``a^i b^j`` is homogeneous of degree ``i deg a + j deg b``, so the degree
    slice of ``k[a, b]`` containing ``h`` is spanned by the products of
    matching degree and an exact linear solve decides membership.
    """
    for name, f in (("h", h), ("a", a), ("b", b)):
        if not f:
            raise PolynomialError(f"{name} must be nonzero")
        if f.laurent or not is_homogeneous(f):
            raise PolynomialError(f"{name} must be a homogeneous polynomial")
    dh, da, db = total_degree(h), total_degree(a), total_degree(b)
    pairs = []
    for i in range(dh // da + 1 if da else 1):
        rest = dh - i * da
        if db == 0:
            if rest == 0:
                pairs.append((i, 0))
        elif rest >= 0 and rest % db == 0:
            pairs.append((i, rest // db))
    if da == 0 and db == 0 and dh == 0:
        pairs = [(0, 0)]
    if not pairs:
        return None
    products = [a**i * b**j for i, j in pairs]
    monos = sorted(set(h.terms).union(*(p.terms for p in products)))
    A = [[p.coefficient(mono) for p in products] for mono in monos]
    rhs = [h.coefficient(mono) for mono in monos]
    sol = solve_linear(A, rhs)
    if sol is None:
        return None
    return {pair: c for pair, c in zip(pairs, sol) if c}


def _ratio_s(d1, d2) -> Optional[int]:
    # d1 : d2 = 2 : s with s odd >= 3, by integer cross-multiplication
    if not isinstance(d1, int) or not isinstance(d2, int) or d1 <= 0:
        return None
    if (2 * d2) % d1:
        return None
    s = 2 * d2 // d1
    return s if s >= 3 and s % 2 == 1 else None


def evaluate_phi(w: TypeOneWitness, f1: Polynomial, f2: Polynomial, f3: Polynomial) -> Polynomial:
    return substitute(w.phi_expr, (f1, f2 - f3.scale(w.alpha)))


def check_type_one(F: PolyMap, w: TypeOneWitness) -> Certificate:
    """Check conditions (i)-(iv) of a type-I reduction against a witness."""
    if F.nvars != 3:
        raise MapError("type-I reductions are defined for 3 variables")
    if any(not g for g in F.images):
        raise MapError("all images must be nonzero")
    f1, f2, f3 = (F.images[i] for i in w.perm)
    d1, d2, d3 = total_degree(f1), total_degree(f2), total_degree(f3)
    cert = CertificateBuilder("type I")
    cert.equal("perm", list(w.perm), list(w.perm))
    cert.holds("(i) deg f1 : deg f2 = 2 : s", f"2*deg_f2 == {w.s}*deg_f1", [d1, d2],
               2 * d2 == w.s * d1)
    cert.holds("(ii) deg f1 < deg f3 <= deg f2", "deg_f1 < deg_f3 <= deg_f2", [d1, d3, d2],
               d1 < d3 <= d2)
    bar1, bar2, bar3 = (highest_homogeneous_part(f) for f in (f1, f2, f3))
    member = homogeneous_membership(bar3, bar1, bar2)
    cert.holds("(iii) lead(f3) not in k[lead(f1), lead(f2)]", "no representation",
               "none" if member is None else {f"{i},{j}": c for (i, j), c in sorted(member.items())},
               member is None)
    phi = evaluate_phi(w, f1, f2, f3)
    reduced = f3 + phi
    d_red = total_degree(reduced)
    cert.holds("(iv) deg(f3 + phi) < deg f3", "deg(f3+phi) < deg_f3", [d_red, d3], d_red < d3)
    lhs = bracket_degree(f1, reduced)
    br = bracket_degree(f1, f2 - f3.scale(w.alpha))
    rhs = d2 + br
    cert.holds("(iv) deg[f1, f3+phi] < deg f2 + deg[f1, f2 - alpha f3]",
               "deg[f1,f3+phi] < deg_f2 + deg[f1,f2-alpha*f3]", [lhs, d2, br], lhs < rhs)
    return cert.build()


def prefilter_type_one(F: PolyMap) -> list:
    """All ``(perm, s)`` satisfying the decidable conditions (i)-(iii)."""
    if F.nvars != 3:
        raise MapError("type-I reductions are defined for 3 variables")
    degs = image_degrees(F)
    if NEG_INF in degs:
        return []
    bars = [highest_homogeneous_part(g) for g in F.images]
    out = []
    for perm in itertools.permutations(range(3)):
        d1, d2, d3 = (degs[i] for i in perm)
        s = _ratio_s(d1, d2)
        if s is None or not d1 < d3 <= d2:
            continue
        if homogeneous_membership(bars[perm[2]], bars[perm[0]], bars[perm[1]]) is None:
            out.append((perm, s))
    return out


def lemma_witness(c: Fraction, s: int) -> TypeOneWitness:
    """Witness ``(identity order, s, alpha=1, phi = -c T1^s + T2^2)``."""
    t1, t2 = Polynomial.var(0, 2), Polynomial.var(1, 2)
    return TypeOneWitness(IDENTITY_ORDER, s, Fraction(1), (t1**s).scale(-Fraction(c)) + t2 * t2)


def lemma_reduce(H: PolyMap, c, s: int):
    """Turn ``H = (h1, h2, h3)`` into ``H' = H o G1 o G2`` admitting a type-I reduction.

    ``G1: x3 -> x3 + c x1^s - x2^2`` and ``G2: x2 -> x2 + x3``.  The degree
    hypotheses are checked exactly first and a :class:`LemmaHypothesisError`
    names the one that fails.
    """
    c = Fraction(c)
    if not c:
        raise LemmaHypothesisError("c must be nonzero")
    if s < 3 or s % 2 == 0:
        raise LemmaHypothesisError("s must be an odd integer >= 3")
    if H.nvars != 3:
        raise LemmaHypothesisError("H must be a map of 3 variables")
    h1, h2, h3 = H.images
    d1, d2, d3 = (total_degree(h) for h in H.images)
    if NEG_INF in (d1, d2, d3) or not (d1 == 2 * d3 and d2 == s * d3):
        raise LemmaHypothesisError(f"ratio hypothesis fails: degrees {(d1, d2, d3)} are not 2:{s}:1")
    R = (h1**s).scale(c) - h2 * h2
    dR = total_degree(R)
    if not (s - 1) // 2 * d1 < dR:
        raise LemmaHypothesisError(
            f"lower bound fails: need {(s - 1) // 2}*deg h1 = {(s - 1) // 2 * d1} < deg(c h1^s - h2^2) = {dR}")
    if not dR < d2:
        raise LemmaHypothesisError(f"upper bound fails: need deg(c h1^s - h2^2) = {dR} < deg h2 = {d2}")
    x1, x2, x3 = (Polynomial.var(i) for i in range(3))
    G1 = make_elementary(2, (x1**s).scale(c) - x2 * x2)
    G2 = make_elementary(1, x3)
    Hp = compose(compose(H, G1), G2)
    return Hp, lemma_witness(c, s)


def divide_by_period(u: int, deg_g1: int, deg_g2: int, which: int) -> tuple:
    """``(e_i, q_i, r_i)``: the period ``e_i`` and ``divmod(u, e_i)``."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    g = gcd(deg_g1, deg_g2)
    e = deg_g2 // g if which == 1 else deg_g1 // g
    q, r = divmod(u, e)
    return e, q, r


def phi_degree_lower_bound(deg_g1: int, deg_g2: int, bracket, u: int, which: int) -> int:
    """Lower bound on ``deg phi`` for ``phi`` of top degree ``u`` in ``g_which``.

    ``q (lcm(d1, d2) - d1 - d2 + deg[g1, g2]) + r d_which`` with ``q, r`` the
    quotient and remainder of ``u`` by the period ``e_which``.
    """
    if deg_g1 < 1 or deg_g2 < 1:
        raise ValueError("degrees must be positive")
    if bracket is NEG_INF:
        raise ValueError("bound undefined for a dependent pair (bracket degree -inf)")
    if u < 0:
        raise ValueError("u must be nonnegative")
    _, q, r = divide_by_period(u, deg_g1, deg_g2, which)
    d = deg_g1 if which == 1 else deg_g2
    return q * (lcm(deg_g1, deg_g2) - deg_g1 - deg_g2 + bracket) + r * d


__all__ = [
    "IDENTITY_ORDER",
    "LemmaHypothesisError",
    "TypeOneWitness",
    "check_type_one",
    "divide_by_period",
    "evaluate_phi",
    "homogeneous_membership",
    "lemma_reduce",
    "lemma_witness",
    "phi_degree_lower_bound",
    "prefilter_type_one",
]
