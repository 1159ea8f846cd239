"""The (p, q) family of tame automorphisms and its end-to-end verification.

Sign convention.  Since ``g1 = x1 - x3^2`` and ``2p+1`` is odd, the top
``x3``-power of ``c^2 g1^(2p+1)`` is ``-c^2 x3^(4p+2)`` while ``g2^2`` carries
``+c^2 x3^(4p+2)``.  The cancelling combination is therefore
``c^2 g1^(2p+1) + g2^2``; with a minus sign the leading parts add and the
degree is ``2(2p+1)m``.  Everything below uses the cancelling sign, records the
other one as an explicit check, and feeds the lemma the constant ``-c^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod

from .automorphism import PolyMap, compose, image_degrees, jacobian_minor, map_degree
from .certificate import Certificate, CertificateBuilder
from .derivation import (
    Derivation,
    apply_derivation,
    exp_map,
    leading_derivation,
    ratio_degrees,
    slice_map,
)
from .polyring import (
    Polynomial,
    leading_part,
    render_poly,
    support,
    total_degree,
    weighted_degree,
)
from .sureduction import check_type_one, lemma_reduce, prefilter_type_one

# the grading shift x1 * x3^-2
EPSILON = (1, 0, -2)

DEFAULT_GRID = ((1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (1, 3))

X1, X2, X3 = (Polynomial.var(i) for i in range(3))


class FamilyError(ValueError):
    pass


class ClosedFormMismatch(AssertionError):
    """Closed forms disagree with the exponential computation (an arithmetic bug)."""


@dataclass(frozen=True)
class FamilyParams:
    p: int
    q: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)) or self.p < 1 or self.q < 1:
            raise FamilyError(f"p and q must be integers >= 1, got p={self.p}, q={self.q}")

    @property
    def m(self) -> int:
        return self.p * self.q + self.p + self.q

    @property
    def c(self) -> Fraction:
        return Fraction(-2) ** (self.p + 1) * prod(
            (Fraction(i + 1, 2 * i + 1) for i in range(1, self.p + 1)), start=Fraction(1)
        )

    @property
    def c_list(self) -> tuple:
        p = self.p
        return tuple(
            Fraction(-2) ** (i + 1) * prod((Fraction(p - l + 1, 2 * l + 1) for l in range(i + 1)), start=Fraction(1))
            for i in range(p + 1)
        )

    @property
    def s(self) -> int:
        return 2 * self.p + 1

    @property
    def lemma_constant(self) -> Fraction:
        return -self.c**2

    @property
    def omega(self) -> tuple:
        return (self.q + 1, 1, self.m)

    @property
    def target_degree(self) -> int:
        """``2pm + p + 1``."""
        return 2 * self.p * self.m + self.p + 1


@dataclass(frozen=True)
class FamilyInstance:
    params: FamilyParams
    D: Derivation
    E: Derivation
    F: PolyMap
    G: PolyMap
    H: PolyMap
    omega: tuple
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def g1(self) -> Polynomial:
        return self.G.images[0]

    @property
    def g2(self) -> Polynomial:
        return self.G.images[1]


def family_derivations(p: int, q: int) -> tuple:
    D = Derivation((X2 ** (q + 1), Polynomial.zero(), (X1**p * X2**q).scale(p + 1)))
    E = Derivation((X3.scale(2), (X1**p).scale(2 * (p + 1)), Polynomial.constant(1)))
    return D, E


def closed_forms(params: FamilyParams) -> dict:
    """The explicit ``f1, f2, f3, g1, g2`` as finite sums."""
    p, q = params.p, params.q
    f3 = X3
    for i in range(p + 1):
        f3 = f3 + (X1 ** (p - i) * X2 ** ((q + 1) * i + q)).scale(comb(p + 1, i + 1))
    g2 = X2
    for i, ci in enumerate(params.c_list):
        g2 = g2 + (X1 ** (p - i) * X3 ** (2 * i + 1)).scale(ci)
    return {
        "f1": X1 + X2 ** (q + 1),
        "f2": X2,
        "f3": f3,
        "g1": X1 - X3**2,
        "g2": g2,
    }


def build_family(p: int, q: int) -> FamilyInstance:
    params = FamilyParams(p, q)
    D, E = family_derivations(p, q)
    F = exp_map(D)
    G = slice_map(E)
    closed = closed_forms(params)
    computed = {"f1": F[0], "f2": F[1], "f3": F[2], "g1": G[0], "g2": G[1]}
    for name, poly in closed.items():
        if computed[name] != poly:
            raise ClosedFormMismatch(f"{name}: exponential {computed[name]} != closed form {poly}")
    H = compose(F, G)
    return FamilyInstance(params, D, E, F, G, H, params.omega)


def _cached(inst: FamilyInstance, key, fn):
    if key not in inst._cache:
        inst._cache[key] = fn()
    return inst._cache[key]


def theorem_polynomials(inst: FamilyInstance) -> tuple:
    """``(c^2 h1^(2p+1), h2^2)``, cached on the instance."""
    def go():
        par = inst.params
        h1, h2 = inst.H[0], inst.H[1]
        return (h1**par.s).scale(par.c**2), h2 * h2
    return _cached(inst, "theorem", go)


def verify_theorem(inst: FamilyInstance) -> Certificate:
    par = inst.params
    p, q, m = par.p, par.q, par.m
    h1, h2, h3 = inst.H.images
    cert = CertificateBuilder("theorem")
    cert.equal("deg h1 = 2m", 2 * m, total_degree(h1))
    cert.equal("deg h2 = (2p+1)m", (2 * p + 1) * m, total_degree(h2))
    cert.equal("deg h3 = m", m, total_degree(h3))
    top, sq = theorem_polynomials(inst)
    target = par.target_degree
    cert.equal("deg(c^2 h1^(2p+1) + h2^2) = 2pm+p+1", target, total_degree(top + sq))
    cert.equal(
        "deg(c^2 h1^(2p+1) - h2^2) = 2(2p+1)m",
        2 * (2 * p + 1) * m,
        total_degree(top - sq),
        note="leading parts add under the minus sign; only the plus sign cancels",
    )
    cert.holds("p deg h1 < 2pm+p+1", "p*deg_h1 < 2pm+p+1", [p * total_degree(h1), target],
               p * total_degree(h1) < target)
    cert.equal("2pm+p+1 = (2p+1)m - (p+1)q + 1", target, (2 * p + 1) * m - (p + 1) * q + 1)
    cert.holds("2pm+p+1 < deg h2", "2pm+p+1 < deg_h2", [target, total_degree(h2)],
               target < total_degree(h2))
    cert.equal("H = F o G (tame word present)", True, inst.H.word is not None)
    return cert.build()


def graded_pieces(inst: FamilyInstance) -> dict:
    """The polynomials of the weighted-degree argument, computed once."""
    def go():
        par = inst.params
        p, c = par.p, par.c
        w = inst.omega
        g1, g2 = inst.g1, inst.g2
        phi = g2 - X2
        P1 = (g1**par.s).scale(c**2) + phi * phi
        P2 = X2 * X2 + (phi * X2).scale(2)
        P = (g1**par.s).scale(c**2) + g2 * g2
        Pw = leading_part(P, w)
        I = X1 ** (p + 1) - X2 * X3
        return {"phi": phi, "P1": P1, "P2": P2, "P": P, "Pw": Pw, "I": I,
                "P1w": leading_part(P1, w), "P2w": leading_part(P2, w), "Q": P - Pw}
    return _cached(inst, "graded", go)


def verify_graded_analysis(inst: FamilyInstance) -> Certificate:
    par = inst.params
    p, q, m, c = par.p, par.q, par.m, par.c
    w = inst.omega
    g1, g2 = inst.g1, inst.g2
    F = inst.F
    pc = graded_pieces(inst)
    P, Pw, P1w, P2w, Q, I = pc["P"], pc["Pw"], pc["P1w"], pc["P2w"], pc["Q"], pc["I"]
    target = par.target_degree
    cert = CertificateBuilder("graded analysis")

    cert.equal("omega = (deg f1, deg f2, deg f3)", list(w), list(image_degrees(F)))
    cert.equal("(a) g1^omega = -x3^2", render_poly(-X3**2), render_poly(leading_part(g1, w)))
    cert.equal("(a) g2^omega = c_p x3^(2p+1)", render_poly((X3 ** (2 * p + 1)).scale(c)),
               render_poly(leading_part(g2, w)))
    cert.equal("(a) c_p = c", str(c), str(par.c_list[-1]))
    for i, gi in ((1, g1), (2, g2)):
        cert.equal(f"deg F(g{i}) = deg_omega g{i}", weighted_degree(gi, w), total_degree(F(gi)))

    cert.equal("(b) P = P1 + P2", True, P == pc["P1"] + pc["P2"])
    top = (0, 0, 2 * par.s)
    cert.equal(
        "(b) coefficients of x3^(4p+2) in c^2 g1^(2p+1), phi^2",
        [str(-c**2), str(c**2)],
        [str((g1**par.s).scale(c**2).coefficient(top)), str((pc["phi"] ** 2).coefficient(top))],
    )
    cert.equal("(c) supp(P1^omega) and supp(P2^omega) disjoint", True,
               not (support(P1w) & support(P2w)))
    (u_exp, c_prime), = P1w.terms.items() if P1w.is_monomial() else ((None, None),)
    cert.equal("(d) P1^omega is a single term", True, P1w.is_monomial())
    u = u_exp[0] if u_exp else None
    cert.equal("(d) u = p+1", p + 1, u)
    cert.equal("(d) P1^omega exponent = (u, 0, 2(2p-u+1))",
               [p + 1, 0, 2 * (2 * p - p)], list(u_exp) if u_exp else None)
    cert.equal("(d) c' = -2c", str(-2 * c), str(c_prime))
    cert.equal("(e) P2^omega = 2c x2 x3^(2p+1)",
               render_poly((X2 * X3 ** (2 * p + 1)).scale(2 * c)), render_poly(P2w))

    Ew, degE = leading_derivation(inst.E, w)
    # -(q+1) + m and p(q+1) - 1 both equal pq+p-1
    cert.equal("deg_omega(E(x_i)/x_i)", [p * q + p - 1, p * q + p - 1, -m], list(ratio_degrees(inst.E, w)))
    cert.equal("deg_omega E = pq+p-1", p * q + p - 1, degE)
    cert.equal("E^omega = (E(x1), E(x2), 0)",
               [render_poly(inst.E.images[0]), render_poly(inst.E.images[1]), "0"],
               [render_poly(g) for g in Ew.images])
    cert.equal("E(g1) = E(g2) = E(P) = 0", [True, True, True],
               [not apply_derivation(inst.E, f) for f in (g1, g2, P)])
    cert.equal("(f) E^omega(P^omega) = 0", "0", render_poly(apply_derivation(Ew, Pw)))
    cert.equal("(f) E^omega(P_i^omega) != 0", [True, True],
               [bool(apply_derivation(Ew, P1w)), bool(apply_derivation(Ew, P2w))])
    cert.equal("(g) P^omega = -2c x3^(2p) I", render_poly((X3 ** (2 * p) * I).scale(-2 * c)),
               render_poly(Pw))
    cert.equal("(h) deg_omega P = 2pm+m+1", 2 * p * m + m + 1, weighted_degree(P, w))
    cert.equal("(i) F(I) = I", render_poly(I), render_poly(F(I)))
    cert.equal("D(I) = 0", "0", render_poly(apply_derivation(inst.D, I)))
    cert.equal("deg F(P^omega) = deg(f3^(2p) I) = 2pm+p+1", target, total_degree(F(Pw)))

    eps_deg = weighted_degree(Polynomial.monomial(EPSILON, 1, laurent=True), w)
    cert.equal("deg_omega x^eps = q+1-2m", q + 1 - 2 * m, eps_deg)
    cert.equal("deg_omega(x3^(2p+1)/x2) = -(p+1) deg_omega x^eps", -(p + 1) * eps_deg,
               weighted_degree(Polynomial.monomial((0, -1, 2 * p + 1), 1, laurent=True), w))
    dQ = weighted_degree(Q, w)
    dP = weighted_degree(P, w)
    cert.holds("(j) deg_omega Q = deg_omega P mod deg_omega x^eps", "(dP - dQ) % eps == 0",
               [dQ, dP, eps_deg], (dP - dQ) % eps_deg == 0)
    cert.holds("(j) deg_omega Q <= deg_omega P + deg_omega x^eps", "dQ <= dP + eps",
               [dQ, dP + eps_deg], dQ <= dP + eps_deg)
    cert.holds("(j) deg_omega Q < 2pm+p+1", "dQ < 2pm+p+1", [dQ, target], dQ < target)
    FQ = F(Q)
    cert.holds("deg F(Q) <= deg_omega Q", "deg F(Q) <= dQ", [total_degree(FQ), dQ],
               total_degree(FQ) <= dQ)
    FP = F(P)
    cert.equal("(k) deg F(P) = 2pm+p+1", target, total_degree(FP))
    top_h, sq_h = theorem_polynomials(inst)
    cert.equal("F(P) = c^2 h1^(2p+1) + h2^2", True, FP == top_h + sq_h)
    return cert.build()


def corollary_automorphism(p: int, q: int, inst: FamilyInstance = None):
    """``(H', witness, certificate)`` for the type-I automorphism of degree
    ``(2m, (2p+1)m, 2pm+p+1)``."""
    inst = inst or build_family(p, q)
    par = inst.params
    Hp, witness = lemma_reduce(inst.H, par.lemma_constant, par.s)
    t1 = check_type_one(Hp, witness)
    cb = CertificateBuilder("corollary")
    m = par.m
    cb.equal("degrees (2m, (2p+1)m, 2pm+p+1)", [2 * m, (2 * p + 1) * m, par.target_degree],
             list(image_degrees(Hp)))
    cb.equal("tame word present", True, Hp.word is not None)
    cb.equal("(identity order, s) in prefilter", True, (witness.perm, witness.s) in prefilter_type_one(Hp))
    cert = cb.build().merged(verify_theorem(inst), verify_graded_analysis(inst), t1, label=f"corollary p={p} q={q}")
    return Hp, witness, cert


def nagata():
    """The Nagata map ``exp(w delta)`` and its inverse ``exp(-w delta)``."""
    w = X1 * X3 + X2 * X2
    delta = Derivation((X2.scale(-2), X3, Polynomial.zero()))
    wd = delta.times(w)
    N = exp_map(wd).without_word()
    Ninv = exp_map(-wd).without_word()
    return N, Ninv


def nagata_report():
    N, Ninv = nagata()
    w = X1 * X3 + X2 * X2
    cert = CertificateBuilder("nagata")
    explicit = (X1 - (w * X2).scale(2) - w * w * X3, X2 + w * X3, X3)
    cert.equal("N matches the explicit formula", True, N.images == explicit)
    cert.equal("deg N", 9, map_degree(N))
    cert.equal("N o N^-1 = id", True, compose(N, Ninv).images == (X1, X2, X3))
    cert.equal("N^-1 o N = id", True, compose(Ninv, N).images == (X1, X2, X3))
    cert.equal("type-I prefilter", [], prefilter_type_one(N))
    return N, Ninv, cert.build()


def kawanoue_pair(l: int, m: int):
    """``(f, g, certificate)`` with ``f^3 + g^2 = x1^(3l) x2^(3m) + 9/4 x2^2``."""
    if not (isinstance(l, int) and isinstance(m, int)) or l < 1 or m < 1:
        raise FamilyError("l and m must be integers >= 1")
    f = -(X1 ** (4 * l) * X2 ** (2 * (2 * m - 1))) - (X1**l * X2**m).scale(2)
    g = (X1 ** (6 * l) * X2 ** (3 * (2 * m - 1))
         + (X1 ** (3 * l) * X2 ** (3 * m - 1)).scale(3)
         + X2.scale(Fraction(3, 2)))
    s = f**3 + g * g
    df, dg, ds = total_degree(f), total_degree(g), total_degree(s)
    cert = CertificateBuilder(f"kawanoue l={l} m={m}")
    cert.holds("deg f : deg g = 2 : 3", "3*deg_f == 2*deg_g", [df, dg], 3 * df == 2 * dg)
    cert.equal("f^3 + g^2", render_poly(X1 ** (3 * l) * X2 ** (3 * m) + (X2 * X2).scale(Fraction(9, 4))),
               render_poly(s))
    minor = jacobian_minor(f, g, 0, 1)
    cert.equal("d(f,g)/d(x1,x2) != 0", True, bool(minor))
    if l == m == 1:
        cert.holds("deg(f^3+g^2) = deg f", "deg(f^3+g^2) == deg_f", [ds, df], ds == df)
    else:
        cert.holds("deg(f^3+g^2) < deg f", "deg(f^3+g^2) < deg_f", [ds, df], ds < df)
    return f, g, cert.build()


__all__ = [
    "DEFAULT_GRID",
    "EPSILON",
    "ClosedFormMismatch",
    "FamilyError",
    "FamilyInstance",
    "FamilyParams",
    "build_family",
    "closed_forms",
    "corollary_automorphism",
    "family_derivations",
    "graded_pieces",
    "kawanoue_pair",
    "nagata",
    "nagata_report",
    "theorem_polynomials",
    "verify_graded_analysis",
    "verify_theorem",
]
