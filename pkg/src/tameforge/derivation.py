"""Derivations of the polynomial ring and their exponential automorphisms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from .automorphism import PolyMap, triangular_word
from .polyring import (
    LaurentError,
    Polynomial,
    PolynomialError,
    leading_part,
    partial_derivative,
    total_degree,
    variables,
    weighted_degree,
)


class DerivationError(ValueError):
    pass


class NotLocallyNilpotent(DerivationError):
    """An iterate chain did not reach zero within the nilpotency cap."""


@dataclass(frozen=True)
class Derivation:
    """A k-derivation determined by the images of the variables."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if not imgs:
            raise DerivationError("a derivation needs at least one image")
        for g in imgs:
            if g.laurent:
                raise LaurentError("derivation images must be polynomials")
            if g.nvars != len(imgs):
                raise DerivationError("image nvars must equal the number of images")

    @property
    def nvars(self) -> int:
        return len(self.images)

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_derivation(self, f)

    def __neg__(self) -> "Derivation":
        return Derivation(tuple(-g for g in self.images))

    def times(self, w: Polynomial) -> "Derivation":
        """The derivation ``w * self``."""
        return Derivation(tuple(w * g for g in self.images))

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.images)


def apply_derivation(delta: Derivation, f: Polynomial) -> Polynomial:
    if f.laurent:
        raise LaurentError("derivations act on polynomials")
    if f.nvars != delta.nvars:
        raise DerivationError(f"nvars mismatch: {f.nvars} vs {delta.nvars}")
    out = Polynomial.zero(f.nvars)
    for i, img in enumerate(delta.images):
        if img and f.involves(i):
            out = out + img * partial_derivative(f, i)
    return out


def triangular_permutation(delta: Derivation) -> Optional[tuple]:
    """First (lexicographic) ordering ``sigma`` with ``delta(x_sigma[i])`` in ``k[x_sigma[:i]]``."""
    used = [g.variables() for g in delta.images]
    for sigma in itertools.permutations(range(delta.nvars)):
        seen: set = set()
        for j in sigma:
            if not used[j] <= seen:
                break
            seen.add(j)
        else:
            return sigma
    return None


def default_cap(delta: Derivation) -> int:
    degs = [total_degree(g) for g in delta.images if g]
    top = max(degs) if degs else 0
    return 10 * (top + 1) * delta.nvars


def iterates(delta: Derivation, f: Polynomial, cap: Optional[int] = None) -> list:
    """``[f, delta(f), delta^2(f), ...]`` up to the last nonzero iterate.

    With ``cap=None`` the loop runs until zero; only safe for locally
    nilpotent ``delta``.
    """
    chain = []
    cur = f
    while cur:
        if cap is not None and len(chain) > cap:
            raise NotLocallyNilpotent(f"iterates of {f} did not vanish within {cap} steps")
        chain.append(cur)
        cur = apply_derivation(delta, cur)
    return chain


def exp_apply(delta: Derivation, f: Polynomial, nilpotency_cap: Optional[int] = None) -> Polynomial:
    """``sum_l delta^l(f) / l!``."""
    cap = _cap_for(delta, nilpotency_cap)
    out = Polynomial.zero(f.nvars)
    for l, t in enumerate(iterates(delta, f, cap)):
        out = out + t.scale(Fraction(1, factorial(l)))
    return out


def _cap_for(delta: Derivation, cap: Optional[int]) -> Optional[int]:
    if cap is not None:
        if cap < 1:
            raise DerivationError("nilpotency cap must be positive")
        return cap
    # triangular derivations always terminate
    return None if triangular_permutation(delta) is not None else default_cap(delta)


def exp_map(delta: Derivation, nilpotency_cap: Optional[int] = None) -> PolyMap:
    """The automorphism ``exp(delta)``; triangular inputs come back with a tame word."""
    cap = _cap_for(delta, nilpotency_cap)
    images = tuple(exp_apply(delta, x, cap) for x in variables(delta.nvars))
    word = triangular_word(images) if triangular_permutation(delta) is not None else None
    return PolyMap(images, word)


def slice_polynomials(delta: Derivation, nilpotency_cap: Optional[int] = None) -> tuple:
    """Kernel elements ``g_i = sum_l delta^l(x_i)/l! * (-x_n)^l`` for ``i < n``.

    Requires ``delta(x_n) = 1``.
    """
    n = delta.nvars
    if delta.images[-1] != Polynomial.constant(1, n):
        raise DerivationError("slice formula needs delta(x_n) = 1")
    cap = _cap_for(delta, nilpotency_cap)
    minus_xn = -Polynomial.var(n - 1, n)
    out = []
    for x in variables(n)[:-1]:
        g = Polynomial.zero(n)
        pw = Polynomial.constant(1, n)
        for l, t in enumerate(iterates(delta, x, cap)):
            if l:
                pw = pw * minus_xn
            g = g + (t * pw).scale(Fraction(1, factorial(l)))
        out.append(g)
    return tuple(out)


def slice_map(delta: Derivation, nilpotency_cap: Optional[int] = None) -> PolyMap:
    """``(g_1, ..., g_{n-1}, x_n)`` with a tame word when it is triangular."""
    n = delta.nvars
    images = slice_polynomials(delta, nilpotency_cap) + (Polynomial.var(n - 1, n),)
    return PolyMap(images, triangular_word(images))


def ratio_degrees(delta: Derivation, eta: Sequence) -> tuple:
    """``deg_eta(delta(x_i) * x_i^-1)`` for each variable (``NEG_INF`` where the image is 0)."""
    return tuple(weighted_degree(r, eta) for r in _ratios(delta))


def _ratios(delta: Derivation) -> list:
    n = delta.nvars
    out = []
    for i, img in enumerate(delta.images):
        inv = [0] * n
        inv[i] = -1
        out.append(img * Polynomial.monomial(inv, 1, laurent=True))
    return out


def leading_derivation(delta: Derivation, eta: Sequence):
    """``(delta^eta, deg_eta delta)``.

    ``delta^eta`` keeps, for the variables whose ratio ``delta(x_i)/x_i``
    attains the maximal ``eta``-degree, the leading part of that ratio times
    ``x_i``; the other variables map to 0.
    """
    if delta.is_zero():
        raise DerivationError("leading derivation of the zero derivation is undefined")
    n = delta.nvars
    ratios = _ratios(delta)
    degs = [weighted_degree(r, eta) for r in ratios]
    top = max(degs)
    images = []
    for i, (r, d) in enumerate(zip(ratios, degs)):
        if r and d == top:
            images.append((leading_part(r, eta) * Polynomial.var(i, n)).as_polynomial())
        else:
            images.append(Polynomial.zero(n))
    return Derivation(tuple(images)), top


__all__ = [
    "Derivation",
    "DerivationError",
    "NotLocallyNilpotent",
    "PolynomialError",
    "apply_derivation",
    "default_cap",
    "exp_apply",
    "exp_map",
    "iterates",
    "leading_derivation",
    "ratio_degrees",
    "slice_map",
    "slice_polynomials",
    "triangular_permutation",
]
