"""Polynomial endomorphisms, tame generator words, bracket degree, Jacobians.

A map is stored as the tuple of variable images.  Composition follows the
substitution convention: ``compose(F, G)`` has images ``F(g_i)``, i.e. the map
``F o G`` acting on polynomials as ``f -> F(G(f))``.

Tameness is tracked by provenance only: a :class:`PolyMap` carrying a
:class:`GeneratorWord` is tame by construction and can be inverted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .polyring import (
    NEG_INF,
    LaurentError,
    Polynomial,
    PolynomialError,
    invert_matrix,
    partial_derivative,
    substitute,
    total_degree,
    variables,
)


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class Elementary:
    """``x_index -> x_index + phi`` with ``phi`` free of ``x_index``."""

    index: int
    phi: Polynomial

    def __post_init__(self):
        if self.phi.laurent:
            raise LaurentError("elementary step needs a polynomial")
        if not 0 <= self.index < self.phi.nvars:
            raise MapError(f"variable index {self.index} out of range")
        if self.phi.involves(self.index):
            raise MapError(f"phi involves x{self.index + 1}")

    def images(self) -> tuple:
        xs = list(variables(self.phi.nvars))
        xs[self.index] = xs[self.index] + self.phi
        return tuple(xs)

    def inverse(self) -> "Elementary":
        return Elementary(self.index, -self.phi)


@dataclass(frozen=True)
class Affine:
    """``x_i -> sum_j A[i][j] x_j + b[i]`` with ``A`` invertible."""

    A: Tuple[Tuple[Fraction, ...], ...]
    b: Tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.A)
        if len(self.b) != n or any(len(r) != n for r in self.A):
            raise MapError("affine step needs an n x n matrix and an n-vector")
        if invert_matrix(self.A) is None:
            raise MapError("affine matrix is singular")

    @property
    def nvars(self) -> int:
        return len(self.A)

    def images(self) -> tuple:
        xs = variables(self.nvars)
        out = []
        for row, bi in zip(self.A, self.b):
            img = Polynomial.constant(bi, self.nvars)
            for a, x in zip(row, xs):
                if a:
                    img = img + x.scale(a)
            out.append(img)
        return tuple(out)

    def inverse(self) -> "Affine":
        inv = invert_matrix(self.A)
        shift = tuple(-sum(inv[i][j] * self.b[j] for j in range(self.nvars)) for i in range(self.nvars))
        return Affine(tuple(tuple(r) for r in inv), shift)


Step = Union[Elementary, Affine]
GeneratorWord = Tuple[Step, ...]


class PolyMap:
    """An endomorphism of ``k[x_1..x_n]`` given by its variable images."""

    __slots__ = ("images", "word")

    def __init__(self, images: Sequence[Polynomial], word: Optional[Sequence[Step]] = None):
        images = tuple(images)
        if not images:
            raise MapError("a map needs at least one image")
        n = len(images)
        for g in images:
            if g.laurent:
                raise LaurentError("map images must be polynomials")
            if g.nvars != n:
                raise MapError("image nvars must equal the number of images")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "word", tuple(word) if word is not None else None)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMap is immutable")

    @property
    def nvars(self) -> int:
        return len(self.images)

    @property
    def is_tame(self) -> bool:
        return self.word is not None

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __iter__(self):
        return iter(self.images)

    def __getitem__(self, i):
        return self.images[i]

    def __call__(self, f: Polynomial) -> Polynomial:
        return substitute(f, self.images)

    def __repr__(self):
        body = ", ".join(str(g) for g in self.images)
        tag = f", word of {len(self.word)} steps" if self.word is not None else ""
        return f"PolyMap(({body}){tag})"

    def without_word(self) -> "PolyMap":
        return PolyMap(self.images)


def identity_map(nvars: int = 3) -> PolyMap:
    return PolyMap(variables(nvars), ())


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """``F o G``: the map whose images are ``F(g_i)``."""
    if F.nvars != G.nvars:
        raise MapError(f"nvars mismatch: {F.nvars} vs {G.nvars}")
    images = tuple(substitute(g, F.images) for g in G.images)
    word = F.word + G.word if F.word is not None and G.word is not None else None
    return PolyMap(images, word)


def realize_word(word: Sequence[Step], nvars: int = 3) -> PolyMap:
    """The map a generator word denotes (steps composed left to right)."""
    images = variables(nvars)
    for step in word:
        images = tuple(substitute(g, images) for g in step.images())
    return PolyMap(images, word)


def word_is_consistent(F: PolyMap) -> bool:
    """True when ``F`` has no word or its word realizes exactly ``F``'s images.

    The constructor trusts the word it is given (composition would otherwise
    pay for every product twice); this is the explicit check.
    """
    return F.word is None or realize_word(F.word, F.nvars).images == F.images


def map_degree(F: PolyMap) -> int:
    degs = [total_degree(g) for g in F.images]
    if NEG_INF in degs:
        raise MapError("map degree undefined: some image is zero")
    return sum(degs)


def image_degrees(F: PolyMap) -> tuple:
    return tuple(total_degree(g) for g in F.images)


def make_elementary(i: int, phi: Polynomial) -> PolyMap:
    step = Elementary(i, phi)
    return PolyMap(step.images(), (step,))


def make_affine(A: Sequence[Sequence], b: Sequence) -> PolyMap:
    step = Affine(tuple(tuple(Fraction(x) for x in r) for r in A), tuple(Fraction(x) for x in b))
    return PolyMap(step.images(), (step,))


def invert(F: PolyMap) -> PolyMap:
    """Inverse of a word-carrying map, realised from the reversed word."""
    if F.word is None:
        raise MapError("cannot invert a map without a generator word")
    return realize_word(tuple(s.inverse() for s in reversed(F.word)), F.nvars)


def is_identity(F: PolyMap) -> bool:
    return F.images == variables(F.nvars)


def triangular_word(images: Sequence[Polynomial]) -> Optional[GeneratorWord]:
    """Elementary word for a triangular map, or ``None``.

    A map is triangular when, for some ordering of the variables, every image
    is ``x_j + psi_j`` with ``psi_j`` depending only on earlier variables.  The
    word lists the last variable's step first; with the substitution convention
    each later step leaves the earlier variables' images untouched.
    """
    n = len(images)
    xs = variables(n)
    tails = [g - x for g, x in zip(images, xs)]
    for order in itertools.permutations(range(n)):
        seen: set = set()
        ok = True
        for j in order:
            if not tails[j].variables() <= seen:
                ok = False
                break
            seen.add(j)
        if ok:
            word = tuple(Elementary(j, tails[j]) for j in reversed(order) if tails[j])
            if realize_word(word, n).images == tuple(images):
                return word
    return None


def with_triangular_word(F: PolyMap) -> PolyMap:
    word = triangular_word(F.images)
    return PolyMap(F.images, word) if word is not None else F


def _minors(f: Polynomial, g: Polynomial):
    n = f.nvars
    df = [partial_derivative(f, i) for i in range(n)]
    dg = [partial_derivative(g, i) for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        yield (i, j), df[i] * dg[j] - df[j] * dg[i]


def bracket_degree(f: Polynomial, g: Polynomial):
    """Degree of the Poisson bracket ``[f, g]``: 2 + max degree of the 2x2 Jacobian minors."""
    if f.nvars != 3 or g.nvars != 3:
        raise MapError("bracket degree is defined for 3 variables")
    if f.laurent or g.laurent:
        raise LaurentError("bracket degree needs polynomials")
    return max(total_degree(m) for _, m in _minors(f, g)) + 2


def jacobian_minor(f: Polynomial, g: Polynomial, i: int, j: int) -> Polynomial:
    return partial_derivative(f, i) * partial_derivative(g, j) - partial_derivative(f, j) * partial_derivative(g, i)


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = Polynomial.zero(M[0][0].nvars)
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def jacobian_matrix(F: PolyMap) -> list:
    return [[partial_derivative(g, j) for j in range(F.nvars)] for g in F.images]


def jacobian_determinant(F: PolyMap) -> Polynomial:
    return _det(jacobian_matrix(F))


__all__ = [
    "Affine",
    "Elementary",
    "GeneratorWord",
    "MapError",
    "PolyMap",
    "PolynomialError",
    "bracket_degree",
    "compose",
    "identity_map",
    "image_degrees",
    "invert",
    "is_identity",
    "jacobian_determinant",
    "jacobian_matrix",
    "jacobian_minor",
    "make_affine",
    "make_elementary",
    "map_degree",
    "realize_word",
    "triangular_word",
    "with_triangular_word",
    "word_is_consistent",
]
