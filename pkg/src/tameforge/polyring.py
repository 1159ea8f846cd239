"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
:class:`~fractions.Fraction` coefficients.  Variables are indexed from 0 in the
Python API and printed as ``x1 .. xn``.  Laurent exponents (negative entries)
are allowed only on values built with ``laurent=True``; substitution,
differentiation and total degree refuse them.
"""

from __future__ import annotations

import functools
import os
import re
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .kernels import add_scaled_into, mul_terms

Rational = Union[int, Fraction]
ExponentVector = tuple

MAX_EXPONENT = 2**31 - 1
DEFAULT_MAX_TERMS = 10**7


class PolynomialError(ValueError):
    pass


class LaurentError(PolynomialError):
    """An operation that needs honest polynomials was given a Laurent value."""


class TermLimitExceeded(RuntimeError):
    """An intermediate result grew past ``TAMEFORGE_MAX_TERMS``."""


class ParseError(PolynomialError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def max_terms() -> int:
    raw = os.environ.get("TAMEFORGE_MAX_TERMS")
    return int(raw) if raw else DEFAULT_MAX_TERMS


@functools.total_ordering
class MinusInfinity:
    """Degree of the zero polynomial; below every rational, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("tameforge.MinusInfinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("-inf - -inf is undefined")
        return self

    def __repr__(self):
        return "-inf"

    __str__ = __repr__

    def __reduce__(self):
        return (MinusInfinity, ())


NEG_INF = MinusInfinity()


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"coefficients must be int or Fraction, got {type(c).__name__}")


class Polynomial:
    """Immutable exact polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "laurent", "terms", "_hash")

    def __init__(self, terms: Optional[Mapping] = None, nvars: int = 3, laurent: bool = False):
        if nvars < 1:
            raise PolynomialError("nvars must be positive")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise PolynomialError(f"exponent vector {exps} has length != {nvars}")
            if not laurent and any(e < 0 for e in exps):
                raise LaurentError(f"negative exponent in {exps} without laurent=True")
            c = _frac(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self._set(clean, nvars, laurent)

    def _set(self, terms, nvars, laurent):
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "laurent", laurent)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, terms: dict, nvars: int, laurent: bool = False) -> "Polynomial":
        # trusted constructor: terms already canonical
        if len(terms) > max_terms():
            raise TermLimitExceeded(f"{len(terms)} terms exceeds TAMEFORGE_MAX_TERMS")
        obj = cls.__new__(cls)
        obj._set(terms, nvars, laurent)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars: int = 3) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c: Rational, nvars: int = 3) -> "Polynomial":
        c = _frac(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = 3) -> "Polynomial":
        if not 0 <= i < nvars:
            raise PolynomialError(f"variable index {i} out of range for nvars={nvars}")
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], c: Rational = 1, laurent: bool = False) -> "Polynomial":
        return cls({tuple(exps): c}, len(exps), laurent=laurent or any(e < 0 for e in exps))

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * self.nvars}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def variables(self) -> set:
        return {i for i in range(self.nvars) if self.involves(i)}

    def as_polynomial(self) -> "Polynomial":
        """Drop the Laurent flag; fails if a negative exponent remains."""
        if any(e < 0 for k in self.terms for e in k):
            raise LaurentError("value still has negative exponents")
        return Polynomial._raw(self.terms, self.nvars, False)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise PolynomialError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = (self, other) if len(self.terms) >= len(other.terms) else (other, self)
        acc = dict(a.terms)
        add_scaled_into(acc, b.terms, 1)
        return Polynomial._raw(acc, self.nvars, self.laurent or other.laurent)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({k: -c for k, c in self.terms.items()}, self.nvars, self.laurent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        add_scaled_into(acc, other.terms, -1)
        return Polynomial._raw(acc, self.nvars, self.laurent or other.laurent)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(mul_terms(self.terms, other.terms), self.nvars,
                               self.laurent or other.laurent)

    __rmul__ = __mul__

    def scale(self, c: Rational) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({k: v * c for k, v in self.terms.items()}, self.nvars, self.laurent)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise PolynomialError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        if self.laurent:
            result = Polynomial._raw(result.terms, self.nvars, True)
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.terms == Polynomial.constant(other, self.nvars).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nvars, frozenset(self.terms.items()))))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Polynomial({render_poly(self)!r}, nvars={self.nvars})"

    def __str__(self):
        return render_poly(self)

    def __call__(self, *images: "Polynomial") -> "Polynomial":
        return substitute(self, images)


# ---------------------------------------------------------------------------
# functional API


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def poly_pow(f: Polynomial, e: int) -> Polynomial:
    return f**e


def _require_polynomial(f: Polynomial, what: str) -> None:
    if f.laurent:
        raise LaurentError(f"{what} is not defined for Laurent values")


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    _require_polynomial(f, "partial_derivative")
    if not 0 <= i < f.nvars:
        raise PolynomialError(f"variable index {i} out of range")
    out = {}
    for k, c in f.terms.items():
        e = k[i]
        if e:
            k2 = k[:i] + (e - 1,) + k[i + 1:]
            out[k2] = c * e
    return Polynomial._raw(out, f.nvars)


def substitute(f: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Evaluate ``f(images[0], ..., images[n-1])`` exactly."""
    _require_polynomial(f, "substitute")
    if len(images) != f.nvars:
        raise PolynomialError(f"need {f.nvars} images, got {len(images)}")
    target = {g.nvars for g in images}
    if len(target) != 1:
        raise PolynomialError("images must share nvars")
    (nv,) = target
    for g in images:
        _require_polynomial(g, "substitute")
    if not f.terms:
        return Polynomial.zero(nv)

    # Horner-like grouping: sort by exponent so cached powers are reused.
    powers = [{0: {(0,) * nv: Fraction(1)}} for _ in images]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            best = max(k for k in cache if k <= e)
            cur = cache[best]
            base = images[i].terms
            for j in range(best + 1, e + 1):
                cur = mul_terms(cur, base)
                cache[j] = cur
        return cache[e]

    # Group terms by their trailing exponents so the product of the last
    # n-1 powers is formed once per group.
    groups: dict = {}
    for k, c in f.terms.items():
        groups.setdefault(k[1:], []).append((k[0], c))
    acc: dict = {}
    limit = max_terms()
    for tail, heads in groups.items():
        tail_prod = {(0,) * nv: Fraction(1)}
        for j, e in enumerate(tail, start=1):
            if e:
                tail_prod = mul_terms(tail_prod, power(j, e))
        inner: dict = {}
        for e0, c in heads:
            add_scaled_into(inner, power(0, e0), c)
        add_scaled_into(acc, mul_terms(inner, tail_prod), 1)
        if len(acc) > limit:
            raise TermLimitExceeded("substitution exceeded TAMEFORGE_MAX_TERMS")
    return Polynomial._raw(acc, nv)


def total_degree(f: Polynomial):
    _require_polynomial(f, "total_degree")
    if not f.terms:
        return NEG_INF
    return max(sum(k) for k in f.terms)


def support(f: Polynomial) -> frozenset:
    return frozenset(f.terms)


def _weights(eta: Sequence, nvars: int) -> tuple:
    eta = tuple(_frac(w) for w in eta)
    if len(eta) != nvars:
        raise PolynomialError(f"weight vector length {len(eta)} != nvars {nvars}")
    # integral weights keep the inner products in plain int arithmetic
    if all(w.denominator == 1 for w in eta):
        return tuple(int(w) for w in eta)
    return eta


def weighted_degree(f: Polynomial, eta: Sequence):
    """Maximum of ``alpha . eta`` over the support; ``NEG_INF`` for zero."""
    eta = _weights(eta, f.nvars)
    if not f.terms:
        return NEG_INF
    d = max(sum(a * w for a, w in zip(k, eta)) for k in f.terms)
    return int(d) if d.denominator == 1 else d


def leading_part(f: Polynomial, eta: Sequence) -> Polynomial:
    """Sum of the terms of ``f`` of maximal ``eta``-weight."""
    if not f.terms:
        raise PolynomialError("leading part of the zero polynomial is undefined")
    eta = _weights(eta, f.nvars)
    d = weighted_degree(f, eta)
    return Polynomial._raw(
        {k: c for k, c in f.terms.items() if sum(a * w for a, w in zip(k, eta)) == d},
        f.nvars,
        f.laurent,
    )


def highest_homogeneous_part(f: Polynomial) -> Polynomial:
    return leading_part(f, (1,) * f.nvars)


def is_homogeneous(f: Polynomial) -> bool:
    return len({sum(k) for k in f.terms}) <= 1


# ---------------------------------------------------------------------------
# linear algebra


def solve_linear(A: Sequence[Sequence[Rational]], b: Sequence[Rational]) -> Optional[list]:
    """Exact solution of ``A x = b`` (free variables set to 0), or ``None``.

    Plain Gauss-Jordan elimination over :class:`Fraction`.
    """
    rows = len(A)
    if len(b) != rows:
        raise PolynomialError("dimension mismatch between A and b")
    cols = len(A[0]) if rows else 0
    if any(len(r) != cols for r in A):
        raise PolynomialError("ragged matrix")
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][col]:
                fac = M[i][col]
                M[i] = [x - fac * y for x, y in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    if any(M[i][cols] for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, col in enumerate(pivots):
        x[col] = M[i][cols]
    return x


def invert_matrix(A: Sequence[Sequence[Rational]]) -> Optional[list]:
    """Exact inverse of a square matrix, or ``None`` if singular."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise PolynomialError("matrix is not square")
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        x = solve_linear(A, e)
        if x is None:
            return None
        cols.append(x)
    inv = [[cols[j][i] for j in range(n)] for i in range(n)]
    # a consistent but singular system yields a non-inverse; confirm
    for i in range(n):
        for j in range(n):
            s = sum(Fraction(A[i][k]) * inv[k][j] for k in range(n))
            if s != (1 if i == j else 0):
                return None
    return inv


# ---------------------------------------------------------------------------
# text format

_TOKEN_TEMPLATE = r"\s*(?:(?P<num>\d+)|(?P<var>{}(?P<idx>\d+))|(?P<op>[-+*/^])|(?P<bad>\S))"


@functools.lru_cache(maxsize=None)
def _token_re(symbol: str):
    return re.compile(_TOKEN_TEMPLATE.format(re.escape(symbol)))


def _grlex_key(k: tuple):
    return (sum(k), k)


def render_poly(f: Polynomial, symbol: str = "x") -> str:
    """Deterministic text form, terms in descending graded-lex order (x1 > x2 > ...)."""
    if not f.terms:
        return "0"
    parts = []
    for k in sorted(f.terms, key=_grlex_key, reverse=True):
        c = f.terms[k]
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        factors = []
        for i, e in enumerate(k):
            if e == 1:
                factors.append(f"{symbol}{i + 1}")
            elif e:
                factors.append(f"{symbol}{i + 1}^{e}")
        coef = str(mag)
        if not factors:
            body = coef
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = coef + "*" + "*".join(factors)
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_poly(text: str, nvars: int = 3, laurent: bool = False, symbol: str = "x") -> Polynomial:
    """Parse the ``render_poly`` format.

    Grammar: a signed sum of terms; a term is an optional rational coefficient
    followed by ``*``-joined factors ``xI`` or ``xI^E``, or a bare rational.
    ``E`` must be positive unless ``laurent`` is set, which also admits ``-E``.
    """
    toks = []
    pos = 0
    while pos < len(text):
        m = _token_re(symbol).match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        kind = "num" if m.group("num") else "var" if m.group("var") else "op"
        val = m.group("num") or m.group("idx") or m.group("op")
        toks.append((kind, val, m.start(kind)))
        pos = m.end()
    if not toks:
        raise ParseError("empty input", text, 0)
    toks.append(("end", None, len(text)))
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, val=None):
        nonlocal i
        t = toks[i]
        if (kind and t[0] != kind) or (val and t[1] != val):
            want = val or kind
            raise ParseError(f"expected {want!r}", text, t[2])
        i += 1
        return t

    def rational():
        num = int(take("num")[1])
        if peek()[:2] == ("op", "/"):
            take()
            t = take("num")
            den = int(t[1])
            if den == 0:
                raise ParseError("zero denominator", text, t[2])
            return Fraction(num, den)
        return Fraction(num)

    def factor(exps):
        t = take("var")
        idx = int(t[1])
        if not 1 <= idx <= nvars:
            raise ParseError(f"variable {symbol}{idx} out of range for nvars={nvars}", text, t[2])
        e = 1
        if peek()[:2] == ("op", "^"):
            take()
            neg = False
            if peek()[:2] == ("op", "-"):
                if not laurent:
                    raise ParseError("negative exponent requires laurent mode", text, peek()[2])
                take()
                neg = True
            et = take("num")
            e = int(et[1])
            if e > MAX_EXPONENT:
                raise ParseError("exponent overflow", text, et[2])
            if e == 0:
                raise ParseError("exponent must be positive", text, et[2])
            e = -e if neg else e
        exps[idx - 1] += e
        if abs(exps[idx - 1]) > MAX_EXPONENT:
            raise ParseError("exponent overflow", text, t[2])

    terms: dict = {}
    first = True
    while True:
        t = peek()
        sign = 1
        if t[0] == "op" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        elif not first:
            raise ParseError("expected '+' or '-'", text, t[2])
        first = False
        exps = [0] * nvars
        coef = Fraction(1)
        if peek()[0] == "num":
            coef = rational()
            if peek()[:2] == ("op", "*"):
                take()
                factor(exps)
        else:
            factor(exps)
        while peek()[:2] == ("op", "*"):
            take()
            factor(exps)
        k = tuple(exps)
        terms[k] = terms.get(k, 0) + sign * coef
        if peek()[0] == "end":
            break
    return Polynomial(terms, nvars, laurent=laurent)


def variables(nvars: int = 3) -> tuple:
    return tuple(Polynomial.var(i, nvars) for i in range(nvars))

