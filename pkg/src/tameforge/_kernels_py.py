"""Pure-Python multiplication kernel (fallback for ``_ckernels``).

Term maps are ``dict[tuple[int, ...], Fraction]``.  Coefficients are lifted to
integers over a common denominator so the inner loop touches only ``int``
objects; one ``Fraction`` normalisation is paid per output term.
"""

from fractions import Fraction
from math import lcm


def _lift(terms):
    den = 1
    for c in terms.values():
        den = lcm(den, c.denominator)
    return [(k, c.numerator * (den // c.denominator)) for k, c in terms.items()], den


def mul_terms(a, b):
    """Product of two term maps (exponent tuple -> Fraction)."""
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    la, da = _lift(a)
    lb, db = _lift(b)
    acc = {}
    get = acc.get
    for kb, cb in lb:
        if len(kb) == 3:
            b0, b1, b2 = kb
            for ka, ca in la:
                k = (ka[0] + b0, ka[1] + b1, ka[2] + b2)
                acc[k] = get(k, 0) + ca * cb
        else:
            for ka, ca in la:
                k = tuple(x + y for x, y in zip(ka, kb))
                acc[k] = get(k, 0) + ca * cb
    den = da * db
    return {k: Fraction(v, den) for k, v in acc.items() if v}


def add_scaled_into(acc, terms, scale):
    """In-place ``acc += scale * terms``; zero entries are dropped."""
    for k, c in terms.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
