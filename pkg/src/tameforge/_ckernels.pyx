# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-map kernels; same contract as ``_kernels_py``.

Three-variable, nonnegative exponents below 2**21 are packed into one 64-bit
key.  Coefficients are first accumulated as int64 with overflow detection; on
overflow the product is redone with Python integers.  Anything else (Laurent
exponents, other variable counts) goes to the pure-Python kernel.
"""

from fractions import Fraction
from math import gcd, lcm

from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from cython.operator cimport dereference as deref

from . import _kernels_py

cdef uint64_t MASK = (1 << 21) - 1
cdef int64_t EXP_LIMIT = 1 << 21

cdef extern from *:
    """
    static inline int tf_mul_overflow(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int tf_add_overflow(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int tf_mul_overflow(long long a, long long b, long long *r) nogil
    int tf_add_overflow(long long a, long long b, long long *r) nogil


cdef inline uint64_t pack(tuple k):
    return (<uint64_t>k[0] << 42) | (<uint64_t>k[1] << 21) | <uint64_t>k[2]


cdef inline tuple unpack(uint64_t key):
    return (<long>(key >> 42), <long>((key >> 21) & MASK), <long>(key & MASK))


cdef bint packable(dict a, int64_t *maxexp):
    cdef int64_t m = 0
    cdef tuple k
    for k in a:
        if len(k) != 3:
            return False
        for e in k:
            if e < 0 or e >= EXP_LIMIT:
                return False
            if e > m:
                m = e
    maxexp[0] = m
    return True


try:
    Fraction(1, 1, _normalize=False)

    def _frac(n, d):
        g = gcd(n, d)
        return Fraction(n // g, d // g, _normalize=False)
except TypeError:  # Python >= 3.12
    def _frac(n, d):
        g = gcd(n, d)
        return Fraction._from_coprime_ints(n // g, d // g)


cdef tuple lift(dict terms):
    den = 1
    for c in terms.values():
        den = lcm(den, c.denominator)
    keys = []
    nums = []
    for k, c in terms.items():
        keys.append(pack(k))
        nums.append(c.numerator * (den // c.denominator))
    return keys, nums, den


cdef dict mul_small(list ka, list na, list kb, list nb):
    """int64 accumulation; returns None on overflow."""
    cdef vector[uint64_t] va, vb
    cdef vector[long long] ca, cb
    cdef Py_ssize_t i, j, la = len(ka), lb = len(kb)
    cdef unordered_map[uint64_t, long long] acc
    cdef long long prod, cur
    try:
        for i in range(la):
            va.push_back(ka[i])
            ca.push_back(na[i])
        for j in range(lb):
            vb.push_back(kb[j])
            cb.push_back(nb[j])
    except OverflowError:
        return None
    acc.reserve(<size_t>(la * lb if la * lb < 1 << 20 else 1 << 20))
    for j in range(lb):
        for i in range(la):
            if tf_mul_overflow(ca[i], cb[j], &prod):
                return None
            cur = acc[va[i] + vb[j]]
            if tf_add_overflow(cur, prod, &cur):
                return None
            acc[va[i] + vb[j]] = cur
    out = {}
    for item in acc:
        if item.second:
            out[item.first] = item.second
    return out


cdef dict mul_big(list ka, list na, list kb, list nb):
    # C hash from packed key to a slot in a Python list of int accumulators
    cdef vector[uint64_t] va, vb
    cdef unordered_map[uint64_t, Py_ssize_t] slot
    cdef Py_ssize_t i, j, idx, la = len(ka), lb = len(kb)
    cdef uint64_t key
    cdef unordered_map[uint64_t, Py_ssize_t].iterator it
    cdef list sums = []
    cdef list keys = []
    for i in range(la):
        va.push_back(ka[i])
    for j in range(lb):
        vb.push_back(kb[j])
    for j in range(lb):
        nbj = nb[j]
        for i in range(la):
            key = va[i] + vb[j]
            it = slot.find(key)
            if it == slot.end():
                slot[key] = len(sums)
                sums.append(na[i] * nbj)
                keys.append(key)
            else:
                idx = deref(it).second
                sums[idx] = sums[idx] + na[i] * nbj
    return dict(zip(keys, sums))


def mul_terms(dict a, dict b):
    """Product of two term maps (exponent tuple -> Fraction)."""
    cdef int64_t ma, mb
    if not a or not b:
        return {}
    if not packable(a, &ma) or not packable(b, &mb) or ma + mb >= EXP_LIMIT:
        return _kernels_py.mul_terms(a, b)
    ka, na, da = lift(a)
    kb, nb, db = lift(b)
    raw = mul_small(ka, na, kb, nb)
    if raw is None:
        raw = mul_big(ka, na, kb, nb)
    den = da * db
    cdef dict out = {}
    for key, v in raw.items():
        if v:
            out[unpack(key)] = _frac(v, den)
    return out


cdef inline object fmul(object sn, object sd, object c):
    # (sn/sd) * c with a single gcd pair
    cn = c.numerator
    cd = c.denominator
    g1 = gcd(sn, cd)
    g2 = gcd(cn, sd)
    return (sn // g1) * (cn // g2), (sd // g2) * (cd // g1)


def add_scaled_into(dict acc, dict terms, scale):
    """In-place ``acc += scale * terms``; zero entries are dropped."""
    if not scale:
        return
    if type(scale) is int:
        sn, sd = scale, 1
    else:
        sn, sd = scale.numerator, scale.denominator
    for k, c in terms.items():
        tn, td = fmul(sn, sd, c)
        old = acc.get(k)
        if old is None:
            acc[k] = _frac(tn, td)
            continue
        on = old.numerator
        od = old.denominator
        if od == td:
            n = on + tn
            d = od
        else:
            n = on * td + tn * od
            d = od * td
        if n:
            acc[k] = _frac(n, d)
        else:
            del acc[k]
