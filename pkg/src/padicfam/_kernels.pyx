# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernels; see _kernels_py for the reference semantics.

Moduli must be below 2**63 so that products fit in unsigned 128-bit words.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    typedef unsigned __int128 u128;
    """
    ctypedef unsigned long long u128

ctypedef unsigned long long u64

MAX_MODULUS = 2 ** 63


cdef u64* _load(list xs, Py_ssize_t n, u64 q) except NULL:
    cdef u64* out = <u64*> malloc(max(n, 1) * sizeof(u64))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef Py_ssize_t m = min(n, len(xs))
    for i in range(m):
        out[i] = <u64> (xs[i] % q)
    for i in range(m, n):
        out[i] = 0
    return out


cdef list _dump(u64* xs, Py_ssize_t n):
    return [xs[i] for i in range(n)]


def poly_mul_trunc(list a, list b, Py_ssize_t n, object q):
    cdef u64 qq = q
    cdef u64* x = _load(a, n, qq)
    cdef u64* y = _load(b, n, qq)
    cdef u64* out = _load([], n, qq)
    cdef Py_ssize_t i, j
    cdef u128 acc
    try:
        for i in range(n):
            acc = 0
            for j in range(i + 1):
                acc += (<u128> x[j] * y[i - j]) % qq
            out[i] = <u64> (acc % qq)
        return _dump(out, n)
    finally:
        free(x); free(y); free(out)


def cyclo_degree(p, level):
    if level == 0:
        return 1
    return p ** (level - 1) * (p - 1)


cdef void _reduce(u64* c, Py_ssize_t length, Py_ssize_t d, Py_ssize_t step,
                  Py_ssize_t p, u64 q) nogil:
    cdef Py_ssize_t i, j, base
    cdef u64 v
    for i in range(length - 1, d - 1, -1):
        v = c[i] % q
        if v:
            base = i - d
            for j in range(p - 1):
                c[base + j * step] = (c[base + j * step] + (q - v)) % q


def cyclo_reduce(list c, Py_ssize_t p, Py_ssize_t level, object q):
    cdef u64 qq = q
    cdef Py_ssize_t d = cyclo_degree(p, level)
    if level == 0:
        return [sum(c) % q]
    cdef Py_ssize_t length = max(len(c), d)
    cdef u64* buf = _load(c, length, qq)
    try:
        _reduce(buf, length, d, p ** (level - 1), p, qq)
        return _dump(buf, d)
    finally:
        free(buf)


def cyclo_mul(list a, list b, Py_ssize_t p, Py_ssize_t level, object q):
    cdef u64 qq = q
    if level == 0:
        return [a[0] * b[0] % q]
    cdef Py_ssize_t d = cyclo_degree(p, level)
    cdef Py_ssize_t length = 2 * d - 1
    cdef u64* x = _load(a, d, qq)
    cdef u64* y = _load(b, d, qq)
    cdef u64* full = _load([], length, qq)
    cdef Py_ssize_t i, j
    cdef u128 acc
    try:
        for i in range(length):
            acc = 0
            for j in range(max(0, i - d + 1), min(i, d - 1) + 1):
                acc += (<u128> x[j] * y[i - j]) % qq
            full[i] = <u64> (acc % qq)
        _reduce(full, length, d, p ** (level - 1), p, qq)
        return _dump(full, d)
    finally:
        free(x); free(y); free(full)


def group_ring_horner(list coeffs, Py_ssize_t j, Py_ssize_t n, object q):
    cdef u64 qq = q
    cdef u64* acc = _load([], n, qq)
    cdef u64* tmp = _load([], n, qq)
    cdef u64* cs = _load(coeffs, len(coeffs), qq)
    cdef Py_ssize_t i, k
    cdef Py_ssize_t m = len(coeffs)
    j %= n
    try:
        for i in range(m - 1, -1, -1):
            for k in range(n):
                tmp[(k + j) % n] = acc[k]
            for k in range(n):
                acc[k] = (tmp[k] + (qq - acc[k])) % qq
            acc[0] = (acc[0] + cs[i]) % qq
        return _dump(acc, n)
    finally:
        free(acc); free(tmp); free(cs)
