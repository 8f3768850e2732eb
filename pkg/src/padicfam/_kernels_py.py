"""Pure-Python versions of the arithmetic kernels.

Every function takes and returns plain lists of non-negative ints reduced
modulo ``q``.  The compiled module ``_kernels`` exposes the same names with
the same semantics; :mod:`padicfam.kernels` picks one at import time.
"""


def poly_mul_trunc(a, b, n, q):
    """Product of two coefficient lists modulo (q, T^n)."""
    out = [0] * n
    b = b[:n]
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        lim = n - i
        for j, y in enumerate(b[:lim]):
            out[i + j] += x * y
    return [v % q for v in out]


def cyclo_degree(p, level):
    if level == 0:
        return 1
    return p ** (level - 1) * (p - 1)


def cyclo_reduce(c, p, level, q):
    """Reduce a polynomial modulo (q, Phi_{p^level}(X))."""
    d = cyclo_degree(p, level)
    if level == 0:
        return [sum(c) % q]
    c = list(c)
    if len(c) < d:
        c.extend([0] * (d - len(c)))
    step = p ** (level - 1)
    # X^d = -(1 + X^step + ... + X^{(p-2) step})
    for i in range(len(c) - 1, d - 1, -1):
        v = c[i]
        if v:
            base = i - d
            for j in range(p - 1):
                c[base + j * step] -= v
    return [v % q for v in c[:d]]


def cyclo_mul(a, b, p, level, q):
    if level == 0:
        return [a[0] * b[0] % q]
    d = cyclo_degree(p, level)
    full = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            full[i + j] += x * y
    return cyclo_reduce(full, p, level, q)


def group_ring_horner(coeffs, j, n, q):
    """Evaluate sum_i coeffs[i] (X^j - 1)^i in (Z/q)[X]/(X^n - 1)."""
    acc = [0] * n
    j %= n
    for c in reversed(coeffs):
        if j:
            rot = acc[-j:] + acc[:-j]
        else:
            rot = acc
        acc = [(r - x) % q for r, x in zip(rot, acc)]
        acc[0] = (acc[0] + c) % q
    return acc
