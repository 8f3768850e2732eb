"""Backend selection for the arithmetic kernels.

The compiled extension is used when it imports and the modulus fits in 63
bits; otherwise calls go to the pure-Python reference implementation.  Set
``PADICFAM_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py as _py

try:
    if os.environ.get("PADICFAM_PURE_PYTHON"):
        raise ImportError("pure-Python backend forced")
    from . import _kernels as _ext
except ImportError:
    _ext = None

BACKEND = "cython" if _ext is not None else "python"
_LIMIT = 2 ** 63

cyclo_degree = _py.cyclo_degree


def _pick(q):
    if _ext is not None and q < _LIMIT:
        return _ext
    return _py


def poly_mul_trunc(a, b, n, q):
    return _pick(q).poly_mul_trunc(list(a), list(b), n, q)


def cyclo_reduce(c, p, level, q):
    return _pick(q).cyclo_reduce(list(c), p, level, q)


def cyclo_mul(a, b, p, level, q):
    return _pick(q).cyclo_mul(list(a), list(b), p, level, q)


def group_ring_horner(coeffs, j, n, q):
    return _pick(q).group_ring_horner(list(coeffs), j, n, q)
