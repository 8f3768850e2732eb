"""Truncated power series with p-depletion and binomial substitution.

Coefficients may be any of the package's ring elements (PadicNumber,
CyclotomicNumber, IwasawaElement).  A series always stores exactly
``truncation`` coefficients; products and sums are truncated to the smaller
input truncation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from . import kernels
from .errors import InsufficientPrecision, PrecisionMismatch
from .padic import PadicNumber, factorial_valuation

DEFAULT_TRUNCATION = 32


class PrecisionLossWarning(UserWarning):
    """A substitution returned fewer p-adic digits than its input series."""


def _precision_of(x):
    return x.precision


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """sum_{n < truncation} coeffs[n] T^n over a ring of p-adic elements."""

    coeffs: tuple
    prime: int

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_ints(cls, values, p: int, N: int, M: int | None = None) -> PowerSeries:
        values = list(values)
        M = len(values) if M is None else M
        values = (values + [0] * M)[:M]
        return cls(tuple(PadicNumber(v, p, N) for v in values), p)

    @classmethod
    def zero(cls, p: int, N: int, M: int) -> PowerSeries:
        return cls.from_ints([], p, N, M)

    @classmethod
    def monomial(cls, p: int, N: int, M: int, n: int = 1) -> PowerSeries:
        vals = [0] * M
        if n < M:
            vals[n] = 1
        return cls.from_ints(vals, p, N, M)

    def _like(self, coeffs):
        return PowerSeries(tuple(coeffs), self.prime)

    # -- properties -----------------------------------------------------

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    @property
    def precision(self) -> int:
        return min(_precision_of(c) for c in self.coeffs)

    @property
    def is_scalar(self) -> bool:
        """True when every coefficient is a PadicNumber."""
        return all(isinstance(c, PadicNumber) for c in self.coeffs)

    def residues(self) -> list[int]:
        return [c.residue for c in self.coeffs]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def truncate(self, M: int) -> PowerSeries:
        return self._like(self.coeffs[:M])

    def map_coefficients(self, fn) -> PowerSeries:
        return self._like(fn(c) for c in self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    # -- ring structure -------------------------------------------------

    def _check(self, other):
        if not isinstance(other, PowerSeries):
            return False
        if other.prime != self.prime:
            raise PrecisionMismatch("series over different primes")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return self._like(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self._like(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return self._like(-a for a in self.coeffs)

    def scale(self, s) -> PowerSeries:
        """Multiply every coefficient by the scalar ``s`` (on the right)."""
        return self._like(a * s for a in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        self._check(other)
        M = min(self.truncation, other.truncation)
        if self.is_scalar and other.is_scalar:
            N = min(self.precision, other.precision)
            prod = kernels.poly_mul_trunc(self.residues(), other.residues(), M, self.prime ** N)
            return PowerSeries.from_ints(prod, self.prime, N, M)
        zero = self.coeffs[0].zero_like() * other.coeffs[0].zero_like()
        out = [zero] * M
        for i in range(M):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(M - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return self._like(out)

    def __rmul__(self, other):
        return self._like(other * a for a in self.coeffs)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("series powers must be non-negative")
        result = self._like([self.coeffs[0].one_like()] + [c.zero_like() for c in self.coeffs[1:]])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        body = ", ".join(repr(getattr(c, "residue", c)) for c in self.coeffs[:8])
        more = ", ..." if self.truncation > 8 else ""
        return f"PowerSeries([{body}{more}], p={self.prime}, N={self.precision}, M={self.truncation})"


# ---------------------------------------------------------------------------
# Structural operators
# ---------------------------------------------------------------------------


def deplete(f: PowerSeries) -> PowerSeries:
    """Keep a_n for p not dividing n; a_0 is dropped as well since p | 0."""
    p = f.prime
    return f._like(c if n % p else c.zero_like() for n, c in enumerate(f.coeffs))


def binomial_power(alpha: PadicNumber, M: int) -> PowerSeries:
    """(1+T)^alpha = sum_{k<M} C(alpha, k) T^k.

    C(alpha, k) is the integer binomial of the canonical representative of
    alpha; it is correct modulo p^(N - v_p(k!)), so the series is returned at
    precision N - v_p((M-1)!).
    """
    p, N = alpha.prime, alpha.precision
    loss = factorial_valuation(M - 1, p)
    if N - loss < 1:
        raise InsufficientPrecision(
            f"alpha known mod p^{N} but v_p({M - 1}!) = {loss}; need more digits"
        )
    return PowerSeries.from_ints(_binomials(alpha.residue, M), p, N - loss, M)


def _binomials(r: int, M: int) -> list[int]:
    return [comb(r, k) for k in range(M)]


@lru_cache(maxsize=256)
def _substitution_rows(p: int, residue: int, N: int, M: int) -> tuple:
    q = p ** N
    g = [c % q for c in _binomials(residue, M)]
    g[0] = (g[0] - 1) % q  # (1+T)^alpha - 1
    rows = [[1] + [0] * (M - 1)]
    for _ in range(1, M):
        rows.append(kernels.poly_mul_trunc(rows[-1], g, M, q))
    return tuple(tuple(r) for r in rows)


def substitution_matrix(alpha: PadicNumber, M: int) -> tuple[tuple, int]:
    """Rows n = coefficients of ((1+T)^alpha - 1)^n mod T^M, and their precision."""
    base = binomial_power(alpha, M)
    N = base.precision
    return _substitution_rows(alpha.prime, alpha.residue, N, M), N


def substitute_binomial(f: PowerSeries, alpha: PadicNumber) -> PowerSeries:
    """f((1+T)^alpha - 1) truncated at the truncation of f.

    Works for any coefficient ring since the substitution matrix has Z_p
    entries.  Emits PrecisionLossWarning if alpha lacks guard digits.
    """
    M = f.truncation
    rows, N = substitution_matrix(alpha, M)
    p = f.prime
    if N < f.precision:
        warnings.warn(
            f"substitution lowered precision from {f.precision} to {N}",
            PrecisionLossWarning,
            stacklevel=2,
        )
    if f.is_scalar:
        q = p ** min(N, f.precision)
        a = f.residues()
        out = [0] * M
        for n, an in enumerate(a):
            if an:
                for k, b in enumerate(rows[n]):
                    out[k] += an * b
        return PowerSeries.from_ints([v % q for v in out], p, min(N, f.precision), M)
    zero = f.coeffs[0].zero_like()
    out = [zero] * M
    for n, an in enumerate(f.coeffs):
        if an.is_zero():
            continue
        for k in range(n, M):
            b = rows[n][k]
            if b:
                out[k] = out[k] + an * PadicNumber(b, p, N)
    # coefficients that received no contribution still carry the reduced precision
    out = [c * PadicNumber(1, p, N) for c in out]
    return f._like(out)
