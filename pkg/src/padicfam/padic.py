"""Exact arithmetic in Z_p and Z_p[zeta_{p^m}] at a fixed absolute precision.

A :class:`PadicNumber` is an integer residue modulo ``p**N``; a
:class:`CyclotomicNumber` is a residue vector in the power basis of
``Z_p[X]/(Phi_{p^m}(X))`` modulo ``p**N``.  Binary operations take the
minimum of the operand precisions, and the only operations that change
precision otherwise are the explicit :meth:`divide_by_p`, :meth:`lift` and
:meth:`reduce`.

Equality is congruence at the common precision, so ``==`` between values of
different precisions compares them modulo the smaller power of ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .errors import (
    DenominatorDivisibleByP,
    NoSquareRoot,
    NotAUnit,
    NotPrincipalUnit,
    PrecisionMismatch,
)

INFINITY = math.inf


@lru_cache(maxsize=None)
def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def valuation_int(n: int, p: int) -> float:
    """p-adic valuation of an integer; ``inf`` for 0."""
    if n == 0:
        return INFINITY
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorial_valuation(k: int, p: int) -> int:
    """v_p(k!) by Legendre's formula."""
    v, pk = 0, p
    while pk <= k:
        v += k // pk
        pk *= p
    return v


def _check_prime(p):
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


@dataclass(frozen=True, eq=False)
class PadicNumber:
    """An element of Z_p known modulo p**precision."""

    residue: int
    prime: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be positive")
        _check_prime(self.prime)
        object.__setattr__(self, "residue", self.residue % self.prime ** self.precision)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_int(cls, n: int, p: int, N: int) -> PadicNumber:
        return cls(n, p, N)

    def _like(self, residue, precision=None):
        return PadicNumber(residue, self.prime, self.precision if precision is None else precision)

    def zero_like(self) -> PadicNumber:
        return self._like(0)

    def one_like(self) -> PadicNumber:
        return self._like(1)

    # -- basic properties -----------------------------------------------

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    @property
    def valuation(self) -> float:
        return min(valuation_int(self.residue, self.prime), INFINITY)

    def is_zero(self) -> bool:
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.residue % self.prime != 0

    def lift(self, N: int) -> PadicNumber:
        """The canonical representative viewed at precision ``N >= precision``.

        This treats the stored residue as an exact integer; callers use it only
        where that is the documented convention for ingested data.
        """
        if N < self.precision:
            raise ValueError("lift cannot lower precision; use reduce")
        return self._like(self.residue, N)

    def reduce(self, N: int) -> PadicNumber:
        if N > self.precision:
            raise ValueError("reduce cannot raise precision")
        return self._like(self.residue, N)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise PrecisionMismatch("different primes")
            return other
        if isinstance(other, int):
            return self._like(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.precision, o.precision)
        return self._like(self.residue + o.residue, n)

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.residue)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.precision, o.precision)
        return self._like(self.residue * o.residue, n)

    __rmul__ = __mul__

    def inverse(self) -> PadicNumber:
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit")
        return self._like(pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._like(pow(self.residue, e, self.modulus))

    def divide_by_p(self, k: int = 1) -> PadicNumber:
        """Exact division by p**k; precision drops by k."""
        if k == 0:
            return self
        if self.residue % self.prime ** k:
            raise NotAUnit(f"{self} is not divisible by p^{k}")
        if self.precision - k < 1:
            from .errors import InsufficientPrecision

            raise InsufficientPrecision("division by p exhausts precision")
        return self._like(self.residue // self.prime ** k, self.precision - k)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = self.prime ** min(self.precision, o.precision)
        return (self.residue - o.residue) % m == 0

    def __hash__(self):
        return hash((self.prime, self.residue % self.prime))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"PadicNumber({self.residue}, p={self.prime}, N={self.precision})"


# ---------------------------------------------------------------------------
# Operations on units of Z_p
# ---------------------------------------------------------------------------


def padic_from_rational(num: int, den: int, p: int, N: int) -> PadicNumber:
    """num/den in Z_p modulo p**N; ``den`` must be prime to p."""
    _check_prime(p)
    if den % p == 0:
        raise DenominatorDivisibleByP(f"{den} is divisible by {p}")
    q = p ** N
    return PadicNumber(num * pow(den, -1, q), p, N)


def teichmuller(x: PadicNumber) -> PadicNumber:
    """The (p-1)-th root of unity congruent to x mod p."""
    if not x.is_unit():
        raise NotAUnit(f"{x} is not a unit")
    p, N = x.prime, x.precision
    return x._like(pow(x.residue, p ** (N - 1), x.modulus))


def principal_part(x: PadicNumber) -> PadicNumber:
    """<x> = x / teichmuller(x), a principal unit."""
    return x * teichmuller(x).inverse()


def _is_principal(x: PadicNumber) -> bool:
    return x.residue % x.prime == 1


def _sqrt_mod_p(a: int, p: int) -> int:
    """Tonelli-Shanks; ``a`` is assumed to be a non-zero square mod p."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _hensel_lift_sqrt(a: int, r: int, p: int, N: int) -> int:
    """Lift a root r of y^2 = a mod p to a root mod p^N (Newton doubling)."""
    q = p ** N
    y, k = r % p, 1
    while k < N:
        k = min(2 * k, N)
        pk = p ** k
        y = (y - (y * y - a) * pow(2 * y, -1, pk)) % pk
    return y % q


def sqrt_principal(x: PadicNumber) -> PadicNumber:
    """The unique square root of a principal unit that is itself principal."""
    if not _is_principal(x):
        raise NotPrincipalUnit(f"{x} is not congruent to 1 mod p")
    return x._like(_hensel_lift_sqrt(x.residue, 1, x.prime, x.precision))


def hensel_sqrt(a: PadicNumber) -> PadicNumber:
    """A square root of the unit ``a``.

    Of the two roots ``y`` and ``-y`` the one with ``y mod p`` in
    ``[1, (p-1)/2]`` is returned.  The choice depends only on the first
    digit, so roots computed at different precisions are compatible.
    """
    if not a.is_unit():
        raise NotAUnit(f"{a} is not a unit")
    p = a.prime
    if pow(a.residue % p, (p - 1) // 2, p) != 1:
        raise NoSquareRoot(f"{a.residue} is not a square mod {p}")
    y = _hensel_lift_sqrt(a.residue, _sqrt_mod_p(a.residue, p), p, a.precision)
    if y % p > (p - 1) // 2:
        y = a.modulus - y
    return a._like(y)


def gamma_generator(p: int, N: int) -> PadicNumber:
    """The fixed topological generator u = 1 + p of 1 + pZ_p."""
    return PadicNumber(1 + p, p, N)


def gamma_exponent(w: PadicNumber) -> PadicNumber:
    """z with (1+p)^z = w mod p^N, determined modulo p^(N-1), digit by digit."""
    if not _is_principal(w):
        raise NotPrincipalUnit(f"{w} is not congruent to 1 mod p")
    p, N = w.prime, w.precision
    if N == 1:
        raise ValueError("gamma_exponent needs precision at least 2")
    q = w.modulus
    uinv = pow(1 + p, -1, q)
    cur, z = w.residue, 0
    for i in range(N - 1):
        d = ((cur - 1) // p ** (i + 1)) % p
        if d:
            z += d * p ** i
            cur = cur * pow(uinv, d * p ** i, q) % q
    return PadicNumber(z, p, N - 1)


# ---------------------------------------------------------------------------
# Z_p[zeta_{p^m}]
# ---------------------------------------------------------------------------


def cyclotomic_degree(p: int, level: int) -> int:
    return kernels.cyclo_degree(p, level)


@dataclass(frozen=True, eq=False)
class CyclotomicNumber:
    """Element of Z_p[X]/(Phi_{p^level}(X)) modulo p**precision.

    The class of X is a primitive p^level-th root of unity.  Level 0 is Z_p
    itself (one coefficient).  Mixed-level operands are embedded into the
    larger level through X -> X^(p^d).
    """

    coeffs: tuple
    prime: int
    level: int
    precision: int

    def __post_init__(self):
        _check_prime(self.prime)
        if self.level < 0 or self.precision < 1:
            raise ValueError("bad level or precision")
        d = cyclotomic_degree(self.prime, self.level)
        q = self.prime ** self.precision
        cs = list(self.coeffs)
        if len(cs) > d:
            cs = kernels.cyclo_reduce(cs, self.prime, self.level, q)
        cs = tuple(c % q for c in cs) + (0,) * (d - len(cs))
        object.__setattr__(self, "coeffs", cs)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, p: int, level: int, N: int) -> CyclotomicNumber:
        return cls((), p, level, N)

    @classmethod
    def one(cls, p: int, level: int, N: int) -> CyclotomicNumber:
        return cls((1,), p, level, N)

    @classmethod
    def zeta(cls, p: int, level: int, N: int, exponent: int = 1) -> CyclotomicNumber:
        """zeta_{p^level}^exponent."""
        if level == 0:
            return cls.one(p, 0, N)
        n = p ** level
        cs = [0] * n
        cs[exponent % n] = 1
        return cls(tuple(kernels.cyclo_reduce(cs, p, level, p ** N)), p, level, N)

    @classmethod
    def from_padic(cls, x: PadicNumber, level: int = 0) -> CyclotomicNumber:
        return cls((x.residue,), x.prime, level, x.precision)

    def _like(self, coeffs, level=None, precision=None):
        return CyclotomicNumber(
            tuple(coeffs),
            self.prime,
            self.level if level is None else level,
            self.precision if precision is None else precision,
        )

    def zero_like(self) -> CyclotomicNumber:
        return self._like(())

    def one_like(self) -> CyclotomicNumber:
        return self._like((1,))

    # -- properties -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    @property
    def coefficients(self) -> tuple:
        """Power-basis coordinates as PadicNumbers."""
        return tuple(PadicNumber(c, self.prime, self.precision) for c in self.coeffs)

    @property
    def valuation(self) -> float:
        """Largest k with self in p^k Z_p[zeta]; ``inf`` for zero."""
        return min(valuation_int(c, self.prime) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_padic(self) -> PadicNumber:
        if not self.is_rational():
            raise ValueError("element is not in Z_p")
        return PadicNumber(self.coeffs[0], self.prime, self.precision)

    def is_unit(self) -> bool:
        # Z_p[zeta]/(zeta - 1) = F_p via X -> 1
        return sum(self.coeffs) % self.prime != 0

    def reduce(self, N: int) -> CyclotomicNumber:
        if N > self.precision:
            raise ValueError("reduce cannot raise precision")
        return self._like(self.coeffs, precision=N)

    # -- level changes --------------------------------------------------

    def embed(self, level: int) -> CyclotomicNumber:
        """Image under the inclusion Z_p[zeta_{p^l}] -> Z_p[zeta_{p^level}], X -> X^(p^d)."""
        if level == self.level:
            return self
        if level < self.level:
            raise ValueError("embed only goes up; use descend")
        d = cyclotomic_degree(self.prime, level)
        out = [0] * d
        if self.level == 0:
            out[0] = self.coeffs[0]
        else:
            step = self.prime ** (level - self.level)
            for i, c in enumerate(self.coeffs):
                out[i * step] = c
        return self._like(out, level=level)

    def descend(self) -> CyclotomicNumber:
        """Smallest-level representation of this element."""
        x = self
        p = self.prime
        while x.level > 0:
            if x.level == 1:
                if x.is_rational():
                    return x._like(x.coeffs[:1], level=0)
                return x
            if any(c for i, c in enumerate(x.coeffs) if i % p):
                return x
            x = x._like(x.coeffs[::p], level=x.level - 1)
        return x

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.prime != self.prime:
                raise PrecisionMismatch("different primes")
            return other
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise PrecisionMismatch("different primes")
            return CyclotomicNumber.from_padic(other, 0)
        if isinstance(other, int):
            return self._like((other,), level=0)
        return None

    def _align(self, other):
        o = self._coerce(other)
        if o is None:
            return None, None
        lvl = max(self.level, o.level)
        return self.embed(lvl), o.embed(lvl)

    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        n = min(a.precision, b.precision)
        return a._like([x + y for x, y in zip(a.coeffs, b.coeffs)], precision=n)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        n = min(a.precision, b.precision)
        return a._like([x - y for x, y in zip(a.coeffs, b.coeffs)], precision=n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like([c * other for c in self.coeffs])
        if isinstance(other, PadicNumber):
            n = min(self.precision, other.precision)
            return self._like([c * other.residue for c in self.coeffs], precision=n)
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        n = min(a.precision, b.precision)
        q = self.prime ** n
        return a._like(kernels.cyclo_mul(a.coeffs, b.coeffs, a.prime, a.level, q), precision=n)

    __rmul__ = __mul__

    def mul_zeta_power(self, e: int) -> CyclotomicNumber:
        """Multiply by X^e (a monomial shift followed by reduction)."""
        if self.level == 0:
            return self
        n = self.prime ** self.level
        e %= n
        cs = [0] * n
        for i, c in enumerate(self.coeffs):
            cs[(i + e) % n] += c
        return self._like(kernels.cyclo_reduce(cs, self.prime, self.level, self.modulus))

    def inverse(self) -> CyclotomicNumber:
        """Unit inverse by Newton iteration from the residue at X = 1."""
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit")
        p = self.prime
        x = self._like((pow(sum(self.coeffs) % p, -1, p),))
        one = self.one_like()
        for _ in range(4 * (self.precision * self.degree).bit_length() + 4):
            err = one - self * x
            if err.is_zero():
                return x
            x = x + x * err
        raise AssertionError("Newton inversion did not converge")

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.one_like(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divide_by_p(self, k: int = 1) -> CyclotomicNumber:
        """Exact division by p**k; precision drops by k."""
        if k == 0:
            return self
        pk = self.prime ** k
        if any(c % pk for c in self.coeffs):
            raise NotAUnit(f"element not divisible by p^{k}")
        if self.precision - k < 1:
            from .errors import InsufficientPrecision

            raise InsufficientPrecision("division by p exhausts precision")
        return self._like([c // pk for c in self.coeffs], precision=self.precision - k)

    # -- comparison -----------------------------------------------------

    def __eq__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        m = self.prime ** min(a.precision, b.precision)
        return all((x - y) % m == 0 for x, y in zip(a.coeffs, b.coeffs))

    def __hash__(self):
        d = self.descend()
        return hash((d.prime, d.level, tuple(c % d.prime for c in d.coeffs)))

    def __repr__(self):
        return (
            f"CyclotomicNumber({list(self.coeffs)}, p={self.prime}, "
            f"level={self.level}, N={self.precision})"
        )


def as_cyclotomic(x, p: int | None = None, N: int | None = None) -> CyclotomicNumber:
    """Coerce an int, PadicNumber or CyclotomicNumber to a CyclotomicNumber."""
    if isinstance(x, CyclotomicNumber):
        return x
    if isinstance(x, PadicNumber):
        return CyclotomicNumber.from_padic(x)
    if isinstance(x, int):
        if p is None or N is None:
            raise ValueError("p and N are required to coerce an int")
        return CyclotomicNumber((x,), p, 0, N)
    raise TypeError(f"cannot coerce {type(x).__name__}")
