"""Measures on Z_p through the Amice transform.

A measure is stored as its transform F(T) = sum a_n T^n truncated at T^M.
The truncated series is read as the polynomial it represents, which is the
transform of the finitely supported measure sum_{j<M} b_j delta_j with
b_j = sum_n a_n C(n, j) (-1)^(n-j).  Coset values, restriction to Z_p^x and
integrals of locally polynomial functions are exact under this reading.

Relative to an untruncated series whose first M coefficients are the stored
ones, a level-m coset value is only determined to
:func:`truncation_precision` digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import math
from fractions import Fraction
from math import comb

from . import kernels
from .errors import InsufficientPrecision, TailBoundTooWeak
from .padic import CyclotomicNumber, PadicNumber, cyclotomic_degree
from .powerseries import PowerSeries, binomial_power


@dataclass(frozen=True, eq=False)
class PadicMeasure:
    series: PowerSeries

    @property
    def prime(self) -> int:
        return self.series.prime

    @property
    def truncation(self) -> int:
        return self.series.truncation

    @property
    def precision(self) -> int:
        return self.series.precision

    @cached_property
    def atoms(self) -> tuple:
        """b_j, the mass at j for j < M."""
        a = self.series.coeffs
        M = len(a)
        out = []
        for j in range(M):
            acc = a[j]
            for n in range(j + 1, M):
                if a[n].is_zero():
                    continue
                w = comb(n, j) if (n - j) % 2 == 0 else -comb(n, j)
                acc = acc + a[n] * w
            out.append(acc)
        return tuple(out)

    def total_mass(self):
        return self.series.coeffs[0]

    def __eq__(self, other):
        if not isinstance(other, PadicMeasure):
            return NotImplemented
        return self.series == other.series

    __hash__ = None


def measure_from_series(F: PowerSeries) -> PadicMeasure:
    return PadicMeasure(F)


def series_from_measure(mu: PadicMeasure) -> PowerSeries:
    return mu.series


def series_from_atoms(atoms, prime: int) -> PowerSeries:
    """sum_j b_j (1+T)^j truncated at len(atoms)."""
    b = list(atoms)
    M = len(b)
    out = []
    for n in range(M):
        acc = b[n]
        for j in range(n + 1, M):
            if not b[j].is_zero():
                acc = acc + b[j] * comb(j, n)
        out.append(acc)
    return PowerSeries(tuple(out), prime)


def measure_from_atoms(atoms, prime: int) -> PadicMeasure:
    return PadicMeasure(series_from_atoms(atoms, prime))


def dirac(a, p: int, N: int, M: int) -> PadicMeasure:
    """delta_a with transform (1+T)^a; ``a`` a non-negative int or a PadicNumber."""
    if isinstance(a, PadicNumber):
        return PadicMeasure(binomial_power(a, M))
    return PadicMeasure(PowerSeries.from_ints([comb(a, n) for n in range(M)], p, N, M))


# ---------------------------------------------------------------------------
# Coset values
# ---------------------------------------------------------------------------


def truncation_precision(p: int, M: int, m: int) -> float:
    """Digits of a level-m coset value fixed by the first M coefficients alone.

    A tail term a_n T^n (n >= M) changes mu(a + p^m Z_p) by
    p^-m sum_zeta zeta^-a (zeta - 1)^n, of valuation >= n / (p^(m-1)(p-1)) - m.
    """
    if m == 0:
        return math.inf
    return max(0, math.ceil(Fraction(M, p ** (m - 1) * (p - 1))) - m)


def _trace_vector(p: int, level: int) -> list[int]:
    """Tr(X^i) from Q_p(zeta_{p^level}) to Q_p for the power basis."""
    d = cyclotomic_degree(p, level)
    if level == 0:
        return [1]
    tr = [0] * d
    tr[0] = d
    for i in range(1, d):
        if i % p ** (level - 1) == 0:
            tr[i] = -(p ** (level - 1))
    return tr


def coset_value(mu: PadicMeasure, a: int, m: int, method: str | None = None):
    """mu(a + p^m Z_p).

    ``roots``: p^-m sum_{zeta^(p^m)=1} zeta^-a F(zeta-1) evaluated level by
    level in Z_p[zeta_{p^l}] and traced down; precision N - m.  Needs scalar
    coefficients.  ``atoms``: sum of b_j over j = a mod p^m; precision N.
    """
    p = mu.prime
    if method is None:
        method = "roots" if mu.series.is_scalar else "atoms"
    if method == "atoms":
        pm = p ** m
        acc = mu.series.coeffs[0].zero_like()
        for j, b in enumerate(mu.atoms):
            if (j - a) % pm == 0:
                acc = acc + b
        return acc
    if method != "roots":
        raise ValueError(f"unknown method {method!r}")
    if not mu.series.is_scalar:
        raise TypeError("the roots method needs PadicNumber coefficients")
    N = mu.precision
    if N - m < 1:
        raise InsufficientPrecision(f"coset of level {m} needs more than {N} digits")
    n = p ** m
    q = p ** (N + m)
    # G(X) = F(X - 1) in Z[X]/(X^(p^m) - 1)
    G = kernels.group_ring_horner(mu.series.residues(), 1, n, q)
    total = 0
    for level in range(m + 1):
        val = CyclotomicNumber(tuple(kernels.cyclo_reduce(list(G), p, level, q)), p, level, N + m)
        val = val.mul_zeta_power(-a)
        tr = _trace_vector(p, level)
        total += sum(c * t for c, t in zip(val.coeffs, tr))
    total %= q
    if total % n:
        raise InsufficientPrecision("root-of-unity sum is not divisible by p^m")
    return PadicNumber(total // n, p, N - m)


# ---------------------------------------------------------------------------
# Restriction and integration
# ---------------------------------------------------------------------------


def restrict_to_coset(mu: PadicMeasure, a: int, m: int) -> PadicMeasure:
    pm = mu.prime ** m
    zero = mu.series.coeffs[0].zero_like()
    return measure_from_atoms([b if (j - a) % pm == 0 else zero for j, b in enumerate(mu.atoms)], mu.prime)


def restrict_to_units(mu: PadicMeasure) -> PadicMeasure:
    """mu restricted to Z_p^x: F(T) - p^-1 sum_{zeta^p=1} F(zeta(1+T) - 1)."""
    p = mu.prime
    zero = mu.series.coeffs[0].zero_like()
    return measure_from_atoms([b if j % p else zero for j, b in enumerate(mu.atoms)], p)


def restriction_is_noop(mu: PadicMeasure) -> bool:
    """Diagnostic: is mu already supported on Z_p^x?"""
    return all(b.is_zero() for j, b in enumerate(mu.atoms) if j % mu.prime == 0)


def derivation(F: PowerSeries) -> PowerSeries:
    """D = (1+T) d/dT on the polynomial represented by F."""
    a = F.coeffs
    M = len(a)
    out = []
    for k in range(M):
        c = a[k] * k
        if k + 1 < M:
            c = c + a[k + 1] * (k + 1)
        out.append(c)
    return PowerSeries(tuple(out), F.prime)


def moment(mu: PadicMeasure, r: int):
    """int x^r dmu = (D^r F)(0)."""
    F = mu.series
    for _ in range(r):
        F = derivation(F)
    return F.coeffs[0]


def integrate_locally_polynomial(mu: PadicMeasure, pieces: dict, m: int, units_only: bool = False):
    """sum_a int_{a + p^m Z_p} P_a(u) dmu, with P_a given by coefficient lists.

    ``pieces`` maps residues a mod p^m to [c_0, c_1, ...] meaning sum c_r u^r;
    missing residues contribute nothing.
    """
    p = mu.prime
    if units_only:
        mu = restrict_to_units(mu)
    pm = p ** m
    occupied = {j % pm for j, b in enumerate(mu.atoms) if not b.is_zero()}
    acc = mu.series.coeffs[0].zero_like()
    for a, poly in pieces.items():
        if a % pm not in occupied:
            continue
        piece = restrict_to_coset(mu, a, m)
        F = piece.series
        for r, c in enumerate(poly):
            if r:
                F = derivation(F)
            if _is_zero(c):
                continue
            acc = acc + F.coeffs[0] * c
    return acc


@dataclass(frozen=True)
class MahlerIntegral:
    value: object
    precision: int


def integrate_mahler(mu: PadicMeasure, coefficients, tail_valuation_bound: float) -> MahlerIntegral:
    """sum_{n<M} c_n a_n; the omitted tail has valuation >= tail_valuation_bound."""
    a = mu.series.coeffs
    n = min(len(a), len(coefficients))
    if n < len(coefficients):
        tail_valuation_bound = min(
            tail_valuation_bound,
            min(_val(c) for c in coefficients[n:]),
        )
    prec = min(mu.precision, int(tail_valuation_bound))
    if prec < 1:
        raise TailBoundTooWeak(f"tail bound {tail_valuation_bound} certifies no digits")
    acc = a[0].zero_like()
    for c, an in zip(coefficients[:n], a[:n]):
        acc = acc + an * c
    return MahlerIntegral(acc.reduce(prec), prec)


def _is_zero(c) -> bool:
    return c == 0 if isinstance(c, int) else c.is_zero()


def _val(c) -> float:
    if isinstance(c, int):
        from .padic import INFINITY

        return INFINITY if c == 0 else 0
    return c.valuation
