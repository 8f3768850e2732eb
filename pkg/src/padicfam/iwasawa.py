"""The Iwasawa algebra Lambda = O[[1 + pZ_p]] and character-indexed families.

Elements are polynomials in S under u = 1 + p  <->  1 + S, either modulo
S^M ("truncated" mode) or modulo omega_m(S) = (1+S)^(p^(m-1)) - 1 ("omega"
mode, i.e. the finite group ring O[U1/Um]).  The base ring O is Z_p or
Z_p[zeta_{p^l}], with coefficients stored as CyclotomicNumbers.

Specialization precision is tracked honestly: evaluating a truncated element
at S = s loses nothing below p^floor(M v(s)), and an omega-reduced element
is exact only where the character kills omega_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import kernels
from .errors import (
    InconsistentFamily,
    InsufficientPrecision,
    PrecisionMismatch,
    StarConditionViolated,
)
from .padic import CyclotomicNumber, PadicNumber, as_cyclotomic, gamma_exponent, valuation_int
from .powerseries import PowerSeries, binomial_power


@lru_cache(maxsize=None)
def _omega_tail(p: int, m: int) -> tuple:
    """Coefficients c_i (0 < i < d) with S^d = -sum c_i S^i mod omega_m, d = p^(m-1)."""
    d = p ** (m - 1)
    return tuple(comb(d, i) for i in range(d))


def omega_reduction_precision(p: int, M: int, m: int) -> int:
    """Digits of x mod omega_m that are determined by x mod S^M."""
    if m == 1:
        return math.inf
    e = p ** (m - 2) * (p - 1)
    return M // e - (m - 1)


@dataclass(frozen=True, eq=False)
class IwasawaElement:
    """sum_i coeffs[i] S^i with CyclotomicNumber coefficients."""

    coeffs: tuple
    prime: int
    truncation: int | None = None
    omega_level: int | None = None

    def __post_init__(self):
        if (self.truncation is None) == (self.omega_level is None):
            raise ValueError("give exactly one of truncation / omega_level")
        cs = list(self.coeffs)
        if not cs:
            raise ValueError("need at least one coefficient to fix the base ring")
        lvl = max(c.level for c in cs)
        N = min(c.precision for c in cs)
        cs = [c.embed(lvl).reduce(N) for c in cs]
        length = self.truncation if self.truncation is not None else self.prime ** (self.omega_level - 1)
        zero = cs[0].zero_like()
        if len(cs) > length:
            if self.truncation is not None:
                cs = cs[:length]
            else:
                cs = _reduce_omega_list(cs, self.prime, self.omega_level)
        cs = cs + [zero] * (length - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_ints(cls, values, p: int, N: int, M: int | None = None, omega_level: int | None = None):
        values = list(values) or [0]
        cs = tuple(CyclotomicNumber((v,), p, 0, N) for v in values)
        if M is None and omega_level is None:
            M = len(values)
        return cls(cs, p, truncation=M, omega_level=omega_level)

    @classmethod
    def constant(cls, x, M: int | None = None, omega_level: int | None = None, p=None, N=None):
        c = as_cyclotomic(x, p, N)
        if M is None and omega_level is None:
            raise ValueError("give a truncation or omega level")
        return cls((c,), c.prime, truncation=M, omega_level=omega_level)

    @classmethod
    def group_like(cls, z: PadicNumber, M: int) -> IwasawaElement:
        """[u^z] = (1+S)^z modulo S^M (precision as for binomial_power)."""
        b = binomial_power(z, M)
        return cls.from_ints(b.residues(), z.prime, b.precision, M=M)

    def _like(self, coeffs):
        return IwasawaElement(tuple(coeffs), self.prime, self.truncation, self.omega_level)

    def zero_like(self) -> IwasawaElement:
        return self._like([self.coeffs[0].zero_like()])

    def one_like(self) -> IwasawaElement:
        return self._like([self.coeffs[0].one_like()])

    # -- properties -----------------------------------------------------

    @property
    def precision(self) -> int:
        return self.coeffs[0].precision

    @property
    def level(self) -> int:
        """Cyclotomic level of the base ring."""
        return self.coeffs[0].level

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def residues(self) -> list:
        """Coefficients as ints (base ring Z_p) or int lists (cyclotomic base)."""
        if self.level == 0:
            return [c.coeffs[0] for c in self.coeffs]
        return [list(c.coeffs) for c in self.coeffs]

    def descend(self) -> IwasawaElement:
        """Move to the smallest base level containing every coefficient."""
        lvl = max(c.descend().level for c in self.coeffs)
        if lvl == self.level:
            return self
        cs = []
        for c in self.coeffs:
            d = c.descend()
            cs.append(d.embed(lvl) if d.level < lvl else d)
        return self._like(cs)

    def reduce(self, N: int) -> IwasawaElement:
        return self._like([c.reduce(N) for c in self.coeffs])

    # -- ring structure -------------------------------------------------

    def _compatible(self, other):
        if other.prime != self.prime:
            raise PrecisionMismatch("different primes")
        if self.omega_level != other.omega_level:
            raise PrecisionMismatch("mixing omega-reduced and truncated elements")

    def _combine_mode(self, other):
        if self.truncation is not None:
            return min(self.truncation, other.truncation), None
        return None, self.omega_level

    def _lift_scalar(self, x):
        if isinstance(x, (int, PadicNumber, CyclotomicNumber)):
            c = as_cyclotomic(x, self.prime, self.precision)
            return IwasawaElement((c,), self.prime, self.truncation, self.omega_level)
        return x

    def __add__(self, other):
        other = self._lift_scalar(other)
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        self._compatible(other)
        M, om = self._combine_mode(other)
        n = max(self.length, other.length)
        zs, zo = self.coeffs[0].zero_like(), other.coeffs[0].zero_like()
        a = list(self.coeffs) + [zs] * (n - self.length)
        b = list(other.coeffs) + [zo] * (n - other.length)
        return IwasawaElement(tuple(x + y for x, y in zip(a, b)), self.prime, M, om)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift_scalar(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, PadicNumber, CyclotomicNumber)):
            return self._like([c * other for c in self.coeffs])
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        self._compatible(other)
        M, om = self._combine_mode(other)
        p = self.prime
        length = M if M is not None else 2 * self.length - 1
        if self.level == 0 and other.level == 0:
            N = min(self.precision, other.precision)
            prod = kernels.poly_mul_trunc(self.residues(), other.residues(), length, p ** N)
            cs = [CyclotomicNumber((v,), p, 0, N) for v in prod]
        else:
            zero = (self.coeffs[0] * other.coeffs[0]).zero_like()
            cs = [zero] * length
            for i, a in enumerate(self.coeffs):
                if a.is_zero():
                    continue
                for j, b in enumerate(other.coeffs):
                    if i + j >= length:
                        break
                    if not b.is_zero():
                        cs[i + j] = cs[i + j] + a * b
        return IwasawaElement(tuple(cs), p, M, om)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result, base = self.one_like(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        other = self._lift_scalar(other)
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        if self.omega_level != other.omega_level:
            return False
        n = min(self.length, other.length) if self.truncation is not None else self.length
        return all(a == b for a, b in zip(self.coeffs[:n], other.coeffs[:n]))

    __hash__ = None

    # -- evaluation and reduction --------------------------------------

    def evaluate(self, s: CyclotomicNumber) -> CyclotomicNumber:
        """The polynomial representative evaluated at S = s (Horner)."""
        acc = self.coeffs[-1] + s.zero_like()
        for c in reversed(self.coeffs[:-1]):
            acc = acc * s + c
        return acc

    def reduce_omega(self, m: int) -> IwasawaElement:
        """Image in O[U1/Um] = Lambda/omega_m, at the precision it is determined to."""
        if self.omega_level is not None:
            if m > self.omega_level:
                raise InsufficientPrecision("cannot lift from a lower omega level")
            cs = _reduce_omega_list(list(self.coeffs), self.prime, m)
            return IwasawaElement(tuple(cs), self.prime, omega_level=m)
        prec = min(self.precision, omega_reduction_precision(self.prime, self.truncation, m))
        if prec < 1:
            raise InsufficientPrecision(
                f"S-truncation {self.truncation} determines nothing modulo omega_{m}"
            )
        cs = _reduce_omega_list(list(self.coeffs), self.prime, m)
        return IwasawaElement(tuple(c.reduce(prec) for c in cs), self.prime, omega_level=m)

    def __repr__(self):
        mode = f"M={self.truncation}" if self.truncation is not None else f"omega_{self.omega_level}"
        return f"IwasawaElement({self.residues()}, p={self.prime}, N={self.precision}, {mode})"


def _reduce_omega_list(cs: list, p: int, m: int) -> list:
    d = p ** (m - 1)
    tail = _omega_tail(p, m)
    cs = list(cs)
    for i in range(len(cs) - 1, d - 1, -1):
        c = cs[i]
        if c.is_zero():
            continue
        base = i - d
        for j in range(1, d):
            if tail[j]:
                cs[base + j] = cs[base + j] - c * tail[j]
        if d == 1:
            pass  # omega_1 = S: S == 0
    return cs[:d]


def omega(p: int, m: int, N: int, M: int) -> IwasawaElement:
    """omega_m(S) as a truncated element (for divisibility checks)."""
    return IwasawaElement.from_ints([0] + list(_omega_tail(p, m)[1:]) + [1], p, N, M=M)


# ---------------------------------------------------------------------------
# Finite characters of U1 = 1 + pZ_p
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteCharacter:
    """epsilon of U1/Um with epsilon(u) = zeta_{p^(m-1)}^exponent."""

    prime: int
    level: int
    exponent: int = 0

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("character level must be >= 1")
        object.__setattr__(self, "exponent", self.exponent % self.prime ** (self.level - 1))

    @classmethod
    def trivial(cls, p: int) -> FiniteCharacter:
        return cls(p, 1, 0)

    @property
    def order(self) -> int:
        n = self.prime ** (self.level - 1)
        return n // math.gcd(self.exponent, n)

    @property
    def conductor_level(self) -> int:
        """Smallest m such that the character factors through U1/Um."""
        return 1 + round(math.log(self.order, self.prime)) if self.order > 1 else 1

    def is_trivial(self) -> bool:
        return self.exponent == 0

    def key(self) -> tuple:
        m = self.conductor_level
        return (m, self.exponent // self.prime ** (self.level - m))

    def at_level(self, m: int) -> FiniteCharacter:
        cm, ce = self.key()
        if m < cm:
            raise ValueError(f"character does not factor through level {m}")
        return FiniteCharacter(self.prime, m, ce * self.prime ** (m - cm))

    def __eq__(self, other):
        if not isinstance(other, FiniteCharacter):
            return NotImplemented
        return self.prime == other.prime and self.key() == other.key()

    def __hash__(self):
        return hash((self.prime,) + self.key())

    def value_at_u(self, N: int) -> CyclotomicNumber:
        return CyclotomicNumber.zeta(self.prime, self.level - 1, N, self.exponent)

    def __call__(self, alpha: PadicNumber) -> CyclotomicNumber:
        """epsilon(alpha) for a principal unit alpha (needs precision >= level)."""
        if self.is_trivial():
            return CyclotomicNumber.one(self.prime, self.level - 1, alpha.precision)
        z = gamma_exponent(alpha)
        if z.precision < self.level - 1:
            raise InsufficientPrecision("alpha too imprecise to evaluate the character")
        return CyclotomicNumber.zeta(
            self.prime, self.level - 1, alpha.precision, self.exponent * z.residue
        )

    def __mul__(self, other: FiniteCharacter) -> FiniteCharacter:
        m = max(self.level, other.level)
        a, b = self.at_level(m), other.at_level(m)
        return FiniteCharacter(self.prime, m, a.exponent + b.exponent)

    def inverse(self) -> FiniteCharacter:
        return FiniteCharacter(self.prime, self.level, -self.exponent)

    def __pow__(self, e: int) -> FiniteCharacter:
        return FiniteCharacter(self.prime, self.level, self.exponent * e)

    def sqrt(self) -> FiniteCharacter:
        """The unique square root; the dual group has odd order p^(m-1)."""
        n = self.prime ** (self.level - 1)
        return FiniteCharacter(self.prime, self.level, self.exponent * ((n + 1) // 2))

    def __repr__(self):
        return f"FiniteCharacter(p={self.prime}, level={self.level}, exponent={self.exponent})"


def characters(p: int, m: int) -> list[FiniteCharacter]:
    """All characters of U1/Um, indexed by exponent."""
    return [FiniteCharacter(p, m, e) for e in range(p ** (m - 1))]


# ---------------------------------------------------------------------------
# Arithmetic specializations
# ---------------------------------------------------------------------------


def kappa_of_u(p: int, N: int, k: int, eps: FiniteCharacter | None = None) -> CyclotomicNumber:
    """kappa(u) = eps(u) u^(k-2)."""
    eps = eps or FiniteCharacter.trivial(p)
    return eps.value_at_u(N) * PadicNumber(1 + p, p, N) ** (k - 2)


def _specialization_valuation(p: int, k: int, eps: FiniteCharacter) -> Fraction | None:
    """v(kappa(u) - 1), or None when kappa(u) = 1 exactly."""
    if not eps.is_trivial():
        j = eps.conductor_level - 1
        return Fraction(1, p ** (j - 1) * (p - 1))
    if k == 2:
        return None
    return Fraction(1 + int(valuation_int(k - 2, p)))


def specialization_precision(A: IwasawaElement, k: int, eps: FiniteCharacter | None = None) -> int:
    p, N = A.prime, A.precision
    eps = eps or FiniteCharacter.trivial(p)
    if A.omega_level is not None:
        d = p ** (A.omega_level - 1)
        w = kappa_of_u(p, N, k, eps) ** d - 1
        return N if w.is_zero() else min(N, int(w.valuation))
    v = _specialization_valuation(p, k, eps)
    if v is None:
        return N
    return min(N, math.floor(A.truncation * v))


def arithmetic_specialize(A: IwasawaElement, k: int, eps: FiniteCharacter | None = None) -> CyclotomicNumber:
    """kappa(A) for kappa of signature (k, eps), i.e. A at S = eps(u) u^(k-2) - 1."""
    p, N = A.prime, A.precision
    eps = eps or FiniteCharacter.trivial(p)
    s = kappa_of_u(p, N, k, eps) - 1
    prec = specialization_precision(A, k, eps)
    if prec < 1:
        raise InsufficientPrecision(f"specialization at weight {k}, {eps} determines no digits")
    return A.evaluate(s).reduce(prec)


TwoVariableSeries = PowerSeries
"""A PowerSeries in T_x whose coefficients are IwasawaElements."""


def specialize_family_series(F: PowerSeries, eps: FiniteCharacter, k: int = 2) -> PowerSeries:
    """Coefficient-wise specialization a_n -> a_n(eps(u) u^(k-2) - 1)."""
    return F.map_coefficients(lambda a: arithmetic_specialize(a, k, eps))


# ---------------------------------------------------------------------------
# Condition (*) and Fourier reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StarCheck:
    ok: bool
    alpha: PadicNumber
    valuation: float
    required: int


def _common_level(values: dict, m: int) -> int:
    return max([m - 1] + [as_cyclotomic(v).level for v in values.values()])


def _character_sum(values: dict, m: int, shift: int):
    """sum_eps eps(u)^(-shift) values(eps) over characters of level <= m."""
    p = next(iter(values)).prime
    lvl = _common_level(values, m)
    acc = None
    for eps in characters(p, m):
        try:
            v = as_cyclotomic(values[eps]).embed(lvl)
        except KeyError:
            raise StarConditionViolated(f"no value for {eps}") from None
        step = p ** (lvl - (m - 1))
        term = v.mul_zeta_power(-shift * eps.exponent * step)
        acc = term if acc is None else acc + term
    return acc


def check_star_condition(values: dict, alpha: PadicNumber, m: int) -> StarCheck:
    """sum_eps eps(alpha)^-1 a(eps) lies in p^(m-1) O ?"""
    z = gamma_exponent(alpha) if m > 1 else PadicNumber(0, alpha.prime, 1)
    total = _character_sum(values, m, z.residue)
    v = total.valuation
    return StarCheck(v >= m - 1, alpha, v, m - 1)


def reconstruct_from_characters(values: dict, m: int) -> IwasawaElement:
    """The element of O[U1/Um] whose evaluations at characters of level <= m are ``values``.

    Coefficients on the group-likes [u^a] are p^-(m-1) sum_eps eps(u^a)^-1 values(eps);
    the division drops precision by m-1.
    """
    p = next(iter(values)).prime
    d = p ** (m - 1)
    c = []
    for a in range(d):
        total = _character_sum(values, m, a)
        try:
            c.append(total.divide_by_p(m - 1))
        except ArithmeticError as exc:
            raise StarConditionViolated(f"coefficient of [u^{a}] is not integral") from exc
    zero = c[0].zero_like()
    cs = []
    for j in range(d):
        acc = zero
        for a in range(j, d):
            acc = acc + c[a] * comb(a, j)
        cs.append(acc)
    return IwasawaElement(tuple(cs), p, omega_level=m).descend()


# ---------------------------------------------------------------------------
# Character families
# ---------------------------------------------------------------------------


@dataclass
class CharacterFamily:
    """Power series indexed by (level, exponent) for every level 1..m_max."""

    prime: int
    precision: int
    truncation: int
    m_max: int
    values: dict = field(default_factory=dict)

    def __getitem__(self, key) -> PowerSeries:
        return self.values[key]

    def get(self, eps: FiniteCharacter, level: int | None = None) -> PowerSeries:
        level = level or eps.level
        return self.values[(level, eps.at_level(level).exponent)]

    @classmethod
    def from_series(cls, F: PowerSeries, m_max: int) -> CharacterFamily:
        """Sample a two-variable series at every character of level <= m_max (weight 2)."""
        first = F.coeffs[0]
        fam = cls(F.prime, first.precision, F.truncation, m_max)
        for m in range(1, m_max + 1):
            for eps in characters(F.prime, m):
                fam.values[(m, eps.exponent)] = specialize_family_series(F, eps)
        return fam


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    key: tuple | None = None
    coefficient: int | None = None
    detail: str = ""


def validate_family(fam: CharacterFamily) -> FamilyCheck:
    """Each value stored at level m agrees with the one stored at level m+1 for the same character."""
    p = fam.prime
    for (m, e) in sorted(fam.values):
        if m >= fam.m_max:
            continue
        partner = (m + 1, e * p)
        if partner not in fam.values:
            return FamilyCheck(False, (m, e), None, f"missing value at level {m + 1}")
        lo, hi = fam.values[(m, e)], fam.values[partner]
        for n, (a, b) in enumerate(zip(lo.coeffs, hi.coeffs)):
            if not a == b:
                return FamilyCheck(False, (m, e), n, f"level {m} and {m + 1} disagree")
    return FamilyCheck(True)


def assemble_family_series(fam: CharacterFamily) -> PowerSeries:
    """The series in Lambda/omega_{m_max}[[T]] whose specializations are the family."""
    check = validate_family(fam)
    if not check.ok:
        raise InconsistentFamily(f"{check.detail} at {check.key}, coefficient {check.coefficient}")
    p, m = fam.prime, fam.m_max
    top = [FiniteCharacter(p, m, e) for e in range(p ** (m - 1))]
    coeffs = []
    for n in range(fam.truncation):
        vals = {eps: fam.values[(m, eps.exponent)].coeffs[n] for eps in top}
        coeffs.append(reconstruct_from_characters(vals, m))
    lvl = max(c.level for c in coeffs)
    coeffs = [
        IwasawaElement(tuple(x.embed(lvl) for x in c.coeffs), p, omega_level=m) for c in coeffs
    ]
    return PowerSeries(tuple(coeffs), p)
