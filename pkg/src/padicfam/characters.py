"""Critical character, norm family and anticyclotomic family over Lambda.

All Lambda-valued families here are scalar units times group-likes
[u^y] = (1+S)^y.  The exponent y is computed with guard digits so that the
truncated binomial expansion is exact modulo p^N; inputs are therefore read
as exact integers (rationals are converted at the extra precision directly).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotAUnit, WeightClassMismatch
from .iwasawa import FiniteCharacter, IwasawaElement, arithmetic_specialize
from .padic import (
    CyclotomicNumber,
    PadicNumber,
    factorial_valuation,
    gamma_exponent,
    padic_from_rational,
    principal_part,
    sqrt_principal,
    teichmuller,
)
from .quadratic import IdealClass


@dataclass(frozen=True)
class CriticalCharacterContext:
    """Weight k0 = 2 mod 2(p-1), precision N and S-truncation of group-likes."""

    k0: int
    prime: int
    precision: int
    truncation: int | None = None

    def __post_init__(self):
        if self.k0 % 2 or (self.k0 - 2) % (2 * (self.prime - 1)):
            raise WeightClassMismatch(f"k0={self.k0} is not 2 mod 2(p-1) for p={self.prime}")
        if self.truncation is None:
            object.__setattr__(self, "truncation", self.precision)

    @property
    def guard(self) -> int:
        return factorial_valuation(self.truncation - 1, self.prime) + 1

    @property
    def working_precision(self) -> int:
        return self.precision + self.guard

    def check_weight(self, k: int) -> None:
        if k % 2 or (k - self.k0) % (2 * (self.prime - 1)):
            raise WeightClassMismatch(f"k={k} is not congruent to k0={self.k0} mod 2(p-1)")

    def exact(self, z) -> PadicNumber:
        """z at the working precision; ints and Fractions exactly, PadicNumbers by lifting."""
        p, W = self.prime, self.working_precision
        if isinstance(z, PadicNumber):
            return z.lift(W) if z.precision < W else z.reduce(W)
        if isinstance(z, Fraction):
            return padic_from_rational(z.numerator, z.denominator, p, W)
        return PadicNumber(int(z), p, W)

    def half_group_like(self, z) -> IwasawaElement:
        """[<z>^(1/2)] truncated at S^truncation, exact mod p^N."""
        w = principal_part(self.exact(z))
        y = gamma_exponent(sqrt_principal(w))
        return IwasawaElement.group_like(y, self.truncation).reduce(self.precision)


def _unit(z: PadicNumber) -> None:
    if not z.is_unit():
        raise NotAUnit(f"{z} is not a unit")


# ---------------------------------------------------------------------------
# vartheta and chi
# ---------------------------------------------------------------------------


def vartheta_family(z, ctx: CriticalCharacterContext) -> IwasawaElement:
    """omega(z)^((k0-2)/2) [<z>^(1/2)]."""
    zz = ctx.exact(z)
    _unit(zz)
    tame = teichmuller(zz.reduce(ctx.precision)) ** ((ctx.k0 - 2) // 2)
    return ctx.half_group_like(zz) * tame


def vartheta_specialize(z, k: int, eps: FiniteCharacter | None, ctx: CriticalCharacterContext) -> CyclotomicNumber:
    """eps^(1/2)(<z>) z^((k-2)/2), computed directly."""
    ctx.check_weight(k)
    p, N = ctx.prime, ctx.precision
    eps = eps or FiniteCharacter.trivial(p)
    zz = ctx.exact(z).reduce(N)
    _unit(zz)
    return eps.sqrt()(principal_part(zz)) * zz ** ((k - 2) // 2)


def vartheta_family_specialize(z, k: int, eps: FiniteCharacter | None, ctx: CriticalCharacterContext) -> CyclotomicNumber:
    """The other path: kappa applied to vartheta_family(z)."""
    ctx.check_weight(k)
    return arithmetic_specialize(vartheta_family(z, ctx), k, eps)


def idele_norm_value(cls: IdealClass, c: int) -> Fraction:
    """N_K(a) = (c N(a))^-1 = 1 / #(O_c/a) for the stored representative."""
    return Fraction(1, cls.ideal_index)


def chi_inverse_on_class(cls: IdealClass, c: int, ctx: CriticalCharacterContext) -> IwasawaElement:
    """chi^-1(a) = vartheta(N_K(a)); specializes to N(a)^(1-k/2) c^(1-k/2) in weight k."""
    from .quadratic import class_norm

    class_norm(cls, c, ctx.prime)
    return vartheta_family(idele_norm_value(cls, c), ctx)


def chi_inverse_closed_form(cls: IdealClass, c: int, k: int, ctx: CriticalCharacterContext) -> PadicNumber:
    """N(a)^(1-k/2) c^(1-k/2) in Z_p."""
    from .quadratic import class_norm

    n = class_norm(cls, c, ctx.prime) * c
    e = 1 - k // 2
    val = padic_from_rational(n.numerator, n.denominator, ctx.prime, ctx.precision)
    return val ** e


# ---------------------------------------------------------------------------
# lambda and xi
# ---------------------------------------------------------------------------


@dataclass
class LambdaData:
    """t(a) = lambda(a abar^-1) for each stored class representative."""

    prime: int
    precision: int
    k0: int
    values: dict = field(default_factory=dict)
    unramified_at_p: bool = True

    def __post_init__(self):
        fixed = {}
        for key, v in self.values.items():
            if not isinstance(v, PadicNumber):
                v = PadicNumber(int(v), self.prime, self.precision)
            if not v.is_unit():
                raise NotAUnit(f"t({key}) = {v.residue} is not a unit")
            fixed[int(key)] = v
        self.values = fixed
        if not self.unramified_at_p:
            raise ValueError("lambda must be unramified at p")

    @classmethod
    def trivial(cls, classes, p: int, N: int, k0: int) -> LambdaData:
        return cls(p, N, k0, {int(i): PadicNumber(1, p, N) for i in classes})

    def inverse(self) -> LambdaData:
        return LambdaData(self.prime, self.precision, self.k0, {i: t.inverse() for i, t in self.values.items()})

    def __getitem__(self, key) -> PadicNumber:
        return self.values[int(key)]


def xi_family(lam: LambdaData, ctx: CriticalCharacterContext) -> dict:
    """Class index -> t(a) [<t(a)>^(1/2)] in Lambda."""
    out = {}
    for key, t in lam.values.items():
        out[key] = ctx.half_group_like(t) * t.reduce(min(t.precision, ctx.precision))
    return out


@dataclass(frozen=True)
class XiSpecialization:
    """xi_kappa on class representatives and its local avatar at p."""

    k: int
    eps: FiniteCharacter
    table: dict
    prime: int
    precision: int

    def __getitem__(self, key) -> CyclotomicNumber:
        return self.table[int(key)]

    def local_avatar(self, u: PadicNumber) -> CyclotomicNumber:
        """eps^(1/2)(<u>) u^(k/2) on Z_p^x."""
        return self.eps.sqrt()(principal_part(u)) * u ** (self.k // 2)

    def local(self, u: PadicNumber, mode: str = "unramified") -> CyclotomicNumber:
        """The factor at p used inside the class integrals.

        ``unramified``: lambda unramified at p makes the component trivial.
        ``avatar``: the Z_p^x avatar above.
        """
        if mode == "unramified":
            return CyclotomicNumber.one(self.prime, 0, u.precision)
        if mode == "avatar":
            return self.local_avatar(u)
        raise ValueError(f"unknown local mode {mode!r}")


def xi_specialize(lam: LambdaData, k: int, eps: FiniteCharacter | None, ctx: CriticalCharacterContext) -> XiSpecialization:
    """xi_kappa(a) = eps^(1/2)(<t(a)>) t(a)^(k/2)."""
    ctx.check_weight(k)
    p, N = ctx.prime, ctx.precision
    eps = eps or FiniteCharacter.trivial(p)
    half = eps.sqrt()
    table = {}
    for key, t in lam.values.items():
        tt = t.reduce(min(t.precision, N))
        table[key] = half(principal_part(tt)) * tt ** (k // 2)
    return XiSpecialization(k, eps, table, p, N)


def xi_family_specialize(lam: LambdaData, k: int, eps: FiniteCharacter | None, ctx: CriticalCharacterContext) -> dict:
    """kappa applied to xi_family, class by class."""
    ctx.check_weight(k)
    return {key: arithmetic_specialize(x, k, eps) for key, x in xi_family(lam, ctx).items()}
