"""Per-class measures, the one- and two-variable L-functions, and their checks."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .characters import (
    CriticalCharacterContext,
    LambdaData,
    XiSpecialization,
    chi_inverse_on_class,
    vartheta_specialize,
    xi_family,
    xi_specialize,
)
from .errors import ConfigError, WeightClassMismatch
from .iwasawa import FiniteCharacter, IwasawaElement, arithmetic_specialize
from .measures import PadicMeasure, integrate_locally_polynomial, measure_from_series
from .padic import (
    CyclotomicNumber,
    PadicNumber,
    factorial_valuation,
    padic_from_rational,
    principal_part,
    teichmuller,
)
from .powerseries import PowerSeries, deplete, substitute_binomial
from .quadratic import ClassGroup, IdealClass, class_norm, splitting_type, sqrt_minus_DK


@dataclass(frozen=True)
class ClassEntry:
    """One ideal class: its stored representative, u_a and its series."""

    ideal: IdealClass
    u: PadicNumber
    series: PowerSeries

    @property
    def index(self) -> int:
        return self.ideal.index


@dataclass
class ExpansionBundle:
    prime: int
    D_K: int
    c: int
    precision: int
    truncation: int
    k0: int
    mode: str
    classes: list
    s_truncation: int | None = None

    def __post_init__(self):
        if self.mode not in ("one_var", "family"):
            raise ConfigError(f"unknown bundle mode {self.mode!r}")
        if self.s_truncation is None:
            self.s_truncation = self.precision

    @property
    def group(self) -> ClassGroup:
        return ClassGroup.for_order(self.D_K, self.c, self.prime)

    def validate(self) -> None:
        p = self.prime
        if splitting_type(p, self.D_K) != "split":
            raise ConfigError(f"p={p} is not split in Q(sqrt(-{self.D_K}))")
        if math.gcd(p, self.c * self.D_K) != 1:
            raise ConfigError("p must be prime to c D_K")
        forms = sorted(e.ideal.form for e in self.classes)
        if forms != self.group.forms:
            raise ConfigError("bundle must carry exactly one entry per reduced form")
        for e in self.classes:
            class_norm(e.ideal, self.c, p, self.D_K)
            if not e.u.is_unit():
                raise ConfigError(f"u_a for class {e.index} is not a unit")

    def map_series(self, fn, mode: str | None = None) -> ExpansionBundle:
        entries = [replace(e, series=fn(e)) for e in self.classes]
        return replace(self, classes=entries, mode=mode or self.mode)

    def __add__(self, other: ExpansionBundle) -> ExpansionBundle:
        by_index = {e.index: e for e in other.classes}
        return self.map_series(lambda e: e.series + by_index[e.index].series)

    def specialize(self, k: int, eps: FiniteCharacter | None = None) -> ExpansionBundle:
        """The one-variable bundle of f_kappa: arithmetic_specialize on every coefficient."""
        if self.mode != "family":
            raise ConfigError("only family bundles can be specialized")

        def spec(e):
            vals = [arithmetic_specialize(a, k, eps) for a in e.series.coeffs]
            if all(v.descend().level == 0 for v in vals):
                vals = [v.descend().to_padic() for v in vals]
            return PowerSeries(tuple(vals), self.prime)

        return self.map_series(spec, mode="one_var")


# ---------------------------------------------------------------------------
# Characters of Gamma_infinity (product model)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaInfinityCharacter:
    """phi_C([a]) * omega(v)^tame * wild(<v>) * v^power on ClassGroup x Z_p^x."""

    prime: int
    class_values: dict | None = None
    tame: int = 0
    wild: FiniteCharacter | None = None
    power: int = 0

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("only non-negative powers u^n are supported")

    @classmethod
    def trivial(cls, p: int) -> GammaInfinityCharacter:
        return cls(p)

    @property
    def coset_level(self) -> int:
        lvl = 1
        if self.wild is not None:
            lvl = max(lvl, self.wild.conductor_level)
        return lvl

    def class_value(self, index: int, N: int):
        if not self.class_values:
            return PadicNumber(1, self.prime, N)
        v = self.class_values[int(index)]
        if isinstance(v, int):
            return PadicNumber(v, self.prime, N)
        return v

    def local_constant(self, v: PadicNumber):
        """omega(v)^tame * wild(<v>), constant on cosets of the coset level."""
        out = teichmuller(v) ** self.tame
        if self.wild is not None and not self.wild.is_trivial():
            out = self.wild(principal_part(v)) * out
        return out

    def check_multiplicative(self, group: ClassGroup, N: int) -> bool:
        if not self.class_values:
            return True
        h = group.class_number
        for i in range(h):
            for j in range(h):
                lhs = self.class_value(i, N) * self.class_value(j, N)
                if not lhs == self.class_value(group.mul(i, j), N):
                    return False
        return True


def class_group_characters(group: ClassGroup, p: int, N: int) -> list[dict]:
    """All characters of the class group with values in mu_(p-1) of Z_p."""
    h = group.class_number
    e = group.exponent()
    if (p - 1) % e:
        return [{i: PadicNumber(1, p, N) for i in range(h)}]
    g = pow(_primitive_root(p), (p - 1) // e, p)
    root = teichmuller(PadicNumber(g, p, N))
    # greedy generating set
    gens, span = [], {group.identity}
    for i in range(h):
        if i not in span:
            gens.append(i)
            span = _closure(group, gens)
    chars = []
    for exps in itertools.product(*[range(e) for _ in gens]):
        val = {group.identity: 0}
        frontier = [group.identity]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for gi, ex in zip(gens, exps):
                y = group.mul(x, gi)
                v = (val[x] + ex) % e
                if y in val:
                    if val[y] != v:
                        ok = False
                        break
                else:
                    val[y] = v
                    frontier.append(y)
        if ok:
            chars.append({i: root ** val[i] for i in range(h)})
    return chars


def _closure(group: ClassGroup, gens: list) -> set:
    span, frontier = {group.identity}, [group.identity]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.mul(x, g)
            if y not in span:
                span.add(y)
                frontier.append(y)
    return span


def _primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1


# ---------------------------------------------------------------------------
# Measures and L-values
# ---------------------------------------------------------------------------


def substitution_exponent(bundle: ExpansionBundle, ideal: IdealClass, N: int) -> PadicNumber:
    """alpha = N(a)^-1 sqrt(-D_K)^-1 at precision N."""
    p = bundle.prime
    n = class_norm(ideal, bundle.c, p, bundle.D_K)
    inv_norm = padic_from_rational(n.denominator, n.numerator, p, N)
    return inv_norm * sqrt_minus_DK(p, bundle.D_K, N).inverse()


def mu_f_class(bundle: ExpansionBundle, entry: ClassEntry) -> PadicMeasure:
    """The measure with transform f^[p]((1+T)^alpha - 1)."""
    M = entry.series.truncation
    guard = factorial_valuation(M - 1, bundle.prime)
    alpha = substitution_exponent(bundle, entry.ideal, bundle.precision + guard)
    return measure_from_series(substitute_binomial(deplete(entry.series), alpha))


def _pieces(bundle, entry, phi, extra_power=0, avatar=None):
    """Coset -> polynomial coefficients of u -> xi_p(u) phi_p(u_a u)."""
    p, N = bundle.prime, bundle.precision
    m = phi.coset_level
    if avatar is not None:
        m = max(m, avatar.eps.sqrt().conductor_level)
    pm = p ** m
    u_a = entry.u.reduce(min(entry.u.precision, N))
    deg = phi.power + extra_power
    pieces = {}
    for a in range(pm):
        if a % p == 0:
            continue
        v = u_a * a
        const = phi.local_constant(v) * (u_a ** phi.power)
        if avatar is not None and not avatar.eps.is_trivial():
            const = avatar.eps.sqrt()(principal_part(PadicNumber(a, p, N))) * const
        pieces[a] = [0] * deg + [const]
    return pieces, m


def L_one_variable(
    bundle: ExpansionBundle,
    xi: XiSpecialization,
    phi: GammaInfinityCharacter,
    k: int,
    local: str = "unramified",
):
    """sum_a xi_k(a) N(a)^(-k/2) int_{Z_p^x} xi_p(u) phi|[a](u) dmu_{f,a}(u)."""
    if (k - bundle.k0) % (2 * (bundle.prime - 1)) or k % 2:
        raise WeightClassMismatch(f"k={k} is not congruent to k0={bundle.k0}")
    if bundle.mode != "one_var":
        raise ConfigError("L_one_variable needs a one-variable bundle")
    p, N = bundle.prime, bundle.precision
    total = None
    for entry in bundle.classes:
        mu = mu_f_class(bundle, entry)
        if local == "avatar":
            pieces, m = _pieces(bundle, entry, phi, extra_power=k // 2, avatar=xi)
        elif local == "unramified":
            pieces, m = _pieces(bundle, entry, phi)
        else:
            raise ValueError(f"unknown local mode {local!r}")
        integral = integrate_locally_polynomial(mu, pieces, m, units_only=True)
        n = class_norm(entry.ideal, bundle.c, p, bundle.D_K)
        weight = padic_from_rational(n.denominator, n.numerator, p, N) ** (k // 2)
        term = integral * xi[entry.index] * weight * phi.class_value(entry.index, N)
        total = term if total is None else total + term
    return total


def L_big(
    bundle: ExpansionBundle,
    xi: dict,
    chi_inv: dict,
    phi: GammaInfinityCharacter,
) -> IwasawaElement:
    """sum_a chi^-1 xi(a) N(a)^-1 int_{Z_p^x} phi|[a](u) dmu_{eta,a}(u) in Lambda."""
    if bundle.mode != "family":
        raise ConfigError("L_big needs a family bundle")
    p, N = bundle.prime, bundle.precision
    total = None
    for entry in bundle.classes:
        mu = mu_f_class(bundle, entry)
        pieces, m = _pieces(bundle, entry, phi)
        integral = integrate_locally_polynomial(mu, pieces, m, units_only=True)
        n = class_norm(entry.ideal, bundle.c, p, bundle.D_K)
        inv_norm = padic_from_rational(n.denominator, n.numerator, p, N)
        term = integral * chi_inv[entry.index] * xi[entry.index]
        term = term * (inv_norm * phi.class_value(entry.index, N))
        total = term if total is None else total + term
    return total


def specialize_L(value: IwasawaElement, k: int, eps: FiniteCharacter | None = None) -> CyclotomicNumber:
    return arithmetic_specialize(value, k, eps)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


@dataclass
class KappaResult:
    k: int
    eps: tuple
    ok: bool
    precision: int
    lhs: object
    rhs: object
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "eps": list(self.eps),
            "ok": self.ok,
            "precision": self.precision,
            "lhs": _encode(self.lhs),
            "rhs": _encode(self.rhs),
            "detail": self.detail,
        }


@dataclass
class InterpolationReport:
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.results) and all(r.ok for r in self.results)

    def to_dict(self) -> dict:
        return {"check": "interpolation", "ok": self.ok, "kappas": [r.to_dict() for r in self.results]}


def _encode(x):
    if x is None:
        return None
    if isinstance(x, PadicNumber):
        return [x.residue, x.precision]
    if isinstance(x, CyclotomicNumber):
        return {"level": x.level, "coeffs": list(x.coeffs), "precision": x.precision}
    return repr(x)


def _common(lhs, rhs):
    a = lhs if isinstance(lhs, CyclotomicNumber) else CyclotomicNumber.from_padic(lhs)
    b = rhs if isinstance(rhs, CyclotomicNumber) else CyclotomicNumber.from_padic(rhs)
    prec = min(a.precision, b.precision)
    return a.reduce(prec), b.reduce(prec), prec


def interp_check(
    bundle: ExpansionBundle,
    lam: LambdaData,
    phi: GammaInfinityCharacter,
    kappas,
    min_precision: int | None = None,
) -> InterpolationReport:
    """Compare kappa(L_big) with vartheta_kappa(c)^-1 L_one_variable(f_kappa) for each kappa."""
    p, N = bundle.prime, bundle.precision
    if min_precision is None:
        min_precision = max(1, N - 3)
    ctx = CriticalCharacterContext(bundle.k0, p, N, bundle.s_truncation)
    by_index = {e.index: e.ideal for e in bundle.classes}
    chi_inv = {i: chi_inverse_on_class(ideal, bundle.c, ctx) for i, ideal in by_index.items()}
    xi = xi_family(lam, ctx)
    big = L_big(bundle, xi, chi_inv, phi)
    report = InterpolationReport()
    for kappa in kappas:
        k, eps = (kappa, None) if isinstance(kappa, int) else kappa
        eps = eps or FiniteCharacter.trivial(p)
        t0 = time.perf_counter()
        key = (eps.level, eps.exponent)
        if not eps.is_trivial():
            report.results.append(
                KappaResult(k, key, False, 0, None, None, "only trivial eps is covered")
            )
            continue
        try:
            ctx.check_weight(k)
            lhs = specialize_L(big, k, eps)
            fk = bundle.specialize(k, eps)
            rhs = L_one_variable(fk, xi_specialize(lam, k, eps, ctx), phi, k)
            rhs = rhs * vartheta_specialize(Fraction(bundle.c), k, eps, ctx).inverse()
        except ArithmeticError as exc:
            report.results.append(KappaResult(k, key, False, 0, None, None, f"{type(exc).__name__}: {exc}"))
            continue
        a, b, prec = _common(lhs, rhs)
        ok = a == b and prec >= min_precision
        detail = "" if a == b else "values differ"
        if a == b and prec < min_precision:
            detail = f"precision {prec} below required {min_precision}"
        report.results.append(KappaResult(k, key, ok, prec, a, b, detail, time.perf_counter() - t0))
    return report


@dataclass
class StabilizationReport:
    ok: bool
    step: str
    detail: str = ""
    values: tuple = ()

    def to_dict(self) -> dict:
        return {
            "check": "stabilization",
            "ok": self.ok,
            "step": self.step,
            "detail": self.detail,
            "values": [_encode(v) for v in self.values],
        }


def stabilization_check(
    bundle_f: ExpansionBundle,
    bundle_fsharp: ExpansionBundle,
    xi: XiSpecialization,
    phi: GammaInfinityCharacter,
    k: int,
) -> StabilizationReport:
    """Same depletions class by class, hence the same L-values."""
    sharp = {e.index: e for e in bundle_fsharp.classes}
    for e in bundle_f.classes:
        other = sharp.get(e.index)
        if other is None:
            return StabilizationReport(False, "depletion", f"class {e.index} missing")
        d1, d2 = deplete(e.series), deplete(other.series)
        for n, (a, b) in enumerate(zip(d1.coeffs, d2.coeffs)):
            if not a == b:
                return StabilizationReport(False, "depletion", f"class {e.index}, coefficient {n}")
    v1 = L_one_variable(bundle_f, xi, phi, k)
    v2 = L_one_variable(bundle_fsharp, xi, phi, k)
    if not v1 == v2:
        return StabilizationReport(False, "L-value", "depleted series agree but L-values differ", (v1, v2))
    return StabilizationReport(True, "done", "", (v1, v2))


def bundle_from_group(
    group: ClassGroup,
    p: int,
    D_K: int,
    c: int,
    N: int,
    M: int,
    k0: int,
    mode: str,
    series: dict,
    units: dict | None = None,
    s_truncation: int | None = None,
) -> ExpansionBundle:
    units = units or {}
    entries = [
        ClassEntry(ideal, PadicNumber(units.get(ideal.index, 1), p, N), series[ideal.index])
        for ideal in group.classes
    ]
    return ExpansionBundle(p, D_K, c, N, M, k0, mode, entries, s_truncation)

