"""Binary quadratic forms, class groups of imaginary quadratic orders, splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadDiscriminant, DiscriminantMismatch, RepresentativeNotCoprime
from .padic import PadicNumber, hensel_sqrt, padic_from_rational


@dataclass(frozen=True, order=True)
class QuadraticForm:
    """a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, x: int, r: int, y: int, s: int) -> QuadraticForm:
        """f(xX + rY, yX + sY); proper equivalence when xs - ry = 1."""
        a, b, c = self.a, self.b, self.c
        return QuadraticForm(
            self(x, y),
            2 * a * x * r + b * (x * s + r * y) + 2 * c * y * s,
            self(r, s),
        )

    def inverse(self) -> QuadraticForm:
        return reduce_form(QuadraticForm(self.a, -self.b, self.c))

    def as_tuple(self) -> tuple:
        return (self.a, self.b, self.c)


def _check_disc(disc: int) -> None:
    if disc >= 0 or disc % 4 not in (0, 1):
        raise BadDiscriminant(f"{disc} is not a negative discriminant (0 or 1 mod 4)")


def reduce_form(f: QuadraticForm) -> QuadraticForm:
    """The unique reduced form properly equivalent to the positive definite form f."""
    a, b, c = f.a, f.b, f.c
    if a <= 0 or f.discriminant >= 0:
        raise BadDiscriminant("only positive definite forms can be reduced")
    while True:
        if not (-a < b <= a):
            # translate b into (-a, a]
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadraticForm(a, b, c)


def reduced_forms(disc: int) -> list[QuadraticForm]:
    """All reduced primitive forms of discriminant ``disc``, sorted."""
    _check_disc(disc)
    out = []
    amax = math.isqrt(-disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = QuadraticForm(a, b, c)
            if f.is_reduced() and f.is_primitive():
                out.append(f)
    return sorted(out)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(u, v, d) with u a + v b = d = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def compose(f: QuadraticForm, g: QuadraticForm, *more: QuadraticForm) -> QuadraticForm:
    """Gauss composition (Dirichlet/Shanks form), followed by reduction."""
    if more:
        return compose(compose(f, g), *more)
    if f.discriminant != g.discriminant:
        raise DiscriminantMismatch(f"{f.discriminant} != {g.discriminant}")
    if f.a > g.a:
        f, g = g, f
    a1, b1 = f.a, f.b
    a2, b2, c2 = g.a, g.b, g.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        u, _, d = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        x2, y2, d1 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form(QuadraticForm(a3, b3, c3))


def principal_form(disc: int) -> QuadraticForm:
    _check_disc(disc)
    b = disc % 2
    return QuadraticForm(1, b, (b - disc) // 4)


# ---------------------------------------------------------------------------
# Class groups and representatives
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealClass:
    """A class of Pic(O_c) with a stored integral representative.

    ``representative`` is a form equivalent to ``form`` whose leading
    coefficient is the index of the corresponding ideal in O_c.
    """

    form: QuadraticForm
    representative: QuadraticForm
    index: int

    @property
    def ideal_index(self) -> int:
        return self.representative.a


def _coprime_representative(f: QuadraticForm, avoid: int, search: int = 200) -> QuadraticForm:
    if math.gcd(f.a, avoid) == 1:
        return f
    # smallest properly represented value prime to ``avoid``, ties broken by (x, y)
    for bound in range(1, search + 1):
        ring = [
            (x, y)
            for x in range(0, bound + 1)
            for y in range(-bound, bound + 1)
            if max(x, abs(y)) == bound and math.gcd(x, y) == 1 and (x > 0 or y > 0)
        ]
        hits = sorted((f(x, y), x, y) for x, y in ring if math.gcd(f(x, y), avoid) == 1)
        if hits:
            _, x, y = hits[0]
            s, r_neg, _ = _xgcd(x, y)  # s x + r_neg y = 1
            return f.transform(x, -r_neg, y, s)
    raise RepresentativeNotCoprime(f"no value of {f} prime to {avoid} found")


@dataclass
class ClassGroup:
    """Pic(O_c) for O_c of discriminant -c^2 D_K, as reduced forms."""

    discriminant: int
    forms: list
    table: list = field(repr=False)
    classes: list = field(default_factory=list, repr=False)

    @classmethod
    def from_discriminant(cls, disc: int, avoid: int = 1) -> ClassGroup:
        forms = reduced_forms(disc)
        idx = {f: i for i, f in enumerate(forms)}
        table = [[idx[compose(f, g)] for g in forms] for f in forms]
        avoid = avoid * abs(disc)
        classes = [
            IdealClass(f, _coprime_representative(f, avoid), i) for i, f in enumerate(forms)
        ]
        return cls(disc, forms, table, classes)

    @classmethod
    def for_order(cls, D_K: int, c: int = 1, p: int = 1) -> ClassGroup:
        """Pic(O_c), representatives prime to c p D_K."""
        return cls.from_discriminant(-c * c * D_K, avoid=c * p * D_K)

    @property
    def class_number(self) -> int:
        return len(self.forms)

    @property
    def identity(self) -> int:
        return self.index(principal_form(self.discriminant))

    def index(self, f: QuadraticForm) -> int:
        return self.forms.index(reduce_form(f))

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        return self.index(self.forms[i].inverse())

    def power(self, i: int, e: int) -> int:
        e %= self.exponent()
        r = self.identity
        for _ in range(e):
            r = self.mul(r, i)
        return r

    def order(self, i: int) -> int:
        r, n = i, 1
        while r != self.identity:
            r, n = self.mul(r, i), n + 1
        return n

    def exponent(self) -> int:
        return math.lcm(*(self.order(i) for i in range(self.class_number)))

    def to_dict(self) -> dict:
        return {
            "discriminant": self.discriminant,
            "class_number": self.class_number,
            "forms": [list(f.as_tuple()) for f in self.forms],
            "representatives": [list(k.representative.as_tuple()) for k in self.classes],
            "composition_table": self.table,
        }


def class_norm(cls: IdealClass, c: int, p: int | None = None, D_K: int | None = None) -> Fraction:
    """N(a) = c^-1 #(O_c / a) for the stored representative."""
    avoid = c * (p or 1) * (D_K or 1)
    if math.gcd(cls.ideal_index, avoid) != 1:
        raise RepresentativeNotCoprime(
            f"representative of index {cls.ideal_index} is not prime to {avoid}"
        )
    return Fraction(cls.ideal_index, c)


def idele_norm(cls: IdealClass, c: int, p: int, N: int) -> PadicNumber:
    """N_K(a) = (c N(a))^-1 = 1 / #(O_c/a) as a p-adic unit."""
    class_norm(cls, c, p)
    return padic_from_rational(1, cls.ideal_index, p, N)


def norm_padic(cls: IdealClass, c: int, p: int, N: int) -> PadicNumber:
    """N(a) = #(O_c/a) / c in Z_p."""
    n = class_norm(cls, c, p)
    return padic_from_rational(n.numerator, n.denominator, p, N)


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d | n) for a prime n."""
    if n == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = d % n
    if r == 0:
        return 0
    return 1 if pow(r, (n - 1) // 2, n) == 1 else -1


def splitting_type(ell: int, D_K: int) -> str:
    """How the prime ell decomposes in K = Q(sqrt(-D_K))."""
    return {1: "split", -1: "inert", 0: "ramified"}[kronecker(-D_K, ell)]


def sqrt_minus_DK(p: int, D_K: int, N: int) -> PadicNumber:
    """A square root of -D_K in Z_p (p split in K)."""
    return hensel_sqrt(PadicNumber(-D_K, p, N))


def is_fundamental(disc: int) -> bool:
    """Fundamental discriminant test for negative disc."""
    if disc >= 0:
        return False
    if disc % 4 == 1:
        return _squarefree(-disc)
    if disc % 4 == 0:
        m = disc // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


def _squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True
