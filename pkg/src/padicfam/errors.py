"""Exception hierarchy shared by every module of the package."""


class PadicError(ArithmeticError):
    """Base class for all errors raised by padicfam."""


class DenominatorDivisibleByP(PadicError):
    pass


class NotAUnit(PadicError):
    pass


class NotPrincipalUnit(PadicError):
    pass


class NoSquareRoot(PadicError):
    """The input is not a square modulo p (for p split in K this never happens)."""


class InsufficientPrecision(PadicError):
    pass


class PrecisionMismatch(PadicError):
    """Operands live over different primes or incompatible rings."""


class StarConditionViolated(PadicError):
    """Character values fail the p^(m-1) congruence needed for reconstruction."""


class InconsistentFamily(PadicError):
    pass


class BadDiscriminant(ValueError):
    pass


class DiscriminantMismatch(ValueError):
    pass


class RepresentativeNotCoprime(ValueError):
    pass


class WeightClassMismatch(ValueError):
    """Weight k is not congruent to k0 modulo 2(p-1)."""


class TailBoundTooWeak(PadicError):
    pass


class ConfigError(ValueError):
    """A run configuration violates one of its invariants."""
