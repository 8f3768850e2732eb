from __future__ import annotations

import random

import pytest

from padicfam.errors import InconsistentFamily, InsufficientPrecision, StarConditionViolated
from padicfam.iwasawa import (
    CharacterFamily,
    FiniteCharacter,
    IwasawaElement,
    arithmetic_specialize,
    assemble_family_series,
    characters,
    check_star_condition,
    omega,
    omega_reduction_precision,
    reconstruct_from_characters,
    specialization_precision,
    specialize_family_series,
    validate_family,
)
from padicfam.padic import CyclotomicNumber, PadicNumber
from padicfam.powerseries import PowerSeries

P, N = 3, 8


def _rand_elem(rng, p=P, n=N, M=48, degree=6):
    vals = [rng.randrange(p**n) for _ in range(degree)]
    return IwasawaElement.from_ints(vals, p, n, M=M)


def _u_element(p=P, n=N, M=16):
    return IwasawaElement.from_ints([1, 1], p, n, M=M)


def test_specialize_examples():
    U = _u_element()
    assert arithmetic_specialize(U, 2) == CyclotomicNumber.one(P, 0, N)
    assert arithmetic_specialize(U, 4) == CyclotomicNumber.from_padic(PadicNumber((1 + P) ** 2, P, N))
    eps = FiniteCharacter(P, 2, 1)
    val = arithmetic_specialize(_u_element(M=40), 2, eps)
    assert val == CyclotomicNumber.zeta(P, 1, val.precision)


def test_specialization_is_ring_hom():
    rng = random.Random(7)
    A, B = _rand_elem(rng), _rand_elem(rng)
    for k, eps in [(2, None), (6, None), (2, FiniteCharacter(P, 2, 1)), (4, FiniteCharacter(P, 3, 2))]:
        sa, sb = arithmetic_specialize(A, k, eps), arithmetic_specialize(B, k, eps)
        assert arithmetic_specialize(A * B, k, eps) == sa * sb
        assert arithmetic_specialize(A + B, k, eps) == sa + sb


def test_specialization_precision_rules():
    A = _rand_elem(random.Random(0), M=48)
    assert specialization_precision(A, 2) == N
    assert specialization_precision(A, 4) == N
    eps3 = FiniteCharacter(P, 3, 1)  # order 9: v(zeta_9 - 1) = 1/6
    assert specialization_precision(A, 2, eps3) == 8
    short = _rand_elem(random.Random(0), M=5)
    assert specialization_precision(short, 2, eps3) == 0
    with pytest.raises(InsufficientPrecision):
        arithmetic_specialize(short, 2, eps3)


def test_omega_divisibility_chain():
    M = 40
    for m in (1, 2):
        w_small, w_big = omega(P, m, N, M), omega(P, m + 1, N, M)
        red = w_big.reduce_omega(m)
        assert red.is_zero()
        assert w_small.reduce_omega(m).is_zero()


def test_omega_reduction_is_ring_hom():
    rng = random.Random(4)
    A, B = _rand_elem(rng), _rand_elem(rng)
    for m in (1, 2, 3):
        assert (A * B).reduce_omega(m) == A.reduce_omega(m) * B.reduce_omega(m)
        assert (A + B).reduce_omega(m) == A.reduce_omega(m) + B.reduce_omega(m)


def test_omega_reduction_precision_value():
    assert omega_reduction_precision(3, 48, 3) == 6
    assert omega_reduction_precision(3, 48, 1) == float("inf")


def test_star_condition_examples():
    one = CyclotomicNumber.one(3, 1, 6)
    chars = characters(3, 2)
    u = PadicNumber(4, 3, 6)
    const = {e: one for e in chars}
    assert check_star_condition(const, u, 2).ok
    ident = {e: e.value_at_u(6) for e in chars}
    assert check_star_condition(ident, u, 2).ok
    delta = {e: (one if e.is_trivial() else one.zero_like()) for e in chars}
    res = check_star_condition(delta, u, 2)
    assert not res.ok and res.valuation == 0
    with pytest.raises(StarConditionViolated):
        reconstruct_from_characters(delta, 2)


def test_reconstruct_examples():
    chars = characters(3, 3)
    one = CyclotomicNumber.one(3, 2, 6)
    A = reconstruct_from_characters({e: one for e in chars}, 3)
    assert A.residues()[0] == 1 and all(r == 0 for r in A.residues()[1:])
    B = reconstruct_from_characters({e: e.value_at_u(6) for e in chars}, 3)
    assert B.residues()[:2] == [1, 1] and all(r == 0 for r in B.residues()[2:])


@pytest.mark.parametrize("seed", range(5))
def test_reconstruct_roundtrip(seed):
    A = _rand_elem(random.Random(seed), degree=12)
    m = 3
    vals = {e: arithmetic_specialize(A, 2, e) for e in characters(P, m)}
    for a in range(1, 9):
        assert check_star_condition(vals, PadicNumber(4, P, N) ** a, m).ok
    R = reconstruct_from_characters(vals, m)
    expected = A.reduce_omega(m)
    assert R.precision == N - (m - 1)
    assert R == expected


def test_characters_and_sqrt():
    for m in (1, 2, 3):
        for eps in characters(5, m):
            assert eps.sqrt() ** 2 == eps
            assert eps * eps.inverse() == FiniteCharacter.trivial(5)
    e = FiniteCharacter(3, 2, 1)
    assert e.at_level(3) == e and e.at_level(3).exponent == 3
    assert e.order == 3 and FiniteCharacter(3, 3, 3).conductor_level == 2


def test_character_evaluation_matches_value_at_u():
    eps = FiniteCharacter(5, 3, 7)
    u = PadicNumber(6, 5, 6)
    assert eps(u ** 3) == eps.value_at_u(6) ** 3


def test_specialize_family_series_examples():
    p, n, M = 3, 6, 40
    one_s = IwasawaElement.from_ints([1, 1], p, n, M=M)
    zero = one_s.zero_like()
    F = PowerSeries((zero, one_s, zero), p)
    triv = specialize_family_series(F, FiniteCharacter.trivial(p))
    assert [c.is_zero() for c in triv.coeffs] == [True, False, True]
    assert triv.coeffs[1] == CyclotomicNumber.one(p, 0, n)
    eps = FiniteCharacter(p, 2, 1)
    G = specialize_family_series(F, eps)
    assert G.coeffs[1] == CyclotomicNumber.zeta(p, 1, G.coeffs[1].precision)


def _family(seed, m_max=3):
    rng = random.Random(seed)
    coeffs = tuple(_rand_elem(rng, n=N, M=48, degree=5) for _ in range(4))
    F = PowerSeries(coeffs, P)
    return F, CharacterFamily.from_series(F, m_max)


def test_validate_family_and_perturbation():
    F, fam = _family(1)
    assert validate_family(fam).ok
    key = (2, 1)
    s = fam.values[key]
    bumped = list(s.coeffs)
    bumped[2] = bumped[2] + 1
    fam.values[key] = PowerSeries(tuple(bumped), P)
    chk = validate_family(fam)
    assert not chk.ok and chk.key == key and chk.coefficient == 2
    with pytest.raises(InconsistentFamily):
        assemble_family_series(fam)


def test_validate_trivial_family():
    F, fam = _family(2, m_max=1)
    assert validate_family(fam).ok


def test_assemble_roundtrip():
    F, fam = _family(3)
    G = assemble_family_series(fam)
    for a, b in zip(F.coeffs, G.coeffs):
        assert b == a.reduce_omega(3)
    for eps in characters(P, 3):
        spec = specialize_family_series(G, eps)
        assert spec == fam.get(eps)
