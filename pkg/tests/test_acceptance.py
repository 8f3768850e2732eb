"""Acceptance criteria 1-8, one test each.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

from __future__ import annotations

import math
import random
import time

import pytest

from padicfam.characters import (
    CriticalCharacterContext,
    LambdaData,
    chi_inverse_on_class,
    vartheta_family,
    vartheta_specialize,
    xi_family,
    xi_specialize,
)
from padicfam.config import RunConfig
from padicfam.iwasawa import (
    FiniteCharacter,
    IwasawaElement,
    arithmetic_specialize,
    characters,
    check_star_condition,
    reconstruct_from_characters,
)
from padicfam.lfunction import (
    GammaInfinityCharacter,
    L_one_variable,
    class_group_characters,
    interp_check,
    stabilization_check,
)
from padicfam.measures import (
    coset_value,
    dirac,
    integrate_locally_polynomial,
    measure_from_atoms,
    measure_from_series,
    moment,
    restrict_to_units,
    series_from_measure,
    truncation_precision,
)
from padicfam.padic import CyclotomicNumber, PadicNumber, factorial_valuation
from padicfam.powerseries import PowerSeries, binomial_power, deplete, substitute_binomial
from padicfam.quadratic import ClassGroup, principal_form, reduced_forms
from padicfam.synth import synth_bundle, synth_lambda


def _unit(rng, p, N):
    while True:
        x = rng.randrange(1, p**N)
        if x % p:
            return x


def _series(rng, p, N, M):
    return PowerSeries.from_ints([rng.randrange(p**N) for _ in range(M)], p, N, M)


# ---------------------------------------------------------------------------
# 1. interpolation
# ---------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_criterion_1_interpolation(acceptance):
    N, M, MS = 8, 32, 8
    failures, slowest, configs = [], 0.0, 0
    class_numbers = {}
    for p, D in [(5, 11), (13, 23)]:
        cfg = RunConfig(p, N, M, D, s_truncation=MS, seed=p * 100 + D)
        bundle = synth_bundle(cfg)
        group = ClassGroup.for_order(D, 1, p)
        class_numbers[(p, D)] = group.class_number
        lambdas = [synth_lambda(cfg, trivial=True), synth_lambda(cfg, seed=1), synth_lambda(cfg, seed=2)]
        phi_c = class_group_characters(group, p, N)[-1]
        phis = [
            GammaInfinityCharacter.trivial(p),
            GammaInfinityCharacter(p, phi_c),
            GammaInfinityCharacter(p, None, 0, FiniteCharacter(p, 2, 1)),
            GammaInfinityCharacter(p, None, 0, None, 1),
        ]
        weights = [2, 2 + 2 * (p - 1)]
        for li, lam in enumerate(lambdas):
            for fi, phi in enumerate(phis):
                t0 = time.perf_counter()
                rep = interp_check(bundle, lam, phi, weights, min_precision=N - 3)
                dt = time.perf_counter() - t0
                slowest = max(slowest, dt)
                configs += 1
                if not rep.ok or any(r.precision < N - 3 for r in rep.results):
                    failures.append(f"p={p} lambda#{li} phi#{fi}: {[r.detail for r in rep.results]}")
                if dt >= 10:
                    failures.append(f"p={p} lambda#{li} phi#{fi}: {dt:.1f}s")
    ok = not failures and class_numbers == {(5, 11): 1, (13, 23): 3}
    acceptance(ok, f"{configs} configurations, slowest {slowest:.2f}s" if ok else "; ".join(failures[:3]))
    assert ok, failures


# ---------------------------------------------------------------------------
# 2. reconstruction round trip
# ---------------------------------------------------------------------------


@pytest.mark.criterion(2)
def test_criterion_2_reconstruction(acceptance):
    p, N, MS, m = 3, 8, 48, 3
    rng = random.Random(2)
    t0 = time.perf_counter()
    failures = []
    chars = characters(p, m)
    alphas = [PadicNumber(1 + p, p, N) ** a for a in range(p ** (m - 1))]
    alphas += [PadicNumber(1 + p * rng.randrange(p ** (N - 1)), p, N) for _ in range(4)]
    for i in range(50):
        A = IwasawaElement.from_ints([rng.randrange(p**N) for _ in range(MS)], p, N, M=MS)
        values = {eps: arithmetic_specialize(A, 2, eps) for eps in chars}
        for alpha in alphas:
            if not check_star_condition(values, alpha, m).ok:
                failures.append(f"element {i}: star condition fails at {alpha.residue}")
        R = reconstruct_from_characters(values, m)
        expected = A.reduce_omega(m)
        if R.precision < N - (m - 1) or expected.precision < N - (m - 1) or not R == expected:
            failures.append(f"element {i}: round trip differs")
    dt = time.perf_counter() - t0
    ok = not failures and dt < 5
    acceptance(ok, f"50 elements, {dt:.2f}s" if ok else "; ".join(failures[:3]) or f"{dt:.2f}s")
    assert ok, failures


# ---------------------------------------------------------------------------
# 3. measures
# ---------------------------------------------------------------------------


def _sum(xs):
    it = iter(xs)
    acc = next(it)
    for x in it:
        acc = acc + x
    return acc


@pytest.mark.criterion(3)
def test_criterion_3_measures(acceptance):
    N, M = 8, 20
    failures = []
    count = 0
    for p in (3, 5):
        rng = random.Random(30 + p)
        for i in range(100):
            count += 1
            F = _series(rng, p, N, M)
            mu = measure_from_series(F)
            if not series_from_measure(mu) == F or not measure_from_atoms(mu.atoms, p) == mu:
                failures.append(f"p={p} #{i}: round trip")
            # values at levels 1..3 via the root-of-unity sums; parents checked against children
            levels = {m: [coset_value(mu, a, m, "roots") for a in range(p**m)] for m in (1, 2, 3)}
            levels[0] = [mu.total_mass()]
            for m in (0, 1, 2):
                for a in range(p**m):
                    children = _sum(levels[m + 1][a + j * p**m] for j in range(p))
                    if not children == levels[m][a]:
                        failures.append(f"p={p} #{i}: additivity at level {m + 1}, coset {a}")
            if not _sum(levels[1]) == F.coeffs[0]:
                failures.append(f"p={p} #{i}: total mass")
            r = restrict_to_units(mu)
            if not restrict_to_units(r) == r or not coset_value(r, 0, 1, "roots").is_zero():
                failures.append(f"p={p} #{i}: restriction")
            # over Z_p the moments only see a_0..a_r; over Z_p^x the truncation
            # must certify N digits at level 1
            Mu = max(M, (N + 1) * (p - 1))
            assert truncation_precision(p, Mu, 1) >= N
            guard = factorial_valuation(Mu - 1, p)
            alpha = PadicNumber(_unit(rng, p, N + guard), p, N + guard)
            delta_full = dirac(alpha, p, N, M)
            delta = dirac(alpha, p, N, Mu)
            for k in range(5):
                if not moment(delta_full, k) == alpha.reduce(N) ** k:
                    failures.append(f"p={p} #{i}: moment {k} over Z_p")
                pieces = {b: [0] * k + [1] for b in range(1, p)}
                val = integrate_locally_polynomial(delta, pieces, 1, units_only=True)
                if not val == alpha.reduce(N) ** k:
                    failures.append(f"p={p} #{i}: moment {k} over Z_p^x")
    ok = not failures
    acceptance(ok, f"{count} series" if ok else "; ".join(failures[:3]))
    assert ok, failures


# ---------------------------------------------------------------------------
# 4. depletion and stabilization
# ---------------------------------------------------------------------------


@pytest.mark.criterion(4)
def test_criterion_4_depletion_stabilization(acceptance):
    failures = []
    rng = random.Random(4)
    for i in range(200):
        p = rng.choice([3, 5, 7, 13])
        f, g = _series(rng, p, 8, 24), _series(rng, p, 8, 24)
        if not deplete(deplete(f)) == deplete(f) or not deplete(f + g) == deplete(f) + deplete(g):
            failures.append(f"deplete case {i}")
    checks = 0
    for p, D in [(5, 11), (13, 23)]:
        cfg = RunConfig(p, 8, 24, D)
        ctx = CriticalCharacterContext(2, p, 8, 8)
        group = ClassGroup.for_order(D, 1, p)
        phis = [
            GammaInfinityCharacter.trivial(p),
            GammaInfinityCharacter(p, class_group_characters(group, p, 8)[-1], 1, FiniteCharacter(p, 2, 1), 1),
        ]
        for seed in range(5):
            f = synth_bundle(cfg, seed=seed, mode="one_var", random_units=True)
            extra = {e.index: _series(rng, p, 8, 24) for e in f.classes}
            sharp = f.map_series(
                lambda e: e.series + PowerSeries(
                    tuple(c if n % p == 0 else c.zero_like() for n, c in enumerate(extra[e.index].coeffs)), p
                )
            )
            lam = synth_lambda(cfg, seed=seed)
            for k in (2, 2 + 2 * (p - 1)):
                xi = xi_specialize(lam, k, None, ctx)
                for phi in phis:
                    checks += 1
                    rep = stabilization_check(f, sharp, xi, phi, k)
                    direct = (L_one_variable(f, xi, phi, k), L_one_variable(sharp, xi, phi, k))
                    if not rep.ok or not direct[0] == direct[1]:
                        failures.append(f"p={p} seed={seed} k={k}: {rep.step} {rep.detail}")
            bad = f.map_series(lambda e: e.series + PowerSeries.monomial(p, 8, 24, 1))
            if stabilization_check(f, bad, xi_specialize(lam, 2, None, ctx), phis[0], 2).ok:
                failures.append(f"p={p} seed={seed}: difference at n=1 not detected")
    ok = not failures
    acceptance(ok, f"200 depletion cases, {checks} stabilization checks" if ok else "; ".join(failures[:3]))
    assert ok, failures


# ---------------------------------------------------------------------------
# 5. substitution group law
# ---------------------------------------------------------------------------


@pytest.mark.criterion(5)
def test_criterion_5_substitution(acceptance):
    N, M = 8, 32
    failures = []
    rng = random.Random(5)
    for i in range(100):
        p = (3, 5)[i % 2]
        W = N + factorial_valuation(M - 1, p)
        a = PadicNumber(rng.randrange(p**W), p, W)
        b = PadicNumber(rng.randrange(p**W), p, W)
        f = _series(rng, p, N, M)
        lhs = substitute_binomial(substitute_binomial(f, a), b)
        rhs = substitute_binomial(f, a * b)
        if lhs.precision < N or not lhs == rhs:
            failures.append(f"#{i}: group law (p={p})")
        s = binomial_power(a + b, M)
        t = binomial_power(a, M) * binomial_power(b, M)
        if s.precision < N or not s == t:
            failures.append(f"#{i}: additivity (p={p})")
    ok = not failures
    acceptance(ok, "100 pairs mod (p^8, T^32)" if ok else "; ".join(failures[:3]))
    assert ok, failures


# ---------------------------------------------------------------------------
# 6. class groups
# ---------------------------------------------------------------------------


def _enumerate_reduced(d):
    out = set()
    for a in range(1, math.isqrt(-d // 3) + 2):
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                out.add((a, b, c))
    return out


@pytest.mark.criterion(6)
def test_criterion_6_class_groups(acceptance):
    failures = []
    discs = [d for d in range(-3, -401, -1) if d % 4 in (0, 1)]
    for d in discs:
        G = ClassGroup.from_discriminant(d)
        h, e = G.class_number, G.identity
        if {f.as_tuple() for f in G.forms} != _enumerate_reduced(d):
            failures.append(f"{d}: forms")
        if G.forms[e] != principal_form(d):
            failures.append(f"{d}: identity")
        for i in range(h):
            if G.mul(i, e) != i or G.mul(i, G.inverse(i)) != e:
                failures.append(f"{d}: identity/inverse at {i}")
            for j in range(h):
                if not 0 <= G.mul(i, j) < h or G.mul(i, j) != G.mul(j, i):
                    failures.append(f"{d}: closure/commutativity at {i},{j}")
                for k in range(h):
                    if G.mul(G.mul(i, j), k) != G.mul(i, G.mul(j, k)):
                        failures.append(f"{d}: associativity at {i},{j},{k}")
    hs = {d: len(reduced_forms(d)) for d in (-4, -3, -23)}
    if hs != {-4: 1, -3: 1, -23: 3}:
        failures.append(f"class numbers {hs}")
    ok = not failures
    acceptance(ok, f"{len(discs)} discriminants" if ok else "; ".join(failures[:3]))
    assert ok, failures


# ---------------------------------------------------------------------------
# 7. two-path agreement for the character families
# ---------------------------------------------------------------------------


@pytest.mark.criterion(7)
def test_criterion_7_two_paths(acceptance):
    failures = []
    pairs = 0
    for p, MS, m in [(3, 48, 3), (5, 32, 2)]:
        N = 8
        ctx = CriticalCharacterContext(2, p, N, MS)
        rng = random.Random(70 + p)
        inputs = [_unit(rng, p, N) for _ in range(100)]
        fam = [vartheta_family(z, ctx) for z in inputs]
        lam = LambdaData(p, N, 2, dict(enumerate(inputs)))
        xi_fam = xi_family(lam, ctx)
        for k in (2, 2 + 2 * (p - 1)):
            for eps in characters(p, m):
                pairs += 1
                for z, V in zip(inputs, fam):
                    if not vartheta_specialize(z, k, eps, ctx) == arithmetic_specialize(V, k, eps):
                        failures.append(f"vartheta p={p} k={k} eps={eps.key()} z={z}")
                direct = xi_specialize(lam, k, eps, ctx)
                for key, X in xi_fam.items():
                    if not direct[key] == arithmetic_specialize(X, k, eps):
                        failures.append(f"xi p={p} k={k} eps={eps.key()} class={key}")
                trivial = xi_specialize(LambdaData.trivial([0], p, N, 2), k, eps, ctx)
                if not trivial[0] == CyclotomicNumber.one(p, 0, N):
                    failures.append(f"xi(t=1) p={p} k={k} eps={eps.key()}")
        one = IwasawaElement.from_ints([1], p, N, M=MS)
        if not all(x == one for x in xi_family(LambdaData.trivial([0, 1], p, N, 2), ctx).values()):
            failures.append(f"xi family on t=1 is not 1 (p={p})")
    for p in (3, 5, 7):
        for m in (1, 2, 3):
            for eps in characters(p, m):
                if not eps.sqrt() * eps.sqrt() == eps:
                    failures.append(f"sqrt of {eps.key()}")
    ok = not failures
    acceptance(ok, f"{pairs} (k, eps) pairs x 100 inputs" if ok else "; ".join(failures[:3]))
    assert ok, failures


# ---------------------------------------------------------------------------
# 8. chi^-1 identity
# ---------------------------------------------------------------------------


@pytest.mark.criterion(8)
def test_criterion_8_chi_identity(acceptance):
    failures = []
    checked = 0
    N = 8
    for p, MS in [(3, 48), (13, 8)]:
        ctx = CriticalCharacterContext(2, p, N, MS)
        G = ClassGroup.for_order(23, 1, p)
        weights = [2 + 2 * (p - 1) * j for j in range(4)]
        for cl in G.classes:
            X = chi_inverse_on_class(cl, 1, ctx)
            n = cl.ideal_index  # c N(a) with c = 1
            for k in weights:
                checked += 1
                expected = pow(n, 1 - k // 2, p**N) if k > 2 else 1
                got = arithmetic_specialize(X, k)
                if not got == CyclotomicNumber.from_padic(PadicNumber(expected, p, N)):
                    failures.append(f"p={p} class {cl.form.as_tuple()} k={k}")
    ok = not failures
    acceptance(ok, f"{checked} (class, weight) cases" if ok else "; ".join(failures[:3]))
    assert ok, failures
