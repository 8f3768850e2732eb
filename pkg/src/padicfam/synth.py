"""Seeded synthetic inputs: bundles, lambda tables and character families."""

from __future__ import annotations

import random

from .characters import LambdaData
from .config import RunConfig
from .iwasawa import CharacterFamily, IwasawaElement
from .lfunction import ExpansionBundle, bundle_from_group
from .powerseries import PowerSeries
from .quadratic import ClassGroup


def _residue(rng: random.Random, p: int, N: int) -> int:
    """A residue mod p^N; about a third of them divisible by p."""
    r = rng.randrange(p ** N)
    if rng.random() < 1 / 3:
        r = (r * p ** rng.randrange(1, N)) % p ** N
    return r


def _unit(rng: random.Random, p: int, N: int) -> int:
    while True:
        r = rng.randrange(1, p ** N)
        if r % p:
            return r


def synth_bundle(
    cfg: RunConfig,
    seed: int | None = None,
    mode: str = "family",
    s_degree: int = 2,
    random_units: bool = False,
) -> ExpansionBundle:
    """A valid bundle with pseudo-random coefficients; S-degree <= s_degree in family mode."""
    cfg.validate()
    rng = random.Random(cfg.seed if seed is None else seed)
    p, N, M = cfg.p, cfg.N, cfg.M
    group = ClassGroup.for_order(cfg.D_K, cfg.c, p)
    series, units = {}, {}
    for ideal in group.classes:
        if mode == "family":
            coeffs = tuple(
                IwasawaElement.from_ints(
                    [_residue(rng, p, N) for _ in range(s_degree + 1)], p, N, M=cfg.s_truncation
                )
                for _ in range(M)
            )
            series[ideal.index] = PowerSeries(coeffs, p)
        else:
            series[ideal.index] = PowerSeries.from_ints([_residue(rng, p, N) for _ in range(M)], p, N)
        units[ideal.index] = _unit(rng, p, N) if random_units else 1
    b = bundle_from_group(group, p, cfg.D_K, cfg.c, N, M, cfg.k0, mode, series, units, cfg.s_truncation)
    b.validate()
    return b


def synth_lambda(cfg: RunConfig, seed: int | None = None, trivial: bool = False) -> LambdaData:
    rng = random.Random(cfg.seed if seed is None else seed)
    group = ClassGroup.for_order(cfg.D_K, cfg.c, cfg.p)
    if trivial:
        return LambdaData.trivial(range(group.class_number), cfg.p, cfg.N, cfg.k0)
    vals = {i: _unit(rng, cfg.p, cfg.N) for i in range(group.class_number)}
    return LambdaData(cfg.p, cfg.N, cfg.k0, vals)


def synth_iwasawa(rng: random.Random, p: int, N: int, M: int | None = None, omega_level: int | None = None, degree: int | None = None) -> IwasawaElement:
    n = degree + 1 if degree is not None else (M if M is not None else p ** (omega_level - 1))
    return IwasawaElement.from_ints([_residue(rng, p, N) for _ in range(n)], p, N, M=M, omega_level=omega_level)


def synth_family(cfg: RunConfig, seed: int | None = None) -> CharacterFamily:
    """Character family sampled from a random series over Lambda / omega_{m_max}."""
    rng = random.Random(cfg.seed if seed is None else seed)
    p, N, m = cfg.p, cfg.N, cfg.m_max
    coeffs = tuple(synth_iwasawa(rng, p, N, omega_level=m) for _ in range(cfg.M))
    return CharacterFamily.from_series(PowerSeries(coeffs, p), m)


def synth_series(rng: random.Random, p: int, N: int, M: int) -> PowerSeries:
    return PowerSeries.from_ints([_residue(rng, p, N) for _ in range(M)], p, N)

