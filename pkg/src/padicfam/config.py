"""Run configuration: loading, validation and path overrides from the environment."""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

from .errors import ConfigError
from .padic import is_odd_prime
from .quadratic import splitting_type

ENV_PATHS = {
    "bundle_path": "PADICFAM_BUNDLE",
    "lambda_path": "PADICFAM_LAMBDA",
    "output_path": "PADICFAM_OUTPUT",
}


@dataclass
class RunConfig:
    p: int
    N: int
    M: int
    D_K: int
    c: int = 1
    k0: int = 2
    m_max: int = 2
    s_truncation: int | None = None
    seed: int = 0
    weights: list = field(default_factory=list)
    bundle_path: str | None = None
    lambda_path: str | None = None
    output_path: str | None = None

    def __post_init__(self):
        if self.s_truncation is None:
            self.s_truncation = self.N
        if not self.weights:
            self.weights = [2, 2 + 2 * (self.p - 1)] if self.p > 2 else [2]

    def validate(self) -> RunConfig:
        """Raise ConfigError naming the first violated invariant."""
        if not is_odd_prime(self.p):
            raise ConfigError(f"invariant 'p is an odd prime' failed: p={self.p}")
        if self.N < 2:
            raise ConfigError(f"invariant 'N >= 2' failed: N={self.N}")
        if math.gcd(self.p, self.c * self.D_K) != 1:
            raise ConfigError(f"invariant 'p does not divide c*D_K' failed: p={self.p}, c={self.c}, D_K={self.D_K}")
        if splitting_type(self.p, self.D_K) != "split":
            raise ConfigError(f"invariant 'p split in K' failed: p={self.p} is {splitting_type(self.p, self.D_K)} for D_K={self.D_K}")
        if self.k0 % 2 or (self.k0 - 2) % (2 * (self.p - 1)):
            raise ConfigError(f"invariant 'k0 = 2 mod 2(p-1)' failed: k0={self.k0}")
        for k in self.weights:
            if k % 2 or (k - self.k0) % (2 * (self.p - 1)):
                raise ConfigError(f"invariant 'k = k0 mod 2(p-1)' failed for weight {k}")
        return self

    @classmethod
    def from_dict(cls, doc: dict, environ=None) -> RunConfig:
        from .serialize import validate

        validate(doc, "config")
        cfg = cls(**doc)
        cfg.apply_env(environ)
        return cfg

    @classmethod
    def load(cls, path, environ=None) -> RunConfig:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), environ)

    def apply_env(self, environ=None) -> None:
        env = os.environ if environ is None else environ
        for name, var in ENV_PATHS.items():
            if env.get(var):
                setattr(self, name, env[var])

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def field_names() -> list[str]:
        return [f.name for f in fields(RunConfig)]
