"""Compare the compiled kernels with the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--json] [--end-to-end]

Each kernel is timed on identical seeded inputs with both backends, and
the outputs are compared before any timing is reported.  ``--end-to-end``
also times one interpolation check in a subprocess per backend.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from padicfam import _kernels_py

try:
    from padicfam import _kernels as _ext
except ImportError:
    _ext = None


def _cases(rng: random.Random):
    q3 = 3**20
    q13 = 13**9
    v = lambda n, q: [rng.randrange(q) for _ in range(n)]  # noqa: E731
    return {
        "poly_mul_trunc n=48": ("poly_mul_trunc", (v(48, q3), v(48, q3), 48, q3)),
        "poly_mul_trunc n=128": ("poly_mul_trunc", (v(128, q3), v(128, q3), 128, q3)),
        "cyclo_mul p=3 level=3": ("cyclo_mul", (v(18, q3), v(18, q3), 3, 3, q3)),
        "cyclo_mul p=13 level=2": ("cyclo_mul", (v(156, q13), v(156, q13), 13, 2, q13)),
        "cyclo_reduce p=5 level=3": ("cyclo_reduce", (v(500, 5**12), 5, 3, 5**12)),
        "group_ring_horner n=169": ("group_ring_horner", (v(32, q13), 1, 169, q13)),
        "group_ring_horner n=625": ("group_ring_horner", (v(32, 5**12), 1, 625, 5**12)),
    }


def bench(repeat: int) -> list[dict]:
    rows = []
    for label, (name, args) in _cases(random.Random(0)).items():
        py_fn = getattr(_kernels_py, name)
        row = {"kernel": label}
        ref = py_fn(*[list(a) if isinstance(a, list) else a for a in args])
        row["python_us"] = _time(py_fn, args, repeat)
        if _ext is not None:
            ext_fn = getattr(_ext, name)
            out = ext_fn(*[list(a) if isinstance(a, list) else a for a in args])
            if list(out) != list(ref):
                raise SystemExit(f"backends disagree on {label}")
            row["cython_us"] = _time(ext_fn, args, repeat)
            row["speedup"] = row["python_us"] / row["cython_us"]
        rows.append(row)
    return rows


def _time(fn, args, repeat: int) -> float:
    number = 20
    best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat))
    return best / number * 1e6


_E2E = """
import time
from padicfam.config import RunConfig
from padicfam.lfunction import GammaInfinityCharacter, interp_check
from padicfam.synth import synth_bundle, synth_lambda
cfg = RunConfig(13, 8, 32, 23, s_truncation=8)
b = synth_bundle(cfg, seed=1)
lam = synth_lambda(cfg, seed=1)
t = time.perf_counter()
rep = interp_check(b, lam, GammaInfinityCharacter.trivial(13), [2, 26])
assert rep.ok
print(time.perf_counter() - t)
"""


def end_to_end() -> dict:
    out = {}
    for backend, env in (("cython", {}), ("python", {"PADICFAM_PURE_PYTHON": "1"})):
        if backend == "cython" and _ext is None:
            continue
        res = subprocess.run(
            [sys.executable, "-c", _E2E],
            env={**os.environ, **env},
            capture_output=True,
            text=True,
            check=True,
        )
        out[backend] = float(res.stdout.strip())
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args(argv)

    rows = bench(args.repeat)
    e2e = end_to_end() if args.end_to_end else None
    if args.json:
        print(json.dumps({"kernels": rows, "end_to_end_seconds": e2e}, indent=2))
        return 0
    if _ext is None:
        print("compiled extension not available; showing the Python timings only")
    print(f"{'kernel':28} {'python us':>12} {'cython us':>12} {'speedup':>8}")
    for r in rows:
        cy = f"{r['cython_us']:12.1f}" if "cython_us" in r else f"{'-':>12}"
        sp = f"{r['speedup']:8.1f}" if "speedup" in r else f"{'-':>8}"
        print(f"{r['kernel']:28} {r['python_us']:12.1f} {cy} {sp}")
    if e2e:
        print()
        for k, v in e2e.items():
            print(f"interp_check p=13 ({k}): {v:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
