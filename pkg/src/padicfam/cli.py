"""Command line entry point: ``padicfam <subcommand> ...``.

Exit status is 0 when every check passes, 1 on a failed check and 2 on a
usage or input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import serialize
from .characters import CriticalCharacterContext, chi_inverse_on_class, xi_family, xi_specialize
from .config import RunConfig
from .errors import ConfigError, PadicError
from .iwasawa import FiniteCharacter, assemble_family_series, reconstruct_from_characters, validate_family
from .lfunction import (
    GammaInfinityCharacter,
    L_big,
    L_one_variable,
    class_group_characters,
    interp_check,
    specialize_L,
    stabilization_check,
)
from .measures import coset_value, integrate_locally_polynomial, measure_from_series
from .padic import PadicNumber, factorial_valuation, padic_from_rational
from .powerseries import PowerSeries, deplete, substitute_binomial
from .quadratic import ClassGroup
from .synth import synth_bundle, synth_family, synth_lambda


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _rational(text: str, p: int, N: int) -> PadicNumber:
    q = Fraction(text)
    return padic_from_rational(q.numerator, q.denominator, p, N)


def _emit(doc: dict, fmt: str, out, text: str | None = None) -> None:
    if fmt == "json":
        out.write(serialize.dumps(doc))
    else:
        out.write((text if text is not None else _text(doc)) + "\n")


def _text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, int) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(doc, list):
        return "\n".join(_text(x, indent) if isinstance(x, (dict, list)) else f"{pad}- {x}" for x in doc)
    return f"{pad}{doc}"


def _report(command: str, ok: bool, results, cfg: RunConfig | None = None, timings=None) -> dict:
    doc = {"command": command, "ok": ok, "config": cfg.to_dict() if cfg else None, "results": results}
    if timings:
        doc["timings"] = timings
    serialize.validate(doc, "report")
    return doc


# ---------------------------------------------------------------------------
# loaders
# ---------------------------------------------------------------------------


def _config(args) -> RunConfig:
    if getattr(args, "config", None):
        cfg = RunConfig.load(args.config)
    else:
        needed = ("p", "N", "M", "D_K")
        missing = [n for n in needed if getattr(args, n, None) is None]
        if missing:
            raise UsageError(f"need --config or {', '.join('--' + m for m in missing)}")
        cfg = RunConfig(args.p, args.N, args.M, args.D_K)
        cfg.apply_env()
    for name in ("c", "k0", "m_max", "seed", "s_truncation"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    return cfg.validate()


def _bundle(args, cfg: RunConfig, attr: str = "bundle"):
    path = getattr(args, attr, None) or (cfg.bundle_path if attr == "bundle" else None)
    if not path:
        raise UsageError(f"--{attr.replace('_', '-')} is required")
    return serialize.bundle_from_dict(serialize.read_json(path))


def _lambda(args, cfg: RunConfig, group: ClassGroup):
    path = getattr(args, "lambda_table", None) or cfg.lambda_path
    if not path:
        return synth_lambda(cfg, trivial=True)
    return serialize.lambda_from_dict(serialize.read_json(path), group)


def _phi(args, cfg: RunConfig, group: ClassGroup) -> GammaInfinityCharacter:
    p = cfg.p
    values = None
    if args.phi_class is not None:
        chars = class_group_characters(group, p, cfg.N)
        if not 0 <= args.phi_class < len(chars):
            raise UsageError(f"--phi-class must be in [0, {len(chars)})")
        values = chars[args.phi_class]
    wild = None
    if args.phi_wild_level:
        wild = FiniteCharacter(p, args.phi_wild_level, args.phi_wild_exponent)
    return GammaInfinityCharacter(p, values, args.phi_tame, wild, args.phi_power)


def _eps(args, p: int) -> FiniteCharacter:
    if getattr(args, "eps_level", None):
        return FiniteCharacter(p, args.eps_level, args.eps_exponent)
    return FiniteCharacter.trivial(p)


def _value(x):
    return serialize.encode_value(x)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_classgroup(args, out) -> int:
    group = ClassGroup.from_discriminant(args.disc, avoid=args.avoid)
    doc = group.to_dict()
    serialize.validate(doc, "classgroup")
    text = f"h({args.disc}) = {group.class_number}\n" + "\n".join(
        f"{i}: {f.as_tuple()}" for i, f in enumerate(group.forms)
    )
    _emit(doc, args.format or "json", out, text)
    return 0


def cmd_deplete(args, out) -> int:
    coeffs = _ints(args.coeffs)
    N = args.N
    if N is None:
        N, top = 1, max((abs(c) for c in coeffs), default=0)
        while args.p ** N <= top:
            N += 1
    f = PowerSeries.from_ints(coeffs, args.p, N)
    res = [c.residue for c in deplete(f).coeffs]
    _emit({"p": args.p, "N": N, "coefficients": res}, args.format or "text", out, ",".join(map(str, res)))
    return 0


def cmd_substitute(args, out) -> int:
    coeffs = _ints(args.coeffs)
    f = PowerSeries.from_ints(coeffs, args.p, args.N)
    guard = factorial_valuation(len(coeffs) - 1, args.p)
    alpha = _rational(args.alpha, args.p, args.N + guard)
    g = substitute_binomial(f, alpha)
    res = g.residues()
    doc = {"p": args.p, "N": g.precision, "alpha": args.alpha, "coefficients": res}
    _emit(doc, args.format or "text", out, ",".join(map(str, res)))
    return 0


def cmd_measure(args, out) -> int:
    mu = measure_from_series(PowerSeries.from_ints(_ints(args.coeffs), args.p, args.N))
    if args.action == "coset":
        v = coset_value(mu, args.a, args.m, args.method)
        doc = {"a": args.a, "m": args.m, "value": v.residue, "precision": v.precision}
        _emit(doc, args.format or "text", out, f"{v.residue} (mod {args.p}^{v.precision})")
    else:
        poly = [0] * args.power + [1]
        if args.units:
            pieces, m = {a: poly for a in range(1, args.p)}, 1
        else:
            pieces, m = {0: poly}, 0
        v = integrate_locally_polynomial(mu, pieces, m, units_only=args.units)
        doc = {"power": args.power, "units": args.units, "value": v.residue, "precision": v.precision}
        _emit(doc, args.format or "text", out, f"{v.residue} (mod {args.p}^{v.precision})")
    return 0


def cmd_family(args, out) -> int:
    fam = serialize.family_from_dict(serialize.read_json(args.family))
    if args.action == "validate":
        chk = validate_family(fam)
        doc = _report("family validate", chk.ok, {"key": chk.key, "coefficient": chk.coefficient, "detail": chk.detail})
        _emit(doc, args.format or "json", out)
        return 0 if chk.ok else 1
    if args.action == "reconstruct":
        m = args.level or fam.m_max
        chars = [FiniteCharacter(fam.prime, m, e) for e in range(fam.prime ** (m - 1))]
        elems = []
        for n in range(fam.truncation):
            vals = {eps: fam.get(eps, m).coeffs[n] for eps in chars}
            elems.append(_value(reconstruct_from_characters(vals, m)))
        doc = _report("family reconstruct", True, {"omega_level": m, "coefficients": elems})
        _emit(doc, args.format or "json", out)
        return 0
    F = assemble_family_series(fam)
    doc = _report("family assemble", True, {"omega_level": fam.m_max, "coefficients": [_value(a) for a in F.coeffs]})
    _emit(doc, args.format or "json", out)
    return 0


def cmd_lfun(args, out) -> int:
    cfg = _config(args)
    bundle = _bundle(args, cfg)
    group = bundle.group
    lam = _lambda(args, cfg, group)
    phi = _phi(args, cfg, group)
    ctx = CriticalCharacterContext(bundle.k0, bundle.prime, bundle.precision, bundle.s_truncation)
    k = args.k or bundle.k0
    if args.action == "one-var":
        if bundle.mode == "family":
            bundle = bundle.specialize(k, _eps(args, bundle.prime))
        v = L_one_variable(bundle, xi_specialize(lam, k, None, ctx), phi, k, local=args.local)
        doc = _report("lfun one-var", True, {"k": k, "value": _value(v), "precision": v.precision}, cfg)
    else:
        chi = {e.index: chi_inverse_on_class(e.ideal, bundle.c, ctx) for e in bundle.classes}
        big = L_big(bundle, xi_family(lam, ctx), chi, phi)
        res = {"value": _value(big), "precision": big.precision}
        if args.action == "specialize":
            v = specialize_L(big, k, _eps(args, bundle.prime))
            res.update({"k": k, "specialization": _value(v), "specialization_precision": v.precision})
        doc = _report(f"lfun {args.action}", True, res, cfg)
    _emit(doc, args.format or "json", out)
    return 0


def cmd_interp_check(args, out) -> int:
    cfg = _config(args)
    bundle = _bundle(args, cfg)
    group = bundle.group
    lam = _lambda(args, cfg, group)
    phi = _phi(args, cfg, group)
    weights = _ints(args.k) if args.k else cfg.weights
    t0 = time.perf_counter()
    rep = interp_check(bundle, lam, phi, weights, min_precision=args.min_precision)
    timings = {"total_seconds": round(time.perf_counter() - t0, 4)} if args.timings else None
    doc = _report("interp-check", rep.ok, rep.to_dict(), cfg, timings)
    _emit(doc, args.format or "json", out)
    return 0 if rep.ok else 1


def cmd_stabilization_check(args, out) -> int:
    cfg = _config(args)
    b1 = _bundle(args, cfg)
    b2 = _bundle(args, cfg, "bundle_sharp")
    lam = _lambda(args, cfg, b1.group)
    phi = _phi(args, cfg, b1.group)
    ctx = CriticalCharacterContext(b1.k0, b1.prime, b1.precision, b1.s_truncation)
    k = args.k or b1.k0
    rep = stabilization_check(b1, b2, xi_specialize(lam, k, None, ctx), phi, k)
    doc = _report("stabilization-check", rep.ok, rep.to_dict(), cfg)
    _emit(doc, args.format or "json", out)
    return 0 if rep.ok else 1


def cmd_synth(args, out) -> int:
    cfg = _config(args)
    seed = cfg.seed if args.seed is None else args.seed
    if args.kind == "bundle":
        doc = serialize.bundle_to_dict(synth_bundle(cfg, seed, args.mode, args.s_degree, args.random_units))
    elif args.kind == "lambda":
        group = ClassGroup.for_order(cfg.D_K, cfg.c, cfg.p)
        doc = serialize.lambda_to_dict(synth_lambda(cfg, seed, trivial=args.trivial), group)
    else:
        doc = serialize.family_to_dict(synth_family(cfg, seed))
    text = serialize.dumps(doc)
    path = args.out or cfg.output_path
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_context(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="RunConfig JSON file")
    for name in ("p", "N", "M", "D_K", "c", "k0", "m_max", "seed", "s_truncation"):
        sp.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int)


def _add_phi(sp: argparse.ArgumentParser) -> None:
    g = sp.add_argument_group("character phi")
    g.add_argument("--lambda-table", help="LambdaData JSON (default: t = 1)")
    g.add_argument("--phi-class", type=int, help="index into the class-group characters")
    g.add_argument("--phi-tame", type=int, default=0)
    g.add_argument("--phi-wild-level", type=int, default=0)
    g.add_argument("--phi-wild-exponent", type=int, default=1)
    g.add_argument("--phi-power", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padicfam", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "text"), default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classgroup", help="reduced forms and composition table")
    sp.add_argument("--disc", type=int, required=True)
    sp.add_argument("--avoid", type=int, default=1, help="choose representatives prime to this")
    sp.set_defaults(func=cmd_classgroup)

    sp = sub.add_parser("deplete", help="drop coefficients with p | n")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--N", type=int)
    sp.set_defaults(func=cmd_deplete)

    sp = sub.add_parser("substitute", help="f((1+T)^alpha - 1)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, default=8)
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--alpha", required=True, help="integer or fraction a/b")
    sp.set_defaults(func=cmd_substitute)

    sp = sub.add_parser("measure", help="coset values and moments")
    sp.add_argument("action", choices=("coset", "integrate"))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, default=8)
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--a", type=int, default=0)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--method", choices=("roots", "atoms"))
    sp.add_argument("--power", type=int, default=0)
    sp.add_argument("--units", action="store_true")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("family", help="character families")
    sp.add_argument("action", choices=("validate", "reconstruct", "assemble"))
    sp.add_argument("--family", required=True)
    sp.add_argument("--level", type=int)
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("lfun", help="L-values")
    sp.add_argument("action", choices=("one-var", "big", "specialize"))
    _add_context(sp)
    sp.add_argument("--bundle")
    sp.add_argument("--k", type=int)
    sp.add_argument("--eps-level", type=int)
    sp.add_argument("--eps-exponent", type=int, default=1)
    sp.add_argument("--local", choices=("unramified", "avatar"), default="unramified")
    _add_phi(sp)
    sp.set_defaults(func=cmd_lfun)

    sp = sub.add_parser("interp-check", help="verify the interpolation identity")
    _add_context(sp)
    sp.add_argument("--bundle")
    sp.add_argument("--k", help="comma-separated weights")
    sp.add_argument("--min-precision", type=int)
    sp.add_argument("--timings", action="store_true")
    _add_phi(sp)
    sp.set_defaults(func=cmd_interp_check)

    sp = sub.add_parser("stabilization-check", help="compare a form with its stabilization")
    _add_context(sp)
    sp.add_argument("--bundle")
    sp.add_argument("--bundle-sharp", required=True)
    sp.add_argument("--k", type=int)
    _add_phi(sp)
    sp.set_defaults(func=cmd_stabilization_check)

    sp = sub.add_parser("synth", help="seeded synthetic inputs")
    _add_context(sp)
    sp.add_argument("--kind", choices=("bundle", "lambda", "family"), default="bundle")
    sp.add_argument("--mode", choices=("one_var", "family"), default="family")
    sp.add_argument("--s-degree", type=int, default=2)
    sp.add_argument("--random-units", action="store_true")
    sp.add_argument("--trivial", action="store_true", help="lambda table t = 1")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_synth)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ConfigError, ValueError, OSError) as exc:
        print(f"padicfam: error: {exc}", file=sys.stderr)
        return 2
    except PadicError as exc:
        print(f"padicfam: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
