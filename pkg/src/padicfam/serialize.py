"""JSON encoding of bundles, lambda tables, character families and reports.

Numbers are stored as canonical residues modulo p^N with N in the header;
cyclotomic values as power-basis residue lists with their level.  Every
document is checked against the schema shipped in ``padicfam/schemas``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from .errors import ConfigError
from .iwasawa import CharacterFamily, IwasawaElement
from .lfunction import ClassEntry, ExpansionBundle
from .characters import LambdaData
from .padic import CyclotomicNumber, PadicNumber, as_cyclotomic
from .powerseries import PowerSeries
from .quadratic import ClassGroup, QuadraticForm

SCHEMA_VERSION = 1


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("padicfam.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict, name: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"{name} document invalid: {exc.message}") from exc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# -- scalars ------------------------------------------------------------


def encode_value(x):
    if isinstance(x, PadicNumber):
        return x.residue
    if isinstance(x, CyclotomicNumber):
        if x.level == 0:
            return x.coeffs[0]
        return {"level": x.level, "coeffs": list(x.coeffs)}
    if isinstance(x, IwasawaElement):
        return {"S": [encode_value(c) for c in x.coeffs]}
    if isinstance(x, int):
        return x
    raise TypeError(f"cannot encode {type(x).__name__}")


def decode_value(v, p: int, N: int, s_truncation: int | None = None):
    if isinstance(v, int):
        return PadicNumber(v, p, N)
    if isinstance(v, dict) and "S" in v:
        cs = tuple(_cyclo(c, p, N) for c in v["S"])
        return IwasawaElement(cs, p, truncation=s_truncation or len(cs))
    if isinstance(v, dict):
        return CyclotomicNumber(tuple(v["coeffs"]), p, v["level"], N)
    raise ConfigError(f"cannot decode value {v!r}")


def _cyclo(v, p, N):
    x = decode_value(v, p, N)
    return x if isinstance(x, CyclotomicNumber) else CyclotomicNumber.from_padic(x)


# -- bundles --------------------------------------------------------------


def bundle_to_dict(b: ExpansionBundle) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "p": b.prime,
        "D_K": b.D_K,
        "c": b.c,
        "N": b.precision,
        "M": b.truncation,
        "k0": b.k0,
        "mode": b.mode,
        "s_truncation": b.s_truncation,
        "classes": [
            {
                "form": list(e.ideal.form.as_tuple()),
                "representative": list(e.ideal.representative.as_tuple()),
                "u": e.u.residue,
                "coefficients": [encode_value(c) for c in e.series.coeffs],
            }
            for e in b.classes
        ],
    }


def bundle_from_dict(doc: dict) -> ExpansionBundle:
    validate(doc, "bundle")
    p, N, M = doc["p"], doc["N"], doc["M"]
    ms = doc.get("s_truncation") or N
    group = ClassGroup.for_order(doc["D_K"], doc["c"], p)
    entries = []
    for item in doc["classes"]:
        form = QuadraticForm(*item["form"])
        try:
            ideal = group.classes[group.forms.index(form)]
        except ValueError:
            raise ConfigError(f"{form} is not a reduced form of the order") from None
        rep = QuadraticForm(*item.get("representative", item["form"]))
        if rep != ideal.representative:
            if rep.discriminant != form.discriminant or group.index(rep) != ideal.index:
                raise ConfigError(f"representative {rep} is not in the class of {form}")
            ideal = type(ideal)(ideal.form, rep, ideal.index)
        coeffs = [decode_value(v, p, N, ms) for v in item["coefficients"]]
        if len(coeffs) != M:
            raise ConfigError(f"class {form}: expected {M} coefficients, got {len(coeffs)}")
        if doc["mode"] == "family":
            coeffs = [
                c if isinstance(c, IwasawaElement) else IwasawaElement((as_cyclotomic(c),), p, truncation=ms)
                for c in coeffs
            ]
        entries.append(ClassEntry(ideal, PadicNumber(item["u"], p, N), PowerSeries(tuple(coeffs), p)))
    entries.sort(key=lambda e: e.index)
    b = ExpansionBundle(p, doc["D_K"], doc["c"], N, M, doc["k0"], doc["mode"], entries, ms)
    b.validate()
    return b


# -- lambda tables ----------------------------------------------------------


def lambda_to_dict(lam: LambdaData, group: ClassGroup) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "p": lam.prime,
        "N": lam.precision,
        "k0": lam.k0,
        "values": [
            {"form": list(group.forms[i].as_tuple()), "t": t.residue}
            for i, t in sorted(lam.values.items())
        ],
    }


def lambda_from_dict(doc: dict, group: ClassGroup) -> LambdaData:
    validate(doc, "lambda")
    vals = {}
    for item in doc["values"]:
        vals[group.index(QuadraticForm(*item["form"]))] = item["t"]
    if set(vals) != set(range(group.class_number)):
        raise ConfigError("lambda table must give one value per class")
    return LambdaData(doc["p"], doc["N"], doc["k0"], vals)


# -- character families -------------------------------------------------------


def family_to_dict(fam: CharacterFamily) -> dict:
    entries = []
    for (m, e), F in sorted(fam.values.items()):
        entries.append({"level": m, "exponent": e, "coefficients": [encode_value(c) for c in F.coeffs]})
    return {
        "schema_version": SCHEMA_VERSION,
        "p": fam.prime,
        "N": fam.precision,
        "M": fam.truncation,
        "m_max": fam.m_max,
        "entries": entries,
    }


def family_from_dict(doc: dict) -> CharacterFamily:
    validate(doc, "family")
    p, N = doc["p"], doc["N"]
    fam = CharacterFamily(p, N, doc["M"], doc["m_max"])
    for item in doc["entries"]:
        coeffs = tuple(_cyclo(v, p, N) for v in item["coefficients"])
        fam.values[(item["level"], item["exponent"] % p ** (item["level"] - 1))] = PowerSeries(coeffs, p)
    return fam
