"""File formats: field descriptions, form files, certificates.

All numeric payloads are decimal-free integer or fraction strings; a float
anywhere in an input file is a hard parse error (one float would destroy the
soundness of every exact computation downstream).  Serialization is
canonical (sorted keys, one coefficient vector per line) so identical inputs
produce byte-identical certificates apart from the timestamp field.
"""

import hashlib
import json
import os
import re
import tempfile
from datetime import datetime, timezone

from gmpy2 import mpq

from . import __version__
from .characters import DirichletCharacter, unit_group_generators
from .engine import (
    CertifiedFull,
    CertifiedPartial,
    InconclusiveVerdict,
    RefutedAtPrime,
    RefutedByCharacterOrder,
    RefutedByWeightCongruence,
)
from .numberfield import NumberField
from .qseries import QExpansion

__all__ = [
    "FormatError",
    "parse_rational",
    "load_field_file",
    "load_form_file",
    "FormData",
    "certificate_to_obj",
    "serialize_certificate",
    "parse_certificate",
    "write_atomic",
    "sha256_file",
]

_RATIONAL_RE = re.compile(r"^-?[0-9]+(/[1-9][0-9]*)?$")


class FormatError(ValueError):
    """Input file violates the exact-number grammar or the schema."""


def parse_rational(s):
    if not isinstance(s, str) or not _RATIONAL_RE.match(s):
        raise FormatError(
            f"not an exact integer/fraction string: {s!r} (floats and "
            f"decimal points are rejected)"
        )
    return mpq(s)


def _reject_float(value):
    raise FormatError(f"float literal {value!r} in input; exact strings only")


def _load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh, parse_float=_reject_float)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON: {exc}") from exc


_FIELD_CACHE = {}


def load_field_file(path):
    """NumberField from a field description file (cached per absolute path,
    so forms sharing a field share place objects)."""
    key = os.path.abspath(path)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    obj = _load_json(path)
    field = _field_from_obj(obj, path)
    _FIELD_CACHE[key] = field
    return field


def _field_from_obj(obj, where):
    if obj.get("schema") != "number-field/1":
        raise FormatError(f"{where}: expected schema number-field/1")
    min_poly = [parse_rational(c) for c in obj["min_poly"]]
    if any(c.denominator != 1 for c in min_poly):
        raise FormatError(f"{where}: minimal polynomial must be integral")
    basis = obj.get("integral_basis")
    if basis is not None:
        basis = [[parse_rational(v) for v in row] for row in basis]
    places = {}
    for p_str, recs in (obj.get("places") or {}).items():
        p = int(p_str)
        places[p] = [
            {
                "e": int(r["e"]),
                "f": int(r["f"]),
                "generator": [parse_rational(v) for v in r["generator"]],
                "tau": [parse_rational(v) for v in r["tau"]],
            }
            for r in recs
        ]
    return NumberField(
        [int(c) for c in min_poly],
        integral_basis=basis,
        explicit_places=places,
        name=obj.get("name"),
    )


class FormData:
    """A parsed form file: the series, its field, and provenance data."""

    def __init__(self, path, series, field, character, digest):
        self.path = path
        self.series = series
        self.field = field
        self.character = character
        self.digest = digest


def load_form_file(path):
    obj = _load_json(path)
    if obj.get("schema") != "modular-form/1":
        raise FormatError(f"{path}: expected schema modular-form/1")
    level = int(obj["level"])
    weight = int(obj["weight"])
    precision = int(obj["precision"])
    field_ref = obj["field"]
    if isinstance(field_ref, dict) and "inline" in field_ref:
        field = _field_from_obj(field_ref["inline"], path)
    elif isinstance(field_ref, str):
        field_path = os.path.normpath(
            os.path.join(os.path.dirname(path), field_ref)
        )
        field = load_field_file(field_path)
    else:
        raise FormatError(f"{path}: field must be a file reference or inline")
    rows = obj["coefficients"]
    if len(rows) != precision + 1:
        raise FormatError(
            f"{path}: coefficient count {len(rows)} != precision+1 "
            f"{precision + 1}"
        )
    n = field.degree
    coeffs = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise FormatError(
                f"{path}: coefficient {i} has {len(row)} coordinates, "
                f"field degree is {n}"
            )
        coeffs.append(field.element([parse_rational(v) for v in row]))
    series = QExpansion(field, weight, level, precision, coeffs)
    character = _character_from_obj(obj.get("character", "trivial"), field, path)
    if not series.is_normalized_cusp_form():
        raise FormatError(f"{path}: form is not normalized (a_0 = 0, a_1 = 1)")
    digest = sha256_file(path)
    return FormData(path, series, field, character, digest)


def _character_from_obj(obj, field, where):
    if obj == "trivial" or obj is None:
        return DirichletCharacter.trivial(field)
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: character must be 'trivial' or a record")
    modulus = int(obj["modulus"])
    gens = unit_group_generators(modulus)
    supplied = {}
    for gen_str, coords in obj["values"]:
        supplied[int(gen_str)] = field.element(
            [parse_rational(v) for v in coords]
        )
    values = []
    for g, _order in gens:
        if g not in supplied:
            raise FormatError(
                f"{where}: no character value supplied for generator {g} "
                f"of (Z/{modulus})^*"
            )
        values.append(supplied[g])
    return DirichletCharacter(field, modulus, values)


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


# -- certificates -------------------------------------------------------------


def _verdict_to_obj(v):
    out = {"kind": v.kind}
    for key, val in v.__dict__.items():
        if key != "kind":
            out[key] = val
    return out


def _verdict_from_obj(obj):
    kind = obj["kind"]
    data = {k: v for k, v in obj.items() if k != "kind"}
    classes = {
        "CertifiedFull": CertifiedFull,
        "CertifiedPartial": CertifiedPartial,
        "RefutedAtPrime": RefutedAtPrime,
        "RefutedByWeightCongruence": RefutedByWeightCongruence,
        "RefutedByCharacterOrder": RefutedByCharacterOrder,
        "Inconclusive": InconclusiveVerdict,
    }
    return classes[kind](**data)


def certificate_to_obj(cert, inputs, problem_fields, timestamp=None):
    ld = cert.level
    return {
        "schema": "congruence-certificate/1",
        "tool": {"name": "sturmcert", "version": __version__},
        "generated_at": timestamp
        or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "inputs": inputs,
        "problem": problem_fields,
        "assumptions": cert.assumptions,
        "route": cert.route,
        "level": {
            "N": ld.N,
            "p": ld.p,
            "N_prime": ld.N_prime,
            "mu0": ld.mu0,
            "mu1": ld.mu1,
            "sturm_index_used": ld.sturm_index_used,
        },
        "place": cert.place,
        "m": cert.m,
        "exponents": cert.exponents,
        "character_data": cert.character_data,
        "quantities": {k: _jsonable(v) for k, v in cert.quantities.items()},
        "per_prime": [[int(l), int(a)] for l, a in cert.per_prime],
        "soundness_sample": cert.soundness_sample,
        "verdict": _verdict_to_obj(cert.verdict),
    }


def _jsonable(v):
    if isinstance(v, (int, str, bool, type(None))):
        return v
    return str(v)


def _emit(obj, indent=0):
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        lines = ["{"]
        items = sorted(obj.items())
        for i, (k, v) in enumerate(items):
            comma = "," if i < len(items) - 1 else ""
            lines.append(f'{pad} {json.dumps(k)}: {_emit(v, indent + 1)}{comma}')
        lines.append(pad + "}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        lines = ["["]
        for i, v in enumerate(obj):
            comma = "," if i < len(obj) - 1 else ""
            if isinstance(v, list) and all(
                isinstance(w, (str, int)) for w in v
            ):
                lines.append(pad + " " + json.dumps(v) + comma)
            else:
                lines.append(pad + " " + _emit(v, indent + 1) + comma)
        lines.append(pad + "]")
        return "\n".join(lines)
    return json.dumps(obj, sort_keys=True)


def serialize_certificate(obj):
    return _emit(obj) + "\n"


def parse_certificate(text):
    obj = json.loads(text, parse_float=_reject_float)
    if obj.get("schema") != "congruence-certificate/1":
        raise FormatError("not a certificate file")
    obj["verdict_object"] = _verdict_from_obj(obj["verdict"])
    return obj


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
