"""Writers for the exchange file grammars (field files, form files,
valuation spot-check tables).

The emitted JSON is canonical: keys sorted, one coefficient vector per line,
no timestamps -- regenerating a fixture from the same inputs reproduces the
committed bytes exactly.  All numbers are decimal-free integer or fraction
strings; floats never appear.
"""

import json

from gmpy2 import mpq

GENERATOR_TAG = "oracle-export/0.1 builtin-backend"


def q_str(v):
    v = mpq(v)
    if v.denominator == 1:
        return str(int(v.numerator))
    return f"{int(v.numerator)}/{int(v.denominator)}"


def _dump_scalar(obj):
    return json.dumps(obj, sort_keys=True)


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
        if all(isinstance(v, str) for v in obj):
            return json.dumps(obj)
        lines = ["["]
        for i, v in enumerate(obj):
            comma = "," if i < len(obj) - 1 else ""
            if isinstance(v, list) and all(isinstance(w, str) for w in v):
                lines.append(pad + " " + json.dumps(v) + comma)
            else:
                lines.append(pad + " " + _emit(v, indent + 1) + comma)
        lines.append(pad + "]")
        return "\n".join(lines)
    return _dump_scalar(obj)


def dump_canonical(obj, path):
    text = _emit(obj) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def field_file_obj(name, min_poly, integral_basis=None, places=None):
    obj = {
        "schema": "number-field/1",
        "generated_by": GENERATOR_TAG,
        "name": name,
        "min_poly": [str(int(c)) for c in min_poly],
    }
    if integral_basis is not None:
        obj["integral_basis"] = [[q_str(v) for v in row] for row in integral_basis]
    else:
        obj["integral_basis"] = None
    pl = {}
    for p, recs in (places or {}).items():
        pl[str(p)] = [
            {
                "e": r["e"],
                "f": r["f"],
                "generator": [q_str(v) for v in r["generator"]],
                "tau": [q_str(v) for v in r["tau"]],
            }
            for r in recs
        ]
    obj["places"] = pl
    return obj


def form_file_obj(name, level, weight, field_ref, precision, coefficients,
                  character="trivial"):
    return {
        "schema": "modular-form/1",
        "generated_by": GENERATOR_TAG,
        "name": name,
        "level": level,
        "weight": weight,
        "character": character,
        "field": field_ref,
        "precision": precision,
        "coefficients": [[q_str(v) for v in vec] for vec in coefficients],
    }


def spotcheck_file_obj(entries):
    return {
        "schema": "valuation-spotchecks/1",
        "generated_by": GENERATOR_TAG,
        "entries": [
            {
                "field": e["field"],
                "p": e["p"],
                "place_index": e["place_index"],
                "e": e["e"],
                "f": e["f"],
                "element": [q_str(v) for v in e["element"]],
                "valuation": e["valuation"],
            }
            for e in entries
        ],
    }
