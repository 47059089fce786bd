"""Export recipes: regenerate the committed fixture files from scratch.

A recipe pins everything needed to reproduce one committed artifact:
the space (level 9, a weight), the newform selector (index into the
deterministically ordered orbit list), the expected defining polynomial of
the committed coefficient field, and the embedding sending the orbit's a_2
into that field.  The expected-polynomial guard aborts the export whenever
the selector would pick an orbit that does not land in the committed field,
so ordering drift between backend versions cannot silently corrupt data.
"""

import os

from gmpy2 import mpq

from . import formats
from .fieldtools import PowerBasisField, ValuationOracle, split_prime
from .newforms import _verify_orbit, newform_orbits
from .seriesops import eta_power_series

LEVEL = 9

# committed coefficient fields
RATIONAL_MIN_POLY = [0, 1]
WEIGHT24_MIN_POLY = [97377280, 0, -29258, 0, 1]
WEIGHT44_MIN_POLY = [
    4907392421290677751604523218137941782204252160000000,
    0,
    -6541705215562791660895525310300160000000,
    0,
    1093150471431726435076300800,
    0,
    -59972003409240,
    0,
    1,
]


class GuardError(RuntimeError):
    """Raised when an export guard (polynomial / selector check) fires."""


class ExportRecipe:
    def __init__(self, weight, newform_index, expected_min_poly, embedding,
                 precision, form_name, field_name):
        self.weight = weight
        self.newform_index = newform_index
        self.expected_min_poly = [int(c) for c in expected_min_poly]
        self.embedding = [mpq(v) for v in embedding]
        self.precision = precision
        self.form_name = form_name
        self.field_name = field_name


RECIPES = {
    "weight4": ExportRecipe(
        weight=4,
        newform_index=0,
        expected_min_poly=RATIONAL_MIN_POLY,
        embedding=[0],
        precision=3961,
        form_name="gamma0_9_weight4",
        field_name="rational_field",
    ),
    "weight24": ExportRecipe(
        weight=24,
        newform_index=3,
        expected_min_poly=WEIGHT24_MIN_POLY,
        embedding=[0, 30, 0, 0],
        precision=2161,
        form_name="gamma0_9_weight24",
        field_name="weight24_field",
    ),
    "weight44": ExportRecipe(
        weight=44,
        newform_index=3,
        expected_min_poly=WEIGHT44_MIN_POLY,
        embedding=[0, 1, 0, 0, 0, 0, 0, 0],
        precision=3961,
        form_name="gamma0_9_weight44",
        field_name="weight44_field",
    ),
}


def field_data(field_name):
    """Committed field description: min poly, integral basis, places."""
    if field_name == "rational_field":
        return {
            "min_poly": RATIONAL_MIN_POLY,
            "integral_basis": None,
            "places": {},
            "order": None,
        }
    if field_name == "weight24_field":
        # the equation order is 5-maximal (Dedekind-clean); the main package
        # derives the places itself, so none are committed.
        return {
            "min_poly": WEIGHT24_MIN_POLY,
            "integral_basis": None,
            "places": {},
            "order": None,
        }
    if field_name == "weight44_field":
        K = PowerBasisField(WEIGHT44_MIN_POLY)
        order, primes = split_prime(K, 5)
        recs = []
        for pd in primes:
            recs.append(
                {
                    "e": pd.e,
                    "f": pd.f,
                    "generator": order._to_order(pd.generator),
                    "tau": order._to_order(pd.tau),
                }
            )
        return {
            "min_poly": WEIGHT44_MIN_POLY,
            "integral_basis": order.basis,
            "places": {5: recs},
            "order": order,
        }
    raise ValueError(f"unknown field {field_name}")


def export_field(field_name, out_dir):
    data = field_data(field_name)
    obj = formats.field_file_obj(
        field_name,
        data["min_poly"],
        integral_basis=data["integral_basis"],
        places=data["places"],
    )
    path = os.path.join(out_dir, "fields", field_name + ".json")
    os.makedirs(os.path.dirname(path), exist_ok=True)
    formats.dump_canonical(obj, path)
    return path


def export_newform(recipe, out_dir):
    """Compute the selected newform orbit, apply the committed-field embedding
    (with guards), and write the form file."""
    field = field_data(recipe.field_name)
    if [int(c) for c in field["min_poly"]] != recipe.expected_min_poly:
        raise GuardError(
            "expected-polynomial guard: committed field polynomial does not "
            "match the recipe"
        )
    K = PowerBasisField(field["min_poly"])
    if recipe.weight == 4:
        # dimension-one rational space: check against the eta-product model
        orbits = newform_orbits(4, 60)
        if recipe.newform_index >= len(orbits):
            raise GuardError("newform selector out of range")
        orbit = orbits[recipe.newform_index]
        if orbit.minpoly_a2 != [0, 1]:
            raise GuardError("expected the rational orbit")
        series = eta_power_series(3, 8, recipe.precision)
        small = orbit.coefficients(50)
        for n in range(51):
            if [mpq(series[n])] != small[n]:
                raise GuardError("eta model disagrees with Hecke model")
        coeffs = [[mpq(c)] for c in series]
    else:
        orbits = newform_orbits(recipe.weight, recipe.precision)
        if recipe.newform_index >= len(orbits):
            raise GuardError("newform selector out of range")
        orbit = orbits[recipe.newform_index]
        if orbit.dim != K.n:
            raise GuardError(
                f"selector picked a dimension-{orbit.dim} orbit, "
                f"committed field has degree {K.n}"
            )
        # the guard: the committed embedding must send a_2 to a root of the
        # orbit's minimal polynomial inside the committed field
        img = recipe.embedding
        acc = [mpq(0)] * K.n
        acc[0] = mpq(orbit.minpoly_a2[-1])
        for c in reversed(orbit.minpoly_a2[:-1]):
            acc = K.mul(acc, img)
            acc[0] += c
        if any(v != 0 for v in acc):
            raise GuardError(
                "expected-polynomial guard: committed embedding is not a root "
                "of the selected orbit's minimal polynomial"
            )
        # full-precision certification of the exported expansion
        _verify_orbit(orbit, recipe.precision, (2, 7))
        raw = orbit.coefficients(recipe.precision)
        # conversion matrix: row j = coords of embedding^j in the power basis
        conv = []
        cur = [mpq(1)] + [mpq(0)] * (K.n - 1)
        for _ in range(orbit.dim):
            conv.append(list(cur))
            cur = K.mul(cur, img)
        coeffs = []
        for vec in raw:
            out = [mpq(0)] * K.n
            for j, d in enumerate(vec):
                if d:
                    row = conv[j]
                    for t in range(K.n):
                        out[t] += d * row[t]
            coeffs.append(out)
    # express over the committed basis when one is present
    order = field["order"]
    if order is not None:
        coeffs = [order._to_order(v) for v in coeffs]
    obj = formats.form_file_obj(
        recipe.form_name,
        LEVEL,
        recipe.weight,
        "../fields/" + recipe.field_name + ".json",
        recipe.precision,
        coeffs,
    )
    path = os.path.join(out_dir, "forms", recipe.form_name + ".json")
    os.makedirs(os.path.dirname(path), exist_ok=True)
    formats.dump_canonical(obj, path)
    return path


def export_valuation_spotchecks(out_dir):
    """Oracle table: HNF-lattice valuations for sample elements at every
    place over 5 of the committed fields."""
    entries = []
    for field_name in ("weight24_field", "weight44_field"):
        data = field_data(field_name)
        K = PowerBasisField(data["min_poly"])
        if data["order"] is not None:
            order, primes = split_prime(K, 5, order=data["order"])
        else:
            order, primes = split_prime(K, 5)
        n = K.n
        samples = [
            [mpq(1)] + [mpq(0)] * (n - 1),
            [mpq(5)] + [mpq(0)] * (n - 1),
            [mpq(0), mpq(1)] + [mpq(0)] * (n - 2),
            [mpq(1), mpq(1)] + [mpq(0)] * (n - 2),
            [mpq(0), mpq(5)] + [mpq(0)] * (n - 2),
            [mpq(25)] + [mpq(0)] * (n - 1),
            [mpq(0), mpq(0), mpq(1)] + [mpq(0)] * (n - 3),
            [mpq(2), mpq(3), mpq(1)] + [mpq(0)] * (n - 3),
            [mpq(10), mpq(5), mpq(0), mpq(1)] + [mpq(0)] * (n - 4),
        ]
        for idx, pd in enumerate(primes):
            oracle = ValuationOracle(K, order, pd)
            for elt in samples:
                v = oracle.valuation(elt)
                entries.append(
                    {
                        "field": "fields/" + field_name + ".json",
                        "p": 5,
                        "place_index": idx,
                        "e": pd.e,
                        "f": pd.f,
                        # elements are recorded over the committed basis
                        "element": order._to_order(elt)
                        if data["order"] is not None
                        else elt,
                        "valuation": "inf" if v is None else v,
                    }
                )
    obj = formats.spotcheck_file_obj(entries)
    path = os.path.join(out_dir, "valuation_spotchecks.json")
    os.makedirs(out_dir, exist_ok=True)
    formats.dump_canonical(obj, path)
    return path


def regenerate_all(out_dir):
    paths = []
    for name in ("rational_field", "weight24_field", "weight44_field"):
        paths.append(export_field(name, out_dir))
    for key in ("weight4", "weight24", "weight44"):
        paths.append(export_newform(RECIPES[key], out_dir))
    paths.append(export_valuation_spotchecks(out_dir))
    return paths
