"""Newform extraction, recipe guards, and byte-identical regeneration of the
committed fixtures."""

import filecmp
import json
import os
from pathlib import Path

import pytest
from gmpy2 import mpq

from oracle_export import recipes
from oracle_export.newforms import newform_orbits
from oracle_export.recipes import RECIPES, ExportRecipe, GuardError

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
FIXTURES = REPO_ROOT / "fixtures"


def test_weight24_orbit_structure():
    orbits = newform_orbits(24, 60)
    assert [o.dim for o in orbits] == [1, 2, 2, 4]
    quartic = orbits[3]
    assert quartic.minpoly_a2 == [78875596800000, 0, -26332200, 0, 1]


def test_weight24_quartic_is_rescaled_committed_field():
    # a_2 = 30 alpha: substituting x -> 30x into the committed polynomial and
    # rescaling reproduces the minimal polynomial of a_2 exactly
    committed = recipes.WEIGHT24_MIN_POLY
    big = [78875596800000, 0, -26332200, 0, 1]
    scaled = [c * 30 ** (4 - i) for i, c in enumerate(committed)]
    # normalize to monic: divide by 30^0 at top... compare proportionally
    ratio = mpq(big[0], scaled[0])
    assert all(
        mpq(b) == ratio * mpq(s) for b, s in zip(big, scaled) if s or b
    )


def test_weight4_orbit_is_eta_product():
    from oracle_export.seriesops import eta_power_series

    orbits = newform_orbits(4, 80)
    assert len(orbits) == 1 and orbits[0].dim == 1
    series = eta_power_series(3, 8, 80)
    coeffs = orbits[0].coefficients(80)
    for n in range(81):
        assert coeffs[n] == [mpq(series[n])]


def test_hecke_recursion_enforced():
    # newform_orbits verifies T_2, T_7, T_13 on every orbit; reaching here
    # without an exception is the assertion, but double-check one identity
    orbits = newform_orbits(24, 120)
    o = orbits[3]
    cs = o.coefficients(120)
    from oracle_export.fieldtools import PowerBasisField

    K = PowerBasisField(o.minpoly_a2)
    a2 = cs[2]
    # a_4 = a_2^2 - 2^23
    want = list(K.mul(a2, a2))
    want[0] -= 2**23
    assert cs[4] == want


def test_guard_fires_on_wrong_selector(tmp_path):
    bad = ExportRecipe(
        weight=24,
        newform_index=0,  # the rational orbit, not the quartic one
        expected_min_poly=recipes.WEIGHT24_MIN_POLY,
        embedding=[0, 30, 0, 0],
        precision=40,
        form_name="wrong",
        field_name="weight24_field",
    )
    with pytest.raises(GuardError):
        recipes.export_newform(bad, str(tmp_path))


def test_guard_fires_on_wrong_embedding(tmp_path):
    bad = ExportRecipe(
        weight=24,
        newform_index=3,
        expected_min_poly=recipes.WEIGHT24_MIN_POLY,
        embedding=[0, 29, 0, 0],  # not a root of the orbit polynomial
        precision=40,
        form_name="wrong",
        field_name="weight24_field",
    )
    with pytest.raises(GuardError):
        recipes.export_newform(bad, str(tmp_path))


def test_guard_fires_on_polynomial_mismatch(tmp_path):
    bad = ExportRecipe(
        weight=24,
        newform_index=3,
        expected_min_poly=[1, 0, 0, 0, 1],
        embedding=[0, 30, 0, 0],
        precision=40,
        form_name="wrong",
        field_name="weight24_field",
    )
    with pytest.raises(GuardError):
        recipes.export_newform(bad, str(tmp_path))


def test_field_files_regenerate_byte_identically(tmp_path):
    for name in ("rational_field", "weight24_field", "weight44_field"):
        path = recipes.export_field(name, str(tmp_path))
        committed = FIXTURES / "fields" / (name + ".json")
        assert filecmp.cmp(path, committed, shallow=False), name


def test_spotchecks_regenerate_byte_identically(tmp_path):
    path = recipes.export_valuation_spotchecks(str(tmp_path))
    committed = FIXTURES / "valuation_spotchecks.json"
    assert filecmp.cmp(path, committed, shallow=False)


def test_forms_regenerate_byte_identically(tmp_path):
    for key in ("weight4", "weight24", "weight44"):
        recipe = RECIPES[key]
        path = recipes.export_newform(recipe, str(tmp_path))
        committed = FIXTURES / "forms" / (recipe.form_name + ".json")
        assert filecmp.cmp(path, committed, shallow=False), key


def test_committed_weight44_coefficients_are_5_integral():
    # coordinates over the committed 5-maximal basis must have denominators
    # coprime to 5 (eigenvalues are algebraic integers)
    obj = json.load(open(FIXTURES / "forms" / "gamma0_9_weight44.json"))
    for row in obj["coefficients"]:
        for v in row:
            if "/" in v:
                den = int(v.split("/")[1])
                assert den % 5 != 0
