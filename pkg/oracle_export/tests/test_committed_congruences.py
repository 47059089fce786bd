"""Independent re-verification of the committed fixtures' headline claims,
consuming only the committed files (the exchange format is the boundary
with the main package; none of its code is imported here)."""

import json
from math import gcd
from pathlib import Path

from gmpy2 import mpq

from oracle_export.fieldtools import PowerBasisField, Order, ValuationOracle, split_prime

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
FIXTURES = REPO_ROOT / "fixtures"


def _rat(s):
    return mpq(s)


def _load_form(name):
    return json.load(open(FIXTURES / "forms" / name))


def _load_field(name):
    return json.load(open(FIXTURES / "fields" / name))


def _field_and_order(field_obj):
    K = PowerBasisField([int(c) for c in field_obj["min_poly"]])
    basis = field_obj.get("integral_basis")
    if basis is None:
        n = K.n
        basis = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    order = Order(K, [[_rat(v) for v in row] for row in basis])
    return K, order


def _coeff_power(field_obj, order, row):
    return order.to_power([_rat(v) for v in row])


def _primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, limit + 1) if sieve[i]]


def _check_congruence(form_hi_name, field_name, want_e, m, limit):
    f1 = _load_form("gamma0_9_weight4.json")
    f2 = _load_form(form_hi_name)
    field_obj = _load_field(field_name)
    K, order = _field_and_order(field_obj)
    _o, primes = split_prime(K, 5, order=order)
    pd = [p for p in primes if p.e == want_e][0]
    oracle = ValuationOracle(K, order, pd)
    n = K.n
    for ell in _primes(limit):
        if 45 % ell == 0:
            continue
        c1 = int(f1["coefficients"][ell][0])
        row2 = _coeff_power(field_obj, order, f2["coefficients"][ell])
        diff = [mpq(c1) - row2[0]] + [-v for v in row2[1:]]
        if all(v == 0 for v in diff):
            continue
        v = oracle.valuation(diff)
        assert v is not None and v >= m, (ell, v)


def test_weight24_congruence_mod_cube_sampled():
    _check_congruence("gamma0_9_weight24.json", "weight24_field.json", 2, 3, 400)


def test_weight44_congruence_mod_fifth_sampled():
    _check_congruence("gamma0_9_weight44.json", "weight44_field.json", 4, 5, 400)


def test_weight24_has_a_counterexample_to_the_fourth_power():
    f1 = _load_form("gamma0_9_weight4.json")
    f2 = _load_form("gamma0_9_weight24.json")
    field_obj = _load_field("weight24_field.json")
    K, order = _field_and_order(field_obj)
    _o, primes = split_prime(K, 5, order=order)
    pd = [p for p in primes if p.e == 2][0]
    oracle = ValuationOracle(K, order, pd)
    row2 = _coeff_power(field_obj, order, f2["coefficients"][2])
    diff = [mpq(int(f1["coefficients"][2][0])) - row2[0]] + [-v for v in row2[1:]]
    assert oracle.valuation(diff) == 3  # not 4: the congruence is sharp at m=3
