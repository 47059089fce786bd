"""q-expansion arithmetic, the ord functional, Eisenstein units."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sturmcert.numberfield import NumberField, factor_prime
from sturmcert.qseries import (
    OrdResult,
    PrecisionError,
    QExpansion,
    RATIONAL_FIELD,
    UnitCongruenceError,
    bernoulli,
    eisenstein_unit,
    ord_mod,
    series_add,
    series_mul,
    series_mul_schoolbook,
    series_sub,
    strip,
    unit_power,
)


def _q(vals, weight=2, level=1):
    return QExpansion.from_rational_coeffs(weight, level, vals)


def test_mul_basic():
    out = series_mul(_q([1, 1, 0, 0]), _q([1, -1, 0, 0]))
    assert [int(c.coords[0]) for c in out.coefficients] == [1, 0, -1, 0]
    assert out.weight == 4
    assert out.precision == 3


def test_mul_identity():
    g = _q([0, 1, 5, -7, 3])
    one = _q([1, 0, 0, 0, 0], weight=0)
    out = series_mul(g, one)
    assert [c.coords for c in out.coefficients] == [c.coords for c in g.coefficients]


def test_mul_weight_level_precision():
    g = QExpansion.from_rational_coeffs(4, 3, [1] * 8)
    h = QExpansion.from_rational_coeffs(6, 2, [1] * 6)
    out = series_mul(g, h)
    assert out.weight == 10 and out.level == 6 and out.precision == 5


def test_mul_precision_zero_rejected():
    with pytest.raises(PrecisionError):
        series_mul(_q([1]), _q([1, 2]))


def test_e4_squared_is_e8():
    # classical identity, verified coefficientwise against an independently
    # sieved E_8 = 1 + 480 sum sigma_7(n) q^n
    e4 = eisenstein_unit(5, 50)
    sq = series_mul(e4, e4)
    sig7 = [0] * 51
    for d in range(1, 51):
        for n in range(d, 51, d):
            sig7[n] += d**7
    for n in range(51):
        want = mpq(1) if n == 0 else 480 * sig7[n]
        assert sq.coefficients[n].coords[0] == want


def test_eisenstein_unit_heads():
    e4 = eisenstein_unit(5, 3)
    assert [int(c.coords[0]) for c in e4.coefficients] == [1, 240, 2160, 6720]
    e2 = eisenstein_unit(2, 4)
    assert [int(c.coords[0]) for c in e2.coefficients] == [1, 6, 0, 6, 6]
    assert (e2.weight, e2.level) == (1, 3)
    e3 = eisenstein_unit(3, 4)
    assert [int(c.coords[0]) for c in e3.coefficients] == [1, 24, 24, 96, 24]
    assert (e3.weight, e3.level) == (2, 2)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_eisenstein_unit_congruent_one(p):
    e = eisenstein_unit(p, 500)
    for n in range(1, 501):
        c = e.coefficients[n].coords[0]
        assert int(c.denominator) % p != 0
        assert int(c.numerator) % p == 0


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("j", [0, 1, 2, 3])
def test_unit_power_congruence(p, j):
    unit_power(p, p**j, 200, check_modulus=j)  # raises on violation


def test_unit_power_zero():
    u = unit_power(5, 0, 10)
    assert int(u.coefficients[0].coords[0]) == 1
    assert all(c.is_zero() for c in u.coefficients[1:])


def test_unit_power_multiples_of_25():
    u = unit_power(5, 5, 200)
    for n in range(1, 201):
        assert int(u.coefficients[n].coords[0]) % 25 == 0


def test_unit_power_tripwire_fires_on_corruption(monkeypatch):
    import sturmcert.qseries as qs

    real = qs.eisenstein_unit

    def corrupted(p, precision):
        out = real(p, precision)
        coords = list(out.coefficients[1].coords)
        out.coefficients[1] = out.field.element([coords[0] + 1])
        return out

    monkeypatch.setattr(qs, "eisenstein_unit", corrupted)
    with pytest.raises(UnitCongruenceError):
        qs.unit_power(5, 5, 50, check_modulus=1)


def test_bernoulli_values():
    assert bernoulli(2) == mpq(1, 6)
    assert bernoulli(4) == mpq(-1, 30)
    assert bernoulli(12) == mpq(-691, 2730)
    assert bernoulli(3) == 0


def test_bernoulli_against_independent_recurrence():
    import sympy

    for k in (2, 4, 6, 8, 10, 12, 16, 30):
        b = bernoulli(k)
        s = sympy.bernoulli(k)
        assert mpq(int(s.p), int(s.q)) == b


def test_ord_mod_zero_series_exhausts():
    pl = factor_prime(RATIONAL_FIELD, 5)[0]
    z = _q([0, 0, 0])
    assert ord_mod(z, pl, 1) == OrdResult(3, True)


def test_ord_mod_finds_first_violation():
    pl = factor_prime(RATIONAL_FIELD, 5)[0]
    h = _q([0, 5, 1, 0])
    assert ord_mod(h, pl, 1) == OrdResult(2, False)


def test_ord_mod_monotone_in_exponent(form_w4, form_w24, quartic_field):
    P = [p for p in factor_prime(quartic_field, 5) if p.e == 2][0]
    diff = series_sub(
        strip(form_w24.series, 45),
        strip(_embed_w4(form_w4, quartic_field), 45),
    )
    prev = None
    for a in (1, 2, 3, 4, 5):
        r = ord_mod(diff, P, a)
        if prev is not None:
            assert r.value <= prev
        prev = r.value


def _embed_w4(form_w4, field):
    from sturmcert.qseries import _embed

    return _embed(form_w4.series, field)


def test_ord_mod_fixture_difference_exhausts(form_w4, form_w24, quartic_field):
    # the fixture pair is congruent mod P^3 at every index within precision
    P = [p for p in factor_prime(quartic_field, 5) if p.e == 2][0]
    diff = series_sub(form_w24.series, _embed_w4(form_w4, quartic_field))
    r = ord_mod(diff, P, 3)
    assert r.exhausted and r.value == 2162


def test_strip_basic():
    h = _q([0, 1, 1, 1, 0, 5, 0, 7])
    out = strip(h, 6)
    assert [int(c.coords[0]) for c in out.coefficients] == [0, 1, 0, 0, 0, 5, 0, 7]


def test_strip_idempotent():
    h = _q(list(range(12)))
    once = strip(h, 10)
    twice = strip(once, 10)
    assert [c.coords for c in once.coefficients] == [
        c.coords for c in twice.coefficients
    ]


def test_strip_keeps_coprime_indices(form_w4):
    out = strip(form_w4.series, 45)
    from math import gcd

    for n in range(0, form_w4.series.precision + 1):
        if gcd(n, 45) == 1:
            assert out.coefficients[n] == form_w4.series.coefficients[n]
        else:
            assert out.coefficients[n].is_zero()


def test_cross_weight_difference_is_formal():
    out = series_sub(_q([1, 2], weight=2), _q([1, 5], weight=4))
    assert out.weight == 4
    assert [int(c.coords[0]) for c in out.coefficients] == [0, -3]


small_series = st.lists(
    st.integers(min_value=-40, max_value=40), min_size=2, max_size=9
)


@settings(max_examples=60, deadline=None)
@given(small_series, small_series)
def test_mul_commutative(a, b):
    ga, gb = _q(a), _q(b)
    m1 = series_mul(ga, gb)
    m2 = series_mul(gb, ga)
    assert [c.coords for c in m1.coefficients] == [c.coords for c in m2.coefficients]


@settings(max_examples=40, deadline=None)
@given(small_series, small_series, small_series)
def test_mul_associative(a, b, c):
    ga, gb, gc = _q(a), _q(b), _q(c)
    m1 = series_mul(series_mul(ga, gb), gc)
    m2 = series_mul(ga, series_mul(gb, gc))
    assert [x.coords for x in m1.coefficients] == [x.coords for x in m2.coefficients]


@settings(max_examples=40, deadline=None)
@given(small_series, small_series)
def test_kronecker_matches_schoolbook_rational(a, b):
    m1 = series_mul(_q(a), _q(b))
    m2 = series_mul_schoolbook(_q(a), _q(b))
    assert [x.coords for x in m1.coefficients] == [x.coords for x in m2.coefficients]


def test_kronecker_matches_schoolbook_field():
    import random

    K = NumberField([1, 0, 1])
    rng = random.Random(11)
    for _ in range(15):
        B = rng.randint(2, 10)
        mk = lambda: QExpansion(
            K,
            2,
            1,
            B,
            [
                K.element([mpq(rng.randint(-9, 9), rng.randint(1, 3)),
                           mpq(rng.randint(-9, 9), rng.randint(1, 3))])
                for _ in range(B + 1)
            ],
        )
        a, b = mk(), mk()
        m1 = series_mul(a, b)
        m2 = series_mul_schoolbook(a, b)
        assert [x.coords for x in m1.coefficients] == [
            x.coords for x in m2.coefficients
        ]
