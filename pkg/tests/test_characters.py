"""Dirichlet characters, CRT p-parts, reduced orders."""

from math import gcd

import pytest
from gmpy2 import mpq

from sturmcert.characters import (
    DirichletCharacter,
    ReducedOrderRefuted,
    UndefinedCharacterValue,
    p_part,
    quotient_char,
    reduced_order,
    unit_group_generators,
)
from sturmcert.numberfield import NumberField, factor_prime


@pytest.fixture(scope="module")
def gaussian():
    return NumberField([1, 0, 1])


@pytest.fixture(scope="module")
def zeta5_field():
    # Q(zeta_5): x^4 + x^3 + x^2 + x + 1
    return NumberField([1, 1, 1, 1, 1])


def test_trivial_character(gaussian):
    triv = DirichletCharacter.trivial(gaussian)
    assert triv.order == 1
    for n in (1, 2, 17):
        assert triv.evaluate(n) == gaussian.one


def test_quadratic_mod3(gaussian):
    chi = DirichletCharacter(gaussian, 3, [-1 * gaussian.one])
    assert chi.order == 2
    assert chi.evaluate(2) == -1 * gaussian.one
    assert chi.evaluate(1) == gaussian.one
    with pytest.raises(UndefinedCharacterValue):
        chi.evaluate(3)


def test_order4_mod5_table(gaussian):
    i = gaussian.generator()
    chi = DirichletCharacter(gaussian, 5, [i])
    assert chi.order == 4
    assert chi.evaluate(2) == i
    assert i * i == gaussian.from_rational(-1)
    # full multiplicativity table, brute force
    for a in range(1, 5):
        for b in range(1, 5):
            assert chi.evaluate(a) * chi.evaluate(b) == chi.evaluate(a * b % 5)


def test_bogus_value_order_rejected(gaussian):
    two = gaussian.from_rational(2)
    with pytest.raises(ValueError):
        DirichletCharacter(gaussian, 3, [two])  # 2 is not a root of unity


def test_quotient_same_char_is_trivial(gaussian):
    i = gaussian.generator()
    chi = DirichletCharacter(gaussian, 5, [i])
    assert quotient_char(chi, chi).order == 1


def test_quotient_of_trivial_is_inverse(gaussian):
    i = gaussian.generator()
    chi = DirichletCharacter(gaussian, 5, [i])
    triv = DirichletCharacter.trivial(gaussian)
    q = quotient_char(triv, chi)
    # chi^{-1}(2) = i^3 = -i
    assert q.evaluate(2) == -1 * i


def test_quotient_conjugate_order4_gives_quadratic(gaussian):
    i = gaussian.generator()
    chi = DirichletCharacter(gaussian, 5, [i])
    chibar = DirichletCharacter(gaussian, 5, [-1 * i])
    q = quotient_char(chibar, chi)
    assert q.order == 2
    assert q.evaluate(2) == -1 * gaussian.one


def test_p_part_crt_reconstruction(gaussian):
    i = gaussian.generator()
    gens45 = unit_group_generators(45)
    values = []
    for g, _order in gens45:
        values.append(-1 * gaussian.one if g % 9 != 1 else i)
    chi = DirichletCharacter(gaussian, 45, values)
    chi3 = p_part(chi, 3)
    chi5 = p_part(chi, 5)
    assert chi3.modulus == 9 and chi5.modulus == 5
    for n in range(1, 45):
        if gcd(n, 45) > 1:
            continue
        assert chi.evaluate(n) == chi3.evaluate(n % 9) * chi5.evaluate(n % 5)


def test_p_part_trivial_when_p_absent(gaussian):
    chi = DirichletCharacter(gaussian, 3, [-1 * gaussian.one])
    assert p_part(chi, 5).order == 1
    triv = DirichletCharacter.trivial(gaussian)
    assert p_part(triv, 7).order == 1


def test_reduced_order_trivial(gaussian):
    quartic = NumberField([97377280, 0, -29258, 0, 1])
    P = [p for p in factor_prime(quartic, 5) if p.e == 2][0]
    triv = DirichletCharacter.trivial(quartic)
    assert reduced_order(triv, P, 3) == (0, 1)


def test_reduced_order_quadratic_odd_p():
    quartic = NumberField([97377280, 0, -29258, 0, 1])
    P = [p for p in factor_prime(quartic, 5) if p.e == 2][0]
    chi = DirichletCharacter(quartic, 3, [-1 * quartic.one])
    for m in (1, 2, 3):
        assert reduced_order(chi, P, m) == (0, 2)


def test_reduced_order_order5_char(zeta5_field):
    """Order-5 character mod 25 with values the 5th roots of unity: modulo
    the unique (totally ramified, e=4) place over 5, zeta = 1 mod P but
    zeta != 1 mod P^2; checked against the standard cyclotomic valuation
    v(zeta - 1) = 1."""
    K = zeta5_field
    (P,) = factor_prime(K, 5)
    assert (P.e, P.f) == (4, 1)
    z = K.generator()
    from sturmcert.numberfield import valuation

    assert valuation(z - K.one, P) == 1  # the oracle fact
    gens = unit_group_generators(25)
    assert len(gens) == 1
    chi = DirichletCharacter(K, 25, [z])
    assert chi.order == 5
    assert reduced_order(chi, P, 1) == (0, 1)  # zeta = 1 mod P kills it
    delta, d = reduced_order(chi, P, 2)
    assert (delta, d) == (1, 1)  # survives mod P^2: full order 5 = 5^1 * 1
    # d = 1 divides p - 1, so no refutation; but an order-25 value would
    # refute: build chi of order 25 is impossible here (no zeta_25 in K)


def test_reduced_order_refuted_when_d_not_dividing(gaussian):
    # order-4 character mod 5 over Q(i), place over 7 (i stays a unit):
    # reduced order keeps d = 4, which does not divide 7 - 1 = 6
    chi = DirichletCharacter(gaussian, 5, [gaussian.generator()])
    P = factor_prime(gaussian, 7)[0]
    out = reduced_order(chi, P, 2)
    assert isinstance(out, ReducedOrderRefuted)
    assert out.d == 4


def test_reduced_order_divides_exact_order(gaussian, zeta5_field):
    cases = [
        (gaussian, DirichletCharacter(gaussian, 5, [gaussian.generator()])),
        (zeta5_field, DirichletCharacter(zeta5_field, 25, [zeta5_field.generator()])),
    ]
    for field, chi in cases:
        for p in (3, 7):
            for P in factor_prime(field, p):
                out = reduced_order(chi, P, 2)
                if isinstance(out, ReducedOrderRefuted):
                    continue
                delta, d = out
                assert chi.order % (p**delta * d) == 0


def test_reduced_order_monotone_in_m(zeta5_field):
    K = zeta5_field
    (P,) = factor_prime(K, 5)
    chi = DirichletCharacter(K, 25, [K.generator()])
    prev = 1
    for m in (1, 2, 3, 4, 5):
        delta, d = reduced_order(chi, P, m)
        cur = 5**delta * d
        assert cur % prev == 0
        prev = cur


def test_evaluate_against_brute_force_tables(gaussian):
    """Build characters by assigning generator values, then compare evaluate
    against the table obtained by enumerating the whole unit group as
    products of generator powers (covers the two-generator 2-power case)."""
    from itertools import product as iproduct

    i = gaussian.generator()
    minus_one = -1 * gaussian.one
    for M in (8, 16, 24, 45, 35, 9):
        gens = unit_group_generators(M)
        # choose a value assignment of exact order dividing each generator
        values = []
        for _, g_order in gens:
            values.append(minus_one if g_order % 2 == 0 else gaussian.one)
        chi = DirichletCharacter(gaussian, M, values)
        # brute-force table: walk all exponent tuples
        table = {}
        ranges = [range(o) for _, o in gens]
        for exps in iproduct(*ranges):
            n = 1
            val = gaussian.one
            for (g, _o), e, v in zip(gens, exps, values):
                n = (n * pow(g, e, M)) % M
                for _ in range(e):
                    val = val * v
            if n in table:
                assert table[n] == val, f"generator set not independent mod {M}"
            table[n] = val
        assert len(table) == _phi(M)
        for n, want in table.items():
            assert chi.evaluate(n) == want, (M, n)


def _phi(M):
    return sum(1 for k in range(1, M + 1) if gcd(k, M) == 1)


def test_order4_char_mod16_table(gaussian):
    i = gaussian.generator()
    gens = unit_group_generators(16)
    # -1 on the sign generator, i on the 5-generator (order 4)
    values = []
    for g, g_order in gens:
        values.append(-1 * gaussian.one if g_order == 2 else i)
    chi = DirichletCharacter(gaussian, 16, values)
    for a in range(1, 16, 2):
        for b in range(1, 16, 2):
            assert chi.evaluate(a) * chi.evaluate(b) == chi.evaluate(a * b % 16)
