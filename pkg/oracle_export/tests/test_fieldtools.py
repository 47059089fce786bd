"""Maximal orders, prime splitting, the lattice valuation oracle."""

import random

import pytest
from gmpy2 import mpq

from oracle_export.fieldtools import (
    Order,
    PowerBasisField,
    ValuationOracle,
    hnf_rows,
    kernel_int,
    lattice_contains,
    p_maximal_order,
    split_prime,
)

QUARTIC = [97377280, 0, -29258, 0, 1]
OCTIC = [
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


def test_hnf_triangular_and_membership():
    rows = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    h = hnf_rows(rows)
    # every original row must lie in the lattice spanned by the HNF basis
    for r in rows:
        assert lattice_contains(h, r)
    assert not lattice_contains(h, [1, 0, 0])


def test_kernel_int():
    rows = [[2, 4], [1, 2], [3, 6]]
    ker = kernel_int(rows)
    for k in ker:
        assert all(
            sum(k[i] * rows[i][j] for i in range(3)) == 0 for j in range(2)
        )
    assert len(ker) == 2


def test_quartic_equation_order_is_5_maximal():
    K = PowerBasisField(QUARTIC)
    order = p_maximal_order(K, 5)
    assert order.basis == [
        [mpq(1 if i == j else 0) for j in range(4)] for i in range(4)
    ]


def test_quartic_split_matches_known_decomposition():
    K = PowerBasisField(QUARTIC)
    order, primes = split_prime(K, 5)
    assert sorted((pd.e, pd.f) for pd in primes) == [(1, 2), (2, 1)]


def test_octic_round_two_grows_and_splits_4_2_2():
    K = PowerBasisField(OCTIC)
    order = p_maximal_order(K, 5)
    eq = Order(K, [[mpq(1 if i == j else 0) for j in range(8)] for i in range(8)])
    assert eq.index_in(order) < 1  # the maximal order strictly contains Z[x]
    order2, primes = split_prime(K, 5, order=order)
    assert sorted(pd.e for pd in primes) == [2, 2, 4]
    assert all(pd.f == 1 for pd in primes)


def test_oracle_basic_valuations_quartic():
    K = PowerBasisField(QUARTIC)
    order, primes = split_prime(K, 5)
    for pd in primes:
        oracle = ValuationOracle(K, order, pd)
        five = [mpq(5), mpq(0), mpq(0), mpq(0)]
        assert oracle.valuation(five) == pd.e
        assert oracle.valuation([mpq(0)] * 4) is None
        ptau = [v * 5 for v in pd.tau]
        assert oracle.valuation(ptau) == pd.e - 1
    ram = [pd for pd in primes if pd.e == 2][0]
    oracle = ValuationOracle(K, order, ram)
    alpha = [mpq(0), mpq(1), mpq(0), mpq(0)]
    assert oracle.valuation(alpha) == 1


def test_oracle_multiplicativity_octic():
    K = PowerBasisField(OCTIC)
    order, primes = split_prime(K, 5)
    pd = [p for p in primes if p.e == 4][0]
    oracle = ValuationOracle(K, order, pd)
    rng = random.Random(17)
    for _ in range(25):
        x = [mpq(rng.randint(-20, 20)) for _ in range(8)]
        y = [mpq(rng.randint(-20, 20)) for _ in range(8)]
        if not any(x) or not any(y):
            continue
        vx = oracle.valuation(x)
        vy = oracle.valuation(y)
        assert oracle.valuation(K.mul(x, y)) == vx + vy


def test_norm_is_multiplicative():
    K = PowerBasisField(QUARTIC)
    rng = random.Random(3)
    for _ in range(20):
        x = [mpq(rng.randint(-9, 9)) for _ in range(4)]
        y = [mpq(rng.randint(-9, 9)) for _ in range(4)]
        assert K.norm(K.mul(x, y)) == K.norm(x) * K.norm(y)
