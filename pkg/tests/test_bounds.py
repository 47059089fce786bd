"""Level, index, Sturm bound and exponent formulas."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sturmcert.bounds import (
    Inconclusive,
    NecessityRefuted,
    ceil_div,
    cyclotomic_order,
    index_gamma0,
    index_gamma1,
    level_data,
    n_prime,
    r_value,
    s_value,
    sturm_prime_bound,
    weight_modulus_thm1,
    weight_modulus_thm2,
)


def test_n_prime_values():
    assert n_prime(9, 5) == 675
    assert n_prime(15, 5) == 225
    assert n_prime(1, 5) == 25


def test_index_values():
    assert index_gamma0(675) == 1080
    assert index_gamma0(1) == 1
    assert index_gamma1(1) == 1
    assert index_gamma1(2) == 3
    assert index_gamma1(675) == 388800


def _coset_count_gamma1(M):
    """Brute-force coset enumeration: cosets of Gamma_1(M) in SL_2(Z)
    correspond to pairs (c, d) mod M with gcd(c, d, M) = 1."""
    return sum(
        1
        for c in range(M)
        for d in range(M)
        if gcd(gcd(c, d), M) == 1
    )


def _coset_count_gamma0(M):
    """Cosets of Gamma_0(M): points of the projective line over Z/M."""
    seen = set()
    for c in range(M):
        for d in range(M):
            if gcd(gcd(c, d), M) != 1:
                continue
            # canonical representative of (c:d): the orbit under units
            orbit = min(
                ((c * u) % M, (d * u) % M)
                for u in range(1, M)
                if gcd(u, M) == 1
            ) if M > 1 else (0, 0)
            seen.add(orbit)
    return len(seen) if M > 1 else 1


@pytest.mark.parametrize("M", [1, 2, 3, 4, 5, 6, 8, 9, 12])
def test_index_gamma1_against_coset_enumeration(M):
    if M <= 2:
        assert index_gamma1(M) == (1 if M == 1 else 3)
    else:
        assert index_gamma1(M) == _coset_count_gamma1(M)


@pytest.mark.parametrize("M", [2, 3, 4, 5, 6, 8, 9, 12])
def test_index_gamma0_against_coset_enumeration(M):
    assert index_gamma0(M) == _coset_count_gamma0(M)


def test_sturm_bounds():
    assert sturm_prime_bound(24, 1080) == 2160
    assert sturm_prime_bound(44, 1080) == 3960
    assert sturm_prime_bound(1, 12) == 1
    assert sturm_prime_bound(5, 7) == Fraction(35, 12)


def test_s_values():
    assert s_value(3, 2, 0, 5) == 1
    assert s_value(5, 4, 0, 5) == 1
    assert s_value(6, 1, 0, 2) == 4  # alpha(6) = 4
    assert s_value(1, 1, 5, 3) == 0
    assert s_value(2, 1, 0, 2) == 1  # alpha(2) = 1
    assert s_value(1, 1, 0, 2) == 0


def test_ceil_div():
    assert ceil_div(3, 2) == 2
    assert ceil_div(4, 2) == 2
    assert ceil_div(5, 4) == 2


def test_weight_moduli():
    assert weight_modulus_thm1(1, 5) == 20
    assert weight_modulus_thm1(0, 3) == 2
    assert weight_modulus_thm2(2, 1, 0, 1, 5) == 20
    with pytest.raises(NecessityRefuted):
        weight_modulus_thm2(2, 1, 5, 1, 5)
    with pytest.raises(NecessityRefuted):
        weight_modulus_thm2(2, 1, 0, 3, 5)


def test_cyclotomic_order():
    assert cyclotomic_order(1, 1, 5) == 4
    assert cyclotomic_order(3, 2, 5) == 20
    assert cyclotomic_order(4, 1, 3) == 54
    with pytest.raises(ValueError):
        cyclotomic_order(2, 1, 2)


def test_r_values():
    assert r_value(4, 5) == 0
    assert r_value(8, 5, 384) == 0
    assert isinstance(r_value(8, 5), Inconclusive)
    assert isinstance(r_value(8, 5, 10), Inconclusive)


def test_level_data_index_choice():
    ld = level_data(9, 5, "auto", trivial_nebentypus=True)
    assert ld.sturm_index_used == "gamma0" and ld.mu_used == 1080
    ld1 = level_data(9, 5, "auto", trivial_nebentypus=False)
    assert ld1.sturm_index_used == "gamma1" and ld1.mu_used == 388800


@settings(max_examples=80, deadline=None)
@given(
    st.integers(min_value=1, max_value=300),
    st.integers(min_value=1, max_value=300),
)
def test_index_multiplicative_over_coprime(a, b):
    if gcd(a, b) != 1:
        return
    assert index_gamma0(a * b) == index_gamma0(a) * index_gamma0(b)
    if a > 2 and b > 2:
        assert index_gamma1(a * b) == index_gamma1(a) * index_gamma1(b)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=1, max_value=500),
    st.integers(min_value=1, max_value=30),
)
def test_ceil_div_characterization(b, eps):
    c = ceil_div(b, eps)
    assert c * eps >= b > (c - 1) * eps


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=1, max_value=8),
    st.integers(min_value=0, max_value=5),
    st.sampled_from([2, 3, 5, 7]),
)
def test_s_monotone(m, e, r, p):
    assert s_value(m + 1, e, r, p) >= s_value(m, e, r, p)
    assert s_value(m, e, r + 1, p) <= s_value(m, e, r, p)
    assert s_value(m, e + 1, r, p) <= s_value(m, e, r, p)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=9), st.sampled_from([3, 5, 7, 11]))
def test_cyclotomic_order_base_case(e, p):
    assert cyclotomic_order(e, e, p) == p - 1
