"""Series arithmetic of the export backend."""

import random

from gmpy2 import mpq

from oracle_export.seriesops import (
    bernoulli_number,
    eisenstein_scaled,
    eta_power_series,
    eta_product_series,
    euler_factor_series,
    int_series_mul,
    int_series_pow,
    sigma_series,
    sigma_twisted_series,
)


def _ref_mul(a, b, prec):
    out = [0] * (prec + 1)
    for i, x in enumerate(a):
        if i > prec or x == 0:
            continue
        for j, y in enumerate(b):
            if i + j > prec:
                break
            out[i + j] += x * y
    return out


def test_kronecker_mul_random():
    rng = random.Random(99)
    for _ in range(400):
        la, lb = rng.randint(1, 25), rng.randint(1, 25)
        a = [rng.randint(-10**8, 10**8) for _ in range(la)]
        b = [rng.randint(-10**8, 10**8) for _ in range(lb)]
        prec = rng.randint(0, 35)
        assert int_series_mul(a, b, prec) == _ref_mul(a, b, prec)


def test_pow_matches_iterated_mul():
    rng = random.Random(5)
    a = [rng.randint(-9, 9) for _ in range(12)]
    acc = [1] + [0] * 20
    for e in range(5):
        assert int_series_pow(a, e, 20) == acc
        acc = int_series_mul(acc, a, 20)


def test_pentagonal_euler_factor():
    # prod (1 - q^n) starts 1 - q - q^2 + q^5 + q^7 - q^12 - q^15
    e = euler_factor_series(1, 16)
    assert e[:16] == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1]


def test_delta_expansion():
    d = eta_power_series(1, 24, 6)
    assert d[:7] == [0, 1, -24, 252, -1472, 4830, -6048]


def test_weight4_form_expansion():
    f1 = eta_power_series(3, 8, 19)
    assert [(n, c) for n, c in enumerate(f1) if c] == [
        (1, 1), (4, -8), (7, 20), (13, -70), (16, 64), (19, 56),
    ]


def test_level3_cusp_form():
    d3 = eta_product_series([(1, 6), (3, 6)], 8)
    # eta(z)^6 eta(3z)^6 = q - 6q^2 + 9q^3 + 4q^4 + 6q^5 - 54q^6 ...
    assert d3[:7] == [0, 1, -6, 9, 4, 6, -54]


def test_eisenstein_scaled_values():
    e4, den4 = eisenstein_scaled(4, 3)
    assert den4 == 1 and e4 == [1, 240, 2160, 6720]
    e12, den12 = eisenstein_scaled(12, 2)
    assert den12 == 691
    assert e12[0] == 691 and e12[1] == 65520


def test_bernoulli():
    assert bernoulli_number(2) == mpq(1, 6)
    assert bernoulli_number(12) == mpq(-691, 2730)


def test_sigma_series_scale():
    s = sigma_series(1, 9, scale=3)
    assert s[3] == 1 and s[6] == 3 and s[9] == 4 and s[1] == 0


def test_sigma_twisted_multiplicative_shape():
    tw = sigma_twisted_series(3, 12)
    # coefficient at a prime q != 3: chi(q) (1 + q^3 * chi(q)^... ) checked
    # directly: at n=2: chi(1)chi(2)*2^3? sum over d | 2: d=1: chi(2)*1;
    # d=2: chi(1)*8: total chi(2) + 8 chi(2)?? compute brute force instead
    def chi(n):
        return 0 if n % 3 == 0 else (1 if n % 3 == 1 else -1)

    for n in range(1, 13):
        want = sum(
            chi(d) * chi(n // d) * d**3 for d in range(1, n + 1) if n % d == 0
        )
        assert tw[n] == want
