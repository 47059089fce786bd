"""Exact truncated q-series arithmetic used by the export backend.

Series are plain Python lists of exact coefficients (int or gmpy2.mpq),
index n holding the coefficient of q^n, truncated at a fixed precision B
(indices 0..B inclusive).  Multiplication of integer series is done by
Kronecker substitution: pack both series into one big integer each, do a
single gmpy2 multiplication, and unpack base-2^t digits.  That keeps the
heavy work inside GMP instead of a Python convolution loop.
"""

from gmpy2 import mpz, mpq

__all__ = [
    "int_series_mul",
    "int_series_pow",
    "series_add",
    "series_scale",
    "eta_power_series",
    "euler_factor_series",
    "sigma_series",
    "sigma_twisted_series",
    "eisenstein_scaled",
    "bernoulli_number",
    "chi3",
]


def _pack(coeffs, slot_bytes):
    """Pack nonnegative ints into one big integer, slot_bytes bytes per slot."""
    buf = bytearray(slot_bytes * len(coeffs))
    for i, c in enumerate(coeffs):
        if c:
            b = int(c).to_bytes(slot_bytes, "little")
            off = i * slot_bytes
            buf[off : off + len(b)] = b
    return int.from_bytes(bytes(buf), "little")


def _unpack(n, slot_bytes, count):
    """Inverse of _pack: extract `count` nonnegative slots from integer n."""
    n = int(n)
    nbytes = max(slot_bytes * count, (n.bit_length() + 7) // 8)
    raw = n.to_bytes(nbytes, "little")
    out = [0] * count
    for i in range(count):
        off = i * slot_bytes
        if off >= len(raw):
            break
        out[i] = int.from_bytes(raw[off : off + slot_bytes], "little")
    return out


def int_series_mul(a, b, prec):
    """Exact product of two integer series, truncated at index `prec` (inclusive).

    Handles signed coefficients by shifting both inputs to nonnegative range
    and correcting with prefix sums afterwards.
    """
    la = min(len(a), prec + 1)
    lb = min(len(b), prec + 1)
    if la == 0 or lb == 0:
        return [0] * (prec + 1)
    a = a[:la]
    b = b[:lb]
    ma = max(0, -min(a))
    mb = max(0, -min(b))
    ap = [c + ma for c in a]
    bp = [c + mb for c in b]
    # Slot width: product digits are bounded by min(la,lb) * max(ap) * max(bp).
    bound = min(la, lb) * max(max(ap), 1) * max(max(bp), 1)
    slot_bytes = (bound.bit_length() + 8) // 8
    prod = mpz(_pack(ap, slot_bytes)) * mpz(_pack(bp, slot_bytes))
    n_out = min(prec + 1, la + lb - 1)
    d = _unpack(prod, slot_bytes, n_out)
    if ma or mb:
        # (a+ma)(b+mb) = ab + ma*b + mb*a + ma*mb over the index window of each
        # output coefficient; subtract the shift terms windowed accordingly.
        pref_a = [0] * (la + 1)
        for i in range(la):
            pref_a[i + 1] = pref_a[i] + a[i]
        pref_b = [0] * (lb + 1)
        for j in range(lb):
            pref_b[j + 1] = pref_b[j] + b[j]
        for n in range(n_out):
            jlo = max(0, n - la + 1)
            jhi = min(n, lb - 1)
            ilo = max(0, n - lb + 1)
            ihi = min(n, la - 1)
            win_b = pref_b[jhi + 1] - pref_b[jlo]
            win_a = pref_a[ihi + 1] - pref_a[ilo]
            pairs = jhi - jlo + 1
            d[n] = d[n] - ma * win_b - mb * win_a - ma * mb * pairs
    if n_out < prec + 1:
        d.extend([0] * (prec + 1 - n_out))
    return d


def int_series_pow(a, e, prec):
    """a**e truncated at `prec`, by binary exponentiation."""
    result = [1] + [0] * prec
    base = a[: prec + 1]
    while e > 0:
        if e & 1:
            result = int_series_mul(result, base, prec)
        e >>= 1
        if e:
            base = int_series_mul(base, base, prec)
    return result


def series_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(x + y)
    return out


def series_scale(a, c):
    return [c * x for x in a]


def euler_factor_series(scale, prec):
    """prod_{n>=1} (1 - q^(scale*n)) truncated at `prec`, by the pentagonal
    number theorem (sparse, no multiplication needed)."""
    out = [0] * (prec + 1)
    out[0] = 1
    k = 1
    while True:
        e1 = scale * (k * (3 * k - 1)) // 2
        e2 = scale * (k * (3 * k + 1)) // 2
        if e1 > prec and e2 > prec:
            break
        s = 1 if k % 2 == 0 else -1
        if e1 <= prec:
            out[e1] += s
        if e2 <= prec:
            out[e2] += s
        k += 1
    return out


def eta_product_series(factors, prec):
    """q-expansion of prod eta(scale*z)^power for factors = [(scale, power)].

    The total leading exponent sum(scale*power)/24 must be a nonnegative
    integer (holomorphic integer-weight eta products only).
    """
    lead = sum(scale * power for scale, power in factors)
    if lead % 24 != 0 or lead < 0:
        raise ValueError("eta product with fractional or negative lead")
    lead //= 24
    core = [1] + [0] * prec
    for scale, power in factors:
        if power < 0:
            raise ValueError("eta quotients not supported")
        piece = int_series_pow(euler_factor_series(scale, prec), power, prec)
        core = int_series_mul(core, piece, prec)
    out = [0] * (prec + 1)
    for n in range(0, prec + 1 - lead):
        out[n + lead] = core[n]
    return out


def eta_power_series(scale, power, prec):
    """q-expansion of eta(scale*z)^power (scale*power divisible by 24)."""
    return eta_product_series([(scale, power)], prec)


def sigma_series(r, prec, scale=1):
    """Series with coefficient sigma_r(n/scale) at q^n (0 when scale does not
    divide n); constant term 0."""
    out = [0] * (prec + 1)
    top = prec // scale
    for d in range(1, top + 1):
        dr = d**r
        for n in range(d, top + 1, d):
            out[scale * n] += dr
    return out


def chi3(n):
    """Quadratic character of conductor 3."""
    m = n % 3
    if m == 0:
        return 0
    return 1 if m == 1 else -1


def sigma_twisted_series(r, prec):
    """Coefficients sum_{d|n} chi3(d) chi3(n/d) d^r; the weight r+1 Eisenstein
    series attached to the pair (chi3, chi3), of level 9, no constant term."""
    out = [0] * (prec + 1)
    for d in range(1, prec + 1):
        cd = chi3(d)
        if cd == 0:
            continue
        dr = cd * d**r
        for n in range(d, prec + 1, d):
            e = n // d
            ce = chi3(e)
            if ce:
                out[n] += dr * ce
    return out


_BERNOULLI_CACHE = {}


def bernoulli_number(k):
    """Exact Bernoulli number B_k (B_2 = 1/6 convention), by the standard
    recurrence sum_{j<=k} C(k+1,j) B_j = 0."""
    if k in _BERNOULLI_CACHE:
        return _BERNOULLI_CACHE[k]
    from math import comb

    known = sorted(_BERNOULLI_CACHE)
    b = [None] * (k + 1)
    for j, v in _BERNOULLI_CACHE.items():
        if j <= k:
            b[j] = v
    for m in range(k + 1):
        if b[m] is not None:
            continue
        if m == 0:
            b[m] = mpq(1)
        elif m == 1:
            b[m] = mpq(-1, 2)
        elif m % 2 == 1:
            b[m] = mpq(0)
        else:
            acc = mpq(0)
            for j in range(m):
                acc += comb(m + 1, j) * b[j]
            b[m] = -acc / (m + 1)
        _BERNOULLI_CACHE[m] = b[m]
    return b[k]


def eisenstein_scaled(w, prec, scale=1):
    """Integer-rescaled classical Eisenstein series of even weight w >= 4 at
    level `scale`: returns den * E_w(scale*z) as an integer series together
    with den, where E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n."""
    bw = bernoulli_number(w)
    mult = mpq(-2 * w) / bw
    den = int(mult.denominator)
    num = int(mult.numerator)
    out = series_scale(sigma_series(w - 1, prec, scale=scale), num)
    out[0] += den
    return out, den
