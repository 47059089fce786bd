"""Exact truncated q-expansions over a number field, the ord functional
modulo prime-ideal powers, and the Eisenstein unit series used for weight
shifting.

Precision bookkeeping is explicit and pessimistic: every operation records
the precision it actually guarantees (the minimum of its inputs), and
consumers refuse to certify anything beyond it.  Multiplication dispatches
to a Kronecker-substitution convolution (one big-integer product via gmpy2)
after clearing denominators; a schoolbook reference implementation is kept
alongside and the two are checked against each other in the test suite.
"""

from typing import NamedTuple

from gmpy2 import mpq, mpz

from .numberfield import FieldElement, FieldMismatchError, NumberField

__all__ = [
    "QExpansion",
    "OrdResult",
    "PrecisionError",
    "UnitCongruenceError",
    "RATIONAL_FIELD",
    "series_add",
    "series_sub",
    "series_mul",
    "series_mul_schoolbook",
    "ord_mod",
    "bernoulli",
    "eisenstein_unit",
    "unit_power",
    "strip",
]

RATIONAL_FIELD = NumberField([0, 1], name="Q")


class PrecisionError(ValueError):
    """An operation demanded more coefficients than a series carries."""


class UnitCongruenceError(AssertionError):
    """The internal E^(p^j) = 1 mod p^(j+1) tripwire fired: arithmetic bug."""


class QExpansion:
    """Truncated series sum a_n q^n, 0 <= n <= precision, with FieldElement
    coefficients, tagged with weight / level / optional character id."""

    def __init__(self, field, weight, level, precision, coefficients,
                 character_id=None):
        if precision < 0:
            raise PrecisionError("precision must be nonnegative")
        if len(coefficients) != precision + 1:
            raise ValueError("coefficient count must equal precision + 1")
        self.field = field
        self.weight = weight
        self.level = level
        self.precision = precision
        self.coefficients = list(coefficients)
        self.character_id = character_id

    @classmethod
    def from_rational_coeffs(cls, weight, level, values, character_id=None):
        """Series over Q from a plain list of ints/rationals."""
        field = RATIONAL_FIELD
        coeffs = [FieldElement(field, [mpq(v)]) for v in values]
        return cls(field, weight, level, len(values) - 1, coeffs, character_id)

    def coefficient(self, n):
        if n > self.precision:
            raise PrecisionError(
                f"coefficient {n} requested, precision is {self.precision}"
            )
        return self.coefficients[n]

    def is_normalized_cusp_form(self):
        return self.coefficients[0].is_zero() and (
            self.coefficients[1] == self.field.one
        )

    def __repr__(self):
        return (
            f"QExpansion(weight={self.weight}, level={self.level}, "
            f"precision={self.precision})"
        )


class OrdResult(NamedTuple):
    """Result of ord_mod: the smallest violating index, or B+1 with
    exhausted=True when no index up to the precision B violates."""

    value: int
    exhausted: bool


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def _promote(g, h):
    """Bring two series over a common field; a degree-1 (rational) series
    embeds canonically into any field."""
    if g.field == h.field:
        return g, h
    if g.field.degree == 1 and h.field.degree > 1:
        return _embed(g, h.field), h
    if h.field.degree == 1 and g.field.degree > 1:
        return g, _embed(h, g.field)
    raise FieldMismatchError(
        "series live over different fields and neither is rational"
    )


def _embed(g, field):
    one = field.one.coords
    n = field.degree
    coeffs = []
    for c in g.coefficients:
        r = g.field.coords_to_power(c.coords)[0]
        coeffs.append(FieldElement(field, [r * v for v in one]))
    return QExpansion(field, g.weight, g.level, g.precision, coeffs,
                      g.character_id)


def _combine_character(g, h):
    if g.character_id == h.character_id:
        return g.character_id
    return None


def series_add(g, h):
    return _addsub(g, h, 1)


def series_sub(g, h):
    return _addsub(g, h, -1)


def _addsub(g, h, sign):
    # formal coefficientwise combination; cross-weight differences are legal
    # (the ord functional is purely coefficientwise), tagged with the larger
    # weight
    g, h = _promote(g, h)
    prec = min(g.precision, h.precision)
    coeffs = [
        g.coefficients[n] + h.coefficients[n]
        if sign > 0
        else g.coefficients[n] - h.coefficients[n]
        for n in range(prec + 1)
    ]
    return QExpansion(
        g.field,
        max(g.weight, h.weight),
        _lcm(g.level, h.level),
        prec,
        coeffs,
        _combine_character(g, h),
    )


# -- multiplication ----------------------------------------------------------


def _int_pack(coeffs, slot_bytes):
    buf = bytearray(slot_bytes * len(coeffs))
    for i, c in enumerate(coeffs):
        if c:
            b = int(c).to_bytes(slot_bytes, "little")
            buf[i * slot_bytes : i * slot_bytes + len(b)] = b
    return int.from_bytes(bytes(buf), "little")


def _int_unpack(n, slot_bytes, count):
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


def _int_convolve(a, b, prec):
    """Truncated integer convolution by Kronecker substitution."""
    la = min(len(a), prec + 1)
    lb = min(len(b), prec + 1)
    a = a[:la]
    b = b[:lb]
    if la == 0 or lb == 0 or not any(a) or not any(b):
        return [0] * (prec + 1)
    ma = max(0, -min(a))
    mb = max(0, -min(b))
    ap = [c + ma for c in a]
    bp = [c + mb for c in b]
    bound = min(la, lb) * max(max(ap), 1) * max(max(bp), 1)
    slot_bytes = (bound.bit_length() + 8) // 8
    prod = mpz(_int_pack(ap, slot_bytes)) * mpz(_int_pack(bp, slot_bytes))
    n_out = min(prec + 1, la + lb - 1)
    d = _int_unpack(prod, slot_bytes, n_out)
    if ma or mb:
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


def _power_slices(g, prec):
    """Per-power-coordinate integer slices plus a common denominator each."""
    K = g.field
    n = K.degree
    slices = []
    power_rows = [K.coords_to_power(c.coords) for c in g.coefficients[: prec + 1]]
    for i in range(n):
        col = [row[i] for row in power_rows]
        den = 1
        for v in col:
            dv = int(v.denominator)
            g_ = _gcd(den, dv)
            den = den // g_ * dv
        ints = [int(v * den) for v in col]
        slices.append((ints, den))
    return slices


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def series_mul(g, h):
    """Exact Cauchy product truncated at min precision; weight adds, level is
    the lcm."""
    g, h = _promote(g, h)
    if g.precision < 1 or h.precision < 1:
        raise PrecisionError("cannot multiply series of precision 0")
    prec = min(g.precision, h.precision)
    K = g.field
    n = K.degree
    slices_g = _power_slices(g, prec)
    slices_h = _power_slices(h, prec)
    # convolve coordinate pairs, then reduce x^(i+j) mod the minimal polynomial
    acc_power = [[mpq(0)] * (prec + 1) for _ in range(n)]
    red = {}
    for i in range(n):
        gi, den_g = slices_g[i]
        if not any(gi):
            continue
        for j in range(n):
            hj, den_h = slices_h[j]
            if not any(hj):
                continue
            conv = _int_convolve(gi, hj, prec)
            scale = mpq(1, den_g * den_h)
            deg = i + j
            if deg < n:
                target = acc_power[deg]
                for t, v in enumerate(conv):
                    if v:
                        target[t] += v * scale
            else:
                vec = red.get(deg)
                if vec is None:
                    vec = _power_reduction(K, deg)
                    red[deg] = vec
                for coord in range(n):
                    c = vec[coord]
                    if c:
                        cs = c * scale
                        target = acc_power[coord]
                        for t, v in enumerate(conv):
                            if v:
                                target[t] += v * cs
    coeffs = []
    for t in range(prec + 1):
        power_vec = [acc_power[i][t] for i in range(n)]
        coeffs.append(FieldElement(K, K.coords_from_power(power_vec)))
    return QExpansion(
        K,
        g.weight + h.weight,
        _lcm(g.level, h.level),
        prec,
        coeffs,
        _combine_character(g, h),
    )


def _power_reduction(field, deg):
    """Coordinates of x^deg over the power basis."""
    n = field.degree
    if deg < n:
        out = [mpq(0)] * n
        out[deg] = mpq(1)
        return out
    vec = _power_reduction(field, deg - 1)
    shifted = [mpq(0)] + vec[: n - 1]
    top = vec[n - 1]
    if top:
        for i in range(n):
            shifted[i] -= top * field.min_poly[i]
    return shifted


def series_mul_schoolbook(g, h):
    """Reference O(B^2) product with coefficient accumulation deferred to the
    end of each convolution sum; used to cross-check the Kronecker path."""
    g, h = _promote(g, h)
    if g.precision < 1 or h.precision < 1:
        raise PrecisionError("cannot multiply series of precision 0")
    prec = min(g.precision, h.precision)
    K = g.field
    coeffs = []
    for t in range(prec + 1):
        acc = K.zero
        for i in range(t + 1):
            a = g.coefficients[i]
            if a.is_zero():
                continue
            b = h.coefficients[t - i]
            if b.is_zero():
                continue
            acc = acc + a * b
        coeffs.append(acc)
    return QExpansion(
        K,
        g.weight + h.weight,
        _lcm(g.level, h.level),
        prec,
        coeffs,
        _combine_character(g, h),
    )


# -- ord modulo a prime power ------------------------------------------------


def ord_mod(h, place, a):
    """Smallest index n <= precision with v_P(a_n) < a; OrdResult(B+1, True)
    when every coefficient within precision satisfies the congruence."""
    from .numberfield import valuation

    if a < 1:
        raise ValueError("exponent must be positive")
    field = h.field
    if field != place.field:
        if field.degree == 1:
            h = _embed(h, place.field)
        else:
            raise FieldMismatchError("series field does not contain the place")
    p = place.p
    for n in range(h.precision + 1):
        c = h.coefficients[n]
        if c.is_zero():
            continue
        if c.is_integral_at(p):
            shifted = place.apply_tau_power(list(c.coords), a)
            if all(int(v.denominator) % p != 0 for v in shifted):
                continue
            return OrdResult(n, False)
        if valuation(c, place) >= a:
            continue
        return OrdResult(n, False)
    return OrdResult(h.precision + 1, True)


# -- Bernoulli numbers and Eisenstein units ----------------------------------

_BERNOULLI_CACHE = {0: mpq(1), 1: mpq(-1, 2)}


def bernoulli(k):
    """Exact Bernoulli number B_k (convention B_2 = 1/6); odd k > 1 give 0."""
    if k < 0:
        raise ValueError("negative index")
    if k in _BERNOULLI_CACHE:
        return _BERNOULLI_CACHE[k]
    if k % 2 == 1:
        return mpq(0)
    from math import comb

    top = max(j for j in _BERNOULLI_CACHE)
    for m in range(top + 1, k + 1):
        if m % 2 == 1:
            _BERNOULLI_CACHE[m] = mpq(0)
            continue
        acc = mpq(0)
        for j in range(m):
            bj = _BERNOULLI_CACHE[j]
            if bj:
                acc += comb(m + 1, j) * bj
        _BERNOULLI_CACHE[m] = -acc / (m + 1)
    return _BERNOULLI_CACHE[k]


def _sigma_values(r, prec):
    out = [0] * (prec + 1)
    for d in range(1, prec + 1):
        dr = d**r
        for n in range(d, prec + 1, d):
            out[n] += dr
    return out


def eisenstein_unit(p, precision):
    """The weight-shifting unit series E for the prime p: constant term 1,
    p-integral coefficients, E = 1 mod p coefficientwise.

    p >= 5: the classical Eisenstein series of weight p-1 and level 1 (its
    coefficients are p-integral rationals; they are integers for p <= 11).
    p = 2: weight 1, level 3, twisted by the quadratic character mod 3.
    p = 3: weight 2, level 2, using odd divisor sums (the modular companion
    of the weight-2 quasi-modular series).
    """
    if precision < 1:
        raise PrecisionError("precision must be at least 1")
    if p == 2:
        vals = [mpq(0)] * (precision + 1)
        for d in range(1, precision + 1):
            chi = 1 if d % 3 == 1 else (-1 if d % 3 == 2 else 0)
            if chi == 0:
                continue
            for n in range(d, precision + 1, d):
                vals[n] += chi
        vals = [6 * v for v in vals]
        vals[0] = mpq(1)
        return QExpansion.from_rational_coeffs(1, 3, vals)
    if p == 3:
        vals = [mpq(0)] * (precision + 1)
        for d in range(1, precision + 1, 2):
            for n in range(d, precision + 1, d):
                vals[n] += d
        vals = [24 * v for v in vals]
        vals[0] = mpq(1)
        return QExpansion.from_rational_coeffs(2, 2, vals)
    if p < 5 or not _is_prime(p):
        raise ValueError("p must be prime")
    w = p - 1
    mult = mpq(-2 * w) / bernoulli(w)
    sig = _sigma_values(w - 1, precision)
    vals = [mult * s for s in sig]
    vals[0] = mpq(1)
    return QExpansion.from_rational_coeffs(w, 1, vals)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def unit_power(p, exponent, precision, check_modulus=None):
    """E^exponent to the given precision by binary exponentiation.

    When check_modulus = j is supplied and p^j divides the exponent, the
    congruence E^exponent = 1 mod p^(j+1) is asserted coefficientwise; a
    violation signals an arithmetic bug, not bad input.
    """
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    base = eisenstein_unit(p, precision)
    result = QExpansion.from_rational_coeffs(0, 1, [1] + [0] * precision)
    e = exponent
    cur = base
    while e > 0:
        if e & 1:
            result = series_mul(result, cur)
        e >>= 1
        if e:
            cur = series_mul(cur, cur)
    if check_modulus is not None:
        j = check_modulus
        if exponent % (p**j) == 0:
            modulus = p ** (j + 1)
            for n in range(1, result.precision + 1):
                c = result.coefficients[n].coords[0]
                delta = c - (1 if n == 0 else 0)
                num = int(delta.numerator)
                den = int(delta.denominator)
                if den % p == 0 or num % modulus != 0:
                    raise UnitCongruenceError(
                        f"E^{exponent} != 1 mod {p}^{j + 1} at index {n}"
                    )
    return result


def strip(h, np_product, new_level=None):
    """Zero out every coefficient at an index sharing a factor with Np; the
    result is the coprime-part sub-series (same weight and precision)."""
    from math import gcd

    coeffs = []
    for n, c in enumerate(h.coefficients):
        if gcd(n, np_product) > 1:
            coeffs.append(h.field.zero)
        else:
            coeffs.append(c)
    return QExpansion(
        h.field,
        h.weight,
        new_level if new_level is not None else h.level,
        h.precision,
        coeffs,
        h.character_id,
    )
