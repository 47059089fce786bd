"""Exact arithmetic in a number field K = Q[x]/(f), factorization of rational
primes into places, and prime-ideal valuations.

All coefficients are gmpy2 rationals; nothing in this module ever touches a
float.  Valuations are computed with the anti-uniformizer method: each place
carries an element tau with v_P(tau) = -1 and nonnegative valuation at every
other place over p, so v_P(x) for a p-integral x is the number of times x can
be multiplied by tau while staying p-integral (p-integrality is read off the
coordinate denominators, which is valid whenever Dedekind's criterion has
certified that p does not divide the index of the stored basis order).
"""

from gmpy2 import mpq

__all__ = [
    "INFINITY",
    "NumberField",
    "FieldElement",
    "PrimePlace",
    "FieldMismatchError",
    "IndexDivisibleError",
    "PlaceConstructionError",
    "factor_prime",
    "valuation",
    "congruent",
]


class FieldMismatchError(ValueError):
    """Two elements from different fields met in one operation."""


class IndexDivisibleError(ValueError):
    """Dedekind's criterion failed at p and no explicit place data exists."""

    def __init__(self, p):
        super().__init__(
            f"cannot certify the factorization of {p}: {p} may divide the "
            f"index of the stored basis order; supply explicit place records"
        )
        self.p = p


class PlaceConstructionError(RuntimeError):
    """A constructed or loaded place failed its verification."""


class _Infinity:
    """Order-compatible +infinity for valuations (no floats)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash("valuation-infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def _vp_int(n, p):
    n = abs(int(n))
    if n == 0:
        raise ValueError("v_p(0) undefined here")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_mpq(x, p):
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


class NumberField:
    """K = Q[x]/(min_poly), with an optional stored integral basis.

    min_poly: ascending integer coefficients, monic, irreducible over Q.
    integral_basis: optional n x n rational matrix; row i is the i-th basis
    element written over the power basis 1, alpha, ..., alpha^(n-1).
    explicit_places: optional {p: [place record dicts]} loaded from a field
    description file for primes where Dedekind's criterion fails.
    """

    def __init__(self, min_poly, integral_basis=None, explicit_places=None,
                 name=None, check_irreducible=True):
        self.min_poly = [mpq(c) for c in min_poly]
        if not self.min_poly or self.min_poly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        if any(c.denominator != 1 for c in self.min_poly):
            raise ValueError("minimal polynomial must have integer coefficients")
        self.degree = len(self.min_poly) - 1
        if self.degree < 1:
            raise ValueError("degree must be at least 1")
        self.name = name
        if check_irreducible and self.degree > 1:
            if not _is_irreducible([int(c) for c in self.min_poly]):
                raise ValueError("minimal polynomial is reducible over Q")
        n = self.degree
        if integral_basis is not None:
            self.basis_matrix = [[mpq(v) for v in row] for row in integral_basis]
            if len(self.basis_matrix) != n or any(
                len(r) != n for r in self.basis_matrix
            ):
                raise ValueError("integral basis must be a square matrix")
            self.basis_inverse = _mat_inverse(self.basis_matrix)
        else:
            self.basis_matrix = None
            self.basis_inverse = None
        # x^k mod f for k = n..2n-2, used by multiplication
        reductions = []
        if n > 1:
            cur = [-c for c in self.min_poly[:-1]]
            reductions.append(list(cur))
            for _ in range(n - 2):
                cur = [mpq(0)] + cur
                top = cur.pop()
                if top:
                    for i in range(n):
                        cur[i] -= top * self.min_poly[i]
                reductions.append(list(cur))
        self._reductions = reductions
        self.explicit_places = explicit_places or {}
        self._factor_cache = {}
        self.one = FieldElement(self, self.coords_from_power([mpq(1)] + [mpq(0)] * (n - 1)))
        self.zero = FieldElement(self, [mpq(0)] * n)

    # -- coordinate conversions ------------------------------------------

    def coords_to_power(self, coords):
        if self.basis_matrix is None:
            return list(coords)
        n = self.degree
        out = [mpq(0)] * n
        for i, c in enumerate(coords):
            if c:
                row = self.basis_matrix[i]
                for j in range(n):
                    out[j] += c * row[j]
        return out

    def coords_from_power(self, power):
        if self.basis_inverse is None:
            return list(power)
        n = self.degree
        out = [mpq(0)] * n
        for i, c in enumerate(power):
            if c:
                row = self.basis_inverse[i]
                for j in range(n):
                    out[j] += c * row[j]
        return out

    def _poly_mul_mod(self, a, b):
        """Product of two power-coordinate vectors, reduced mod min_poly."""
        n = self.degree
        if n == 1:
            return [a[0] * b[0]]
        prod = [mpq(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                red = self._reductions[k - n]
                for i in range(n):
                    out[i] += c * red[i]
        return out

    # -- element constructors --------------------------------------------

    def element(self, coords):
        return FieldElement(self, [mpq(v) for v in coords])

    def from_rational(self, r):
        n = self.degree
        power = [mpq(r)] + [mpq(0)] * (n - 1)
        return FieldElement(self, self.coords_from_power(power))

    def generator(self):
        """The class of x (the root alpha) as an element."""
        n = self.degree
        if n == 1:
            power = [-self.min_poly[0]]
        else:
            power = [mpq(0), mpq(1)] + [mpq(0)] * (n - 2)
        return FieldElement(self, self.coords_from_power(power))

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.min_poly == other.min_poly
            and self.basis_matrix == other.basis_matrix
        )

    def __hash__(self):
        return hash(tuple(self.min_poly))

    def __repr__(self):
        return f"NumberField(degree={self.degree}, name={self.name!r})"


def _is_irreducible(int_coeffs):
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(int_coeffs)), x)
    return poly.is_irreducible


def _mat_inverse(rows):
    n = len(rows)
    aug = [
        [mpq(v) for v in rows[i]] + [mpq(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ValueError("integral basis matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [r[n:] for r in aug]


class FieldElement:
    """An element of a NumberField, as exact coordinates over its basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(coords)
        if len(self.coords) != field.degree:
            raise ValueError("coordinate vector has wrong length")

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError("expected a FieldElement")
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError("elements belong to different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            self._check(other)
            K = self.field
            pa = K.coords_to_power(self.coords)
            pb = K.coords_to_power(other.coords)
            return FieldElement(K, K.coords_from_power(K._poly_mul_mod(pa, pb)))
        return FieldElement(self.field, [a * mpq(other) for a in self.coords])

    __rmul__ = __mul__

    def scale(self, r):
        return FieldElement(self.field, [a * mpq(r) for a in self.coords])

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_integral_at(self, p):
        """Every coordinate denominator coprime to p (valid for the stored
        basis order at primes where Dedekind's criterion holds)."""
        return all(int(c.denominator) % p != 0 for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def __repr__(self):
        return "FieldElement(" + ", ".join(str(c) for c in self.coords) + ")"


def _norm(field, power_coords):
    """Field norm of an element given in power coordinates (determinant of
    the multiplication-by-x matrix)."""
    n = field.degree
    rows = []
    for i in range(n):
        e = [mpq(0)] * n
        e[i] = mpq(1)
        rows.append(field._poly_mul_mod(e, list(power_coords)))
    det = mpq(1)
    m = [list(r) for r in rows]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    return det


class PrimePlace:
    """A prime P of K over p: ramification index e, residue degree f, a
    generator g with P = (p, g), and the anti-uniformizer tau."""

    def __init__(self, field, p, e, f, generator, tau, verify=True):
        self.field = field
        self.p = int(p)
        self.e = int(e)
        self.f = int(f)
        self.generator = generator
        self.tau = tau
        self._mul_matrices = {}
        if verify:
            self.verify()

    def sort_key(self):
        return (self.e, self.f, self.generator.coords)

    def _tau_power_matrix(self, a):
        """Matrix of multiplication by tau^a on basis coordinates (row-vector
        convention: coords(x * tau^a) = coords(x) @ M)."""
        m = self._mul_matrices.get(a)
        if m is not None:
            return m
        K = self.field
        n = K.degree
        tau_pow = K.one
        for _ in range(a):
            tau_pow = tau_pow * self.tau
        rows = []
        for i in range(n):
            e = [mpq(0)] * n
            e[i] = mpq(1)
            elt = FieldElement(K, e) * tau_pow
            rows.append(list(elt.coords))
        self._mul_matrices[a] = rows
        return rows

    def apply_tau_power(self, coords, a):
        m = self._tau_power_matrix(a)
        n = self.field.degree
        out = [mpq(0)] * n
        for i, c in enumerate(coords):
            if c:
                row = m[i]
                for j in range(n):
                    out[j] += c * row[j]
        return out

    def verify(self):
        """Check the defining invariants; raise PlaceConstructionError if any
        fails.  Uses only integrality tests and the valuation loop itself."""
        K = self.field
        p = self.p
        p_tau = self.tau.scale(p)
        if not p_tau.is_integral_at(p):
            raise PlaceConstructionError("p*tau is not integral at p")
        if self.tau.is_integral_at(p):
            raise PlaceConstructionError("tau is integral at p (v != -1)")
        if valuation(K.from_rational(p), self) != self.e:
            raise PlaceConstructionError("v(p) != e at this place")
        v_ptau = valuation(p_tau, self)
        if v_ptau != self.e - 1:
            raise PlaceConstructionError("v(p*tau) != e-1 (tau is not an anti-uniformizer)")
        if not self.generator.is_zero():
            if valuation(self.generator, self) < 1:
                raise PlaceConstructionError("generator does not lie in the place")

    def __repr__(self):
        return f"PrimePlace(p={self.p}, e={self.e}, f={self.f})"


# ---------------------------------------------------------------------------
# factorization of p


def _poly_mod_p(int_coeffs, p):
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed([c % p for c in int_coeffs])), x, modulus=p)


def _lift_coeffs(poly, p):
    """Ascending integer coefficients of a GF(p) sympy poly, lifted to [0,p)."""
    return [int(c) % p for c in reversed(poly.all_coeffs())]


def _dedekind_passes(int_coeffs, p):
    """Dedekind's criterion for p not dividing [O_K : Z[alpha]]."""
    import sympy

    x = sympy.Symbol("x")
    fbar = _poly_mod_p(int_coeffs, p)
    factors = fbar.factor_list()[1]
    gstar = sympy.Poly(1, x, modulus=p)
    hstar = sympy.Poly(1, x, modulus=p)
    for fac, mult in factors:
        gstar = gstar * fac
        if mult > 1:
            hstar = hstar * fac ** (mult - 1)
    g_lift = _lift_coeffs(gstar, p)
    h_lift = _lift_coeffs(hstar, p)
    gh = _int_poly_mul(g_lift, h_lift)
    n = len(int_coeffs) - 1
    diff = [0] * (n + 1)
    for i, c in enumerate(int_coeffs):
        diff[i] -= int(c)
    for i, c in enumerate(gh):
        diff[i] += c
    if any(c % p for c in diff):
        raise AssertionError("g*h* != f mod p (factorization bug)")
    F = [c // p for c in diff]
    Fbar = sympy.Poly(list(reversed([c % p for c in F])), x, modulus=p)
    g = sympy.gcd(Fbar, gstar)
    g = sympy.gcd(g, hstar)
    return sympy.Poly(g, x).degree() == 0


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def factor_prime(field, p):
    """All places of `field` over the prime p, sorted by (e, f, generator).

    Uses the factorization of the minimal polynomial mod p when Dedekind's
    criterion certifies it; otherwise falls back to explicit place records
    from the field description, or raises IndexDivisibleError.
    """
    if p in field._factor_cache:
        return field._factor_cache[p]
    places = field.explicit_places.get(p)
    if places is not None:
        result = []
        for rec in places:
            place = PrimePlace(
                field,
                p,
                rec["e"],
                rec["f"],
                field.element(rec["generator"]),
                field.element(rec["tau"]),
            )
            result.append(place)
        result.sort(key=lambda pl: pl.sort_key())
        _check_place_sum(field, result)
        field._factor_cache[p] = result
        return result
    int_coeffs = [int(c) for c in field.min_poly]
    if not _dedekind_passes(int_coeffs, p):
        raise IndexDivisibleError(p)
    import sympy

    fbar = _poly_mod_p(int_coeffs, p)
    factors = [
        (_lift_coeffs(fac, p), mult) for fac, mult in fbar.factor_list()[1]
    ]
    factors.sort(key=lambda fm: (len(fm[0]), fm[0]))
    result = []
    for idx, (g_lift, e_i) in enumerate(factors):
        f_i = len(g_lift) - 1
        place = _build_place(field, p, factors, idx)
        if place.f != f_i or place.e != e_i:
            raise PlaceConstructionError("constructed place has wrong invariants")
        result.append(place)
    result.sort(key=lambda pl: pl.sort_key())
    _check_place_sum(field, result)
    field._factor_cache[p] = result
    return result


def _check_place_sum(field, places):
    total = sum(pl.e * pl.f for pl in places)
    if total != field.degree:
        raise PlaceConstructionError(
            f"sum of e*f over places is {total}, degree is {field.degree}"
        )


def _eval_poly_at_alpha(field, int_coeffs):
    """g(alpha) as a power-coordinate vector."""
    n = field.degree
    acc = [mpq(0)] * n
    for c in reversed(int_coeffs):
        # acc = acc * x + c
        shifted = [mpq(0)] + acc[: n - 1]
        top = acc[n - 1]
        if top:
            for i in range(n):
                shifted[i] -= top * field.min_poly[i]
        shifted[0] += c
        acc = shifted
    return acc


def _build_place(field, p, factors, idx):
    """Construct generator, uniformizer and tau for the idx-th factor."""
    g_lift, e_i = factors[idx]
    f_i = len(g_lift) - 1
    n = field.degree
    g_alpha = _eval_poly_at_alpha(field, g_lift)
    # uniformizer: v_P = 1 exactly, certified via v_p(Norm) = f_i (all other
    # places see a unit because the residue polynomials are distinct)
    pi_power = None
    for k in (0, 1, 2):
        cand = list(g_alpha)
        cand[0] += k * p
        nrm = _norm(field, cand)
        if nrm != 0 and _vp_mpq(mpq(nrm), p) == f_i:
            pi_power = cand
            break
    if pi_power is None:
        raise PlaceConstructionError(
            f"no verified uniformizer for the factor of degree {f_i} at {p}"
        )
    # tau = pi^(e-1) * prod_{other factors} g_j(alpha)^(e_j) / p
    tau_power = [mpq(1)] + [mpq(0)] * (n - 1)
    for _ in range(e_i - 1):
        tau_power = field._poly_mul_mod(tau_power, pi_power)
    for jdx, (h_lift, e_j) in enumerate(factors):
        if jdx == idx:
            continue
        h_alpha = _eval_poly_at_alpha(field, h_lift)
        for _ in range(e_j):
            tau_power = field._poly_mul_mod(tau_power, h_alpha)
    tau_power = [v / p for v in tau_power]
    generator = FieldElement(field, field.coords_from_power(g_alpha))
    tau = FieldElement(field, field.coords_from_power(tau_power))
    return PrimePlace(field, p, e_i, f_i, generator, tau)


# ---------------------------------------------------------------------------
# valuations


def valuation(x, place):
    """v_P(x) as an integer, or INFINITY for x = 0."""
    if not isinstance(x, FieldElement):
        raise TypeError("expected a FieldElement")
    if x.field != place.field:
        raise FieldMismatchError("element and place live in different fields")
    if x.is_zero():
        return INFINITY
    p = place.p
    # rational content: x = p^a * y with y p-primitive
    a = min(_vp_mpq(c, p) for c in x.coords if c != 0)
    if a:
        scale = mpq(p) ** (-a)
        coords = [c * scale for c in x.coords]
    else:
        coords = list(x.coords)
    # y is p-integral; count how many tau factors keep it p-integral
    k = 0
    cur = coords
    cap = 64 * place.e * (1 + abs(a)) + 64
    hard_cap = None
    while True:
        nxt = place.apply_tau_power(cur, 1)
        if not all(int(c.denominator) % p != 0 for c in nxt):
            break
        cur = nxt
        k += 1
        if k > cap:
            if hard_cap is None:
                # exact ceiling: v_P(y) <= e * v_p(Norm(y)); computing the
                # norm is worth it only for unusually high valuations
                nrm = _norm(x.field, x.field.coords_to_power(coords))
                hard_cap = place.e * max(0, _vp_mpq(mpq(nrm), p))
                cap = hard_cap
            if k > cap:
                raise PlaceConstructionError(
                    "valuation loop exceeded the norm bound (bad tau?)"
                )
    return a * place.e + k


def congruent(x, y, place, a):
    """True iff valuation(x - y, P) >= a."""
    if a < 1:
        raise ValueError("congruence exponent must be positive")
    d = x - y
    if d.is_zero():
        return True
    p = place.p
    if d.is_integral_at(p):
        shifted = place.apply_tau_power(list(d.coords), a)
        return all(int(c.denominator) % p != 0 for c in shifted)
    return valuation(d, place) >= a
