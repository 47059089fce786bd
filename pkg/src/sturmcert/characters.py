"""Dirichlet characters with root-of-unity values in a number field: CRT
decomposition, p-parts, and the reduced order modulo a prime-ideal power
(the delta / d data of the character route).

A character is stored by its values on a canonical generator set of
(Z/M)^*; claimed orders are never trusted, they are recomputed exactly in K.
"""

from math import gcd

from .numberfield import congruent

__all__ = [
    "DirichletCharacter",
    "UndefinedCharacterValue",
    "ReducedOrderRefuted",
    "unit_group_generators",
    "quotient_char",
    "p_part",
    "reduced_order",
]


class UndefinedCharacterValue(ValueError):
    """chi(n) requested with gcd(n, modulus) > 1."""


class ReducedOrderRefuted:
    """The reduced order p^delta * d has d not dividing p - 1, so the
    character-route necessary condition is unsatisfiable."""

    def __init__(self, delta, d, p):
        self.delta = delta
        self.d = d
        self.p = p

    def __repr__(self):
        return f"ReducedOrderRefuted(delta={self.delta}, d={self.d}, p={self.p})"


def _prime_power_factors(M):
    out = []
    d = 2
    while d * d <= M:
        if M % d == 0:
            q = 1
            while M % d == 0:
                M //= d
                q *= d
            out.append((d, q))
        d += 1
    if M > 1:
        out.append((M, M))
    return out


def _primitive_root(q, qa):
    """A primitive root modulo the odd prime power qa = q^a."""
    phi = qa // q * (q - 1)
    factors = set()
    t = phi
    dd = 2
    while dd * dd <= t:
        if t % dd == 0:
            factors.add(dd)
            while t % dd == 0:
                t //= dd
        dd += 1
    if t > 1:
        factors.add(t)
    for g in range(2, qa):
        if gcd(g, qa) != 1:
            continue
        if all(pow(g, phi // f, qa) != 1 for f in factors):
            return g
    raise AssertionError("no primitive root found")


def _crt_pair(r1, m1, r2, m2):
    """x with x = r1 mod m1, x = r2 mod m2 (coprime moduli)."""
    g, s = _egcd(m1, m2)
    assert g == 1
    return (r1 + m1 * ((r2 - r1) * s % m2)) % (m1 * m2)


def _egcd(a, b):
    x0, x1 = 1, 0
    aa, bb = a, b
    while bb:
        q = aa // bb
        aa, bb = bb, aa - q * bb
        x0, x1 = x1, x0 - q * x1
    return aa, x0 % b if b else 1


def unit_group_generators(M):
    """Canonical generators of (Z/M)^* with their orders, via CRT over the
    prime-power parts (the 2-power part uses -1 and 5)."""
    if M == 1:
        return []
    comps = _prime_power_factors(M)
    gens = []
    for q, qa in comps:
        rest = M // qa
        local = []
        if q == 2:
            if qa == 2:
                continue
            if qa == 4:
                local = [(3, 2)]
            else:
                local = [(qa - 1, 2), (5, qa // 4)]
        else:
            phi = qa // q * (q - 1)
            local = [(_primitive_root(q, qa), phi)]
        for g, order in local:
            if rest == 1:
                gens.append((g % M, order))
            else:
                gens.append((_crt_pair(g, qa, 1, rest), order))
    return gens


class DirichletCharacter:
    """Finite-order character on (Z/M)^* with values in a number field K."""

    def __init__(self, field, modulus, generator_values):
        """generator_values: list of FieldElements aligned with
        unit_group_generators(modulus)."""
        self.field = field
        self.modulus = modulus
        self.generators = unit_group_generators(modulus)
        if len(generator_values) != len(self.generators):
            raise ValueError(
                f"need {len(self.generators)} generator values for modulus "
                f"{modulus}, got {len(generator_values)}"
            )
        self.values = list(generator_values)
        self.value_orders = []
        for (g, g_order), v in zip(self.generators, self.values):
            t = _multiplicative_order(v, g_order, field)
            if t is None:
                raise ValueError(
                    f"value at generator {g} is not a root of unity of order "
                    f"dividing {g_order}"
                )
            self.value_orders.append(t)
        self.order = 1
        for t in self.value_orders:
            self.order = self.order * t // gcd(self.order, t)

    @classmethod
    def trivial(cls, field):
        return cls(field, 1, [])

    def is_trivial(self):
        return self.order == 1

    def evaluate(self, n):
        """Multiplicative extension of the generator values; undefined when
        gcd(n, M) > 1."""
        n = n % self.modulus if self.modulus > 1 else 0
        if self.modulus == 1:
            return self.field.one
        if gcd(n, self.modulus) != 1:
            raise UndefinedCharacterValue(
                f"chi({n}) undefined: shares a factor with {self.modulus}"
            )
        out = self.field.one
        for (g, g_order), v, t in zip(
            self.generators, self.values, self.value_orders
        ):
            k = _component_dlog(n, g, g_order, self.modulus)
            if k % t:
                out = out * _power(v, k % t, self.field)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.field == other.field
            and self.values == other.values
        )

    def __repr__(self):
        return f"DirichletCharacter(modulus={self.modulus}, order={self.order})"


def _power(v, k, field):
    out = field.one
    base = v
    while k:
        if k & 1:
            out = out * base
        k >>= 1
        if k:
            base = base * base
    return out


def _multiplicative_order(v, bound, field):
    """Smallest t >= 1 with v^t = 1, knowing t divides `bound`; None if v is
    not a root of unity of order dividing bound."""
    if _power(v, bound, field) != field.one:
        return None
    divisors = sorted(
        d for d in range(1, bound + 1) if bound % d == 0
    )
    for d in divisors:
        if _power(v, d, field) == field.one:
            return d
    return None


def _component_dlog(n, g, g_order, M):
    """Exponent of n along the cyclic component generated by g: brute-force
    discrete log on the projection (component moduli are small here)."""
    # project to the prime-power component where g is nontrivial
    cur = 1
    for k in range(g_order):
        # compare n and g^k on the component: equivalent to g^k * n^{-1}
        # lying in the complement subgroup; test directly by scanning the
        # other components' contribution
        if _same_component_class(n, cur, g, g_order, M):
            return k
        cur = (cur * g) % M
    raise AssertionError("discrete log failed (inconsistent generators)")


def _same_component_class(n, gk, g, g_order, M):
    """Whether n and g^k agree on g's prime-power component of (Z/M)^*."""
    # find g's component: the prime power q^a with g != 1 mod q^a
    for q, qa in _prime_power_factors(M):
        if g % qa != 1 % qa:
            if q == 2 and qa >= 8:
                # two-generator component: compare in the subgroup generated
                # by g only modulo the other generator's span
                pass
            return _in_span(n, gk, g, g_order, qa)
    raise AssertionError("generator trivial on all components")


def _in_span(n, gk, g, g_order, qa):
    """n = gk on the q^a component, up to the other generators of that
    component (handles the two-generator 2-power case)."""
    n_c = n % qa
    gk_c = gk % qa
    if qa % 2 == 1 or qa == 4:
        return n_c == gk_c
    # 2^a, a >= 3: component = <-1> x <5>; g is one of -1, 5
    if g % qa == qa - 1:
        # compare the <-1>-coordinate: n ~ +-5^j; the sign is determined by
        # n mod 4 (5^j = 1 mod 4)
        return n_c % 4 == gk_c % 4
    # g = 5: compare the <5>-coordinate: normalize the sign away
    if n_c % 4 == 3:
        n_c = (-n_c) % qa
    if gk_c % 4 == 3:
        gk_c = (-gk_c) % qa
    return n_c == gk_c


def quotient_char(psi2, psi1):
    """psi2 * psi1^{-1}, lifted to the lcm of the moduli."""
    if psi1.field != psi2.field:
        raise ValueError("characters live over different fields")
    field = psi1.field
    M = psi1.modulus * psi2.modulus // gcd(psi1.modulus, psi2.modulus)
    gens = unit_group_generators(M)
    values = []
    for g, g_order in gens:
        v2 = psi2.evaluate(g % psi2.modulus if psi2.modulus > 1 else 0)
        v1 = psi1.evaluate(g % psi1.modulus if psi1.modulus > 1 else 0)
        t1 = _multiplicative_order(v1, g_order, field)
        inv1 = _power(v1, t1 - 1, field) if t1 and t1 > 1 else field.one
        values.append(v2 * inv1)
    return DirichletCharacter(field, M, values)


def p_part(chi, p):
    """The component of chi modulo the p-power part of its modulus (trivial
    character when p does not divide the modulus)."""
    M = chi.modulus
    pa = 1
    while M % p == 0:
        M //= p
        pa *= p
    if pa == 1:
        return DirichletCharacter.trivial(chi.field)
    M0 = chi.modulus // pa
    gens = unit_group_generators(pa)
    values = []
    for g, _order in gens:
        if M0 == 1:
            lifted = g
        else:
            lifted = _crt_pair(g, pa, 1, M0)
        values.append(chi.evaluate(lifted))
    return DirichletCharacter(chi.field, pa, values)


def reduced_order(chi, place, m):
    """Order of (chi mod P^m), returned as (delta, d) with the order equal to
    p^delta * d and p not dividing d; ReducedOrderRefuted when d does not
    divide p - 1."""
    field = chi.field
    p = place.p
    for v in chi.values:
        if not v.is_integral_at(p):
            raise ValueError("character values must be integral at the place")
    total = 1
    for v, t in zip(chi.values, chi.value_orders):
        divisors = sorted(d for d in range(1, t + 1) if t % d == 0)
        red = None
        for d in divisors:
            if congruent(_power(v, d, field), field.one, place, m):
                red = d
                break
        if red is None:
            raise AssertionError("no reduced order found (v^t = 1 must reduce)")
        total = total * red // gcd(total, red)
    delta = 0
    d = total
    while d % p == 0:
        d //= p
        delta += 1
    if (p - 1) % d != 0:
        return ReducedOrderRefuted(delta, d, p)
    return delta, d
