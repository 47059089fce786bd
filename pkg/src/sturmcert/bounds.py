"""Level, index, Sturm-bound and exponent formulas.

Everything here is elementary integer arithmetic; the Sturm bound is kept as
an exact rational so callers can compare prime indices against it without
rounding decisions leaking in.
"""

from dataclasses import dataclass
from fractions import Fraction


__all__ = [
    "LevelData",
    "ExponentData",
    "Inconclusive",
    "NecessityRefuted",
    "n_prime",
    "index_gamma0",
    "index_gamma1",
    "sturm_prime_bound",
    "s_value",
    "ceil_div",
    "weight_modulus_thm1",
    "weight_modulus_thm2",
    "cyclotomic_order",
    "r_value",
    "level_data",
    "prime_factors",
]


class Inconclusive:
    """Returned where a quantity cannot be certified from the given inputs."""

    def __init__(self, reason):
        self.reason = reason

    def __repr__(self):
        return f"Inconclusive({self.reason!r})"

    def __eq__(self, other):
        return isinstance(other, Inconclusive)

    def __hash__(self):
        return hash("inconclusive")


@dataclass(frozen=True)
class LevelData:
    N: int
    p: int
    N_prime: int
    mu1: int
    mu0: int
    sturm_index_used: str  # "gamma0" or "gamma1"

    def __post_init__(self):
        if self.N_prime % self.N:
            raise ValueError("N' must be divisible by N")
        if self.mu0 > self.mu1:
            raise ValueError("Gamma0 index cannot exceed the Gamma1 index")

    @property
    def mu_used(self):
        return self.mu0 if self.sturm_index_used == "gamma0" else self.mu1


@dataclass(frozen=True)
class ExponentData:
    m: int
    e: int
    r: int
    p: int
    s: int
    alpha_branch: bool  # True when the p = 2 branch of s was taken

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be nonnegative")
        if self.s != s_value(self.m, self.e, self.r, self.p):
            raise ValueError("s is inconsistent with its defining formula")


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def n_prime(N, p):
    """The auxiliary level N': N p^2 prod_{q|N} q when p does not divide N,
    N prod_{q|N} q when it does."""
    if N < 1:
        raise ValueError("N must be positive")
    prod = 1
    for q in prime_factors(N):
        prod *= q
    if N % p == 0:
        return N * prod
    return N * p * p * prod


def index_gamma1(M):
    """[SL_2(Z) : Gamma_1(M)] = M^2 prod (1 - 1/q^2) for M >= 3; 1, 3 for
    M = 1, 2."""
    if M < 1:
        raise ValueError("M must be positive")
    if M == 1:
        return 1
    if M == 2:
        return 3
    num = M * M
    for q in prime_factors(M):
        num = num // (q * q) * (q * q - 1)
    return num


def index_gamma0(M):
    """[SL_2(Z) : Gamma_0(M)] = M prod (1 + 1/q)."""
    if M < 1:
        raise ValueError("M must be positive")
    num = M
    for q in prime_factors(M):
        num = num // q * (q + 1)
    return num


def sturm_prime_bound(k, mu):
    """The exact rational bound k*mu/12; primes ell <= the bound (inclusive)
    must be checked."""
    if k < 1 or mu < 1:
        raise ValueError("weight and index must be positive")
    return Fraction(k * mu, 12)


def ceil_div(b, eps):
    """Exact ceiling division (the valuation-contraction exponent)."""
    if b < 1 or eps < 1:
        raise ValueError("arguments must be positive")
    return -(-b // eps)


def _alpha(u):
    return u - 1 if u <= 2 else u - 2


def s_value(m, e, r, p):
    """The weight-congruence exponent s: max{0, ceil(m/e) - 1 - r} for odd p,
    max{0, alpha(ceil(m/e) - r)} for p = 2, with alpha(u) = u-1 for u <= 2
    and u-2 for u >= 3."""
    if m < 1 or e < 1 or r < 0:
        raise ValueError("require m >= 1, e >= 1, r >= 0")
    c = ceil_div(m, e)
    if p >= 3:
        return max(0, c - 1 - r)
    return max(0, _alpha(c - r))


def weight_modulus_thm1(s, p):
    """Required weight-congruence modulus p^s (p-1)."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    return p**s * (p - 1)


class NecessityRefuted(ValueError):
    """The character-order necessary condition is already violated."""


def weight_modulus_thm2(m, e, delta, d, p):
    """Required modulus p^(ceil(m/e) - 1 - delta) (p-1)/d for the character
    route; precondition violations mean the necessary condition has already
    been refuted."""
    c = ceil_div(m, e)
    if delta > c - 1:
        raise NecessityRefuted(
            f"delta = {delta} exceeds ceil(m/e) - 1 = {c - 1}"
        )
    if (p - 1) % d != 0:
        raise NecessityRefuted(f"d = {d} does not divide p - 1 = {p - 1}")
    return p ** (c - 1 - delta) * (p - 1) // d


def cyclotomic_order(m, e, p):
    """Order of the mod-P^m cyclotomic character restricted to inertia at an
    odd p: p^(ceil(m/e) - 1) (p-1)."""
    if p == 2:
        raise ValueError("p must be odd")
    return p ** (ceil_div(m, e) - 1) * (p - 1)


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def r_value(field_degree, p, galois_closure_degree=None):
    """The p-part exponent r of the ramification of the Galois closure.

    r = 0 is certified when p cannot divide the closure's ramification index:
    either v_p(galois_closure_degree) = 0 for a supplied closure degree, or
    v_p(field_degree!) = 0 (that is, p > field_degree).  Anything else is
    Inconclusive: the tool never guesses r.
    """
    if field_degree < 1:
        raise ValueError("degree must be positive")
    if galois_closure_degree is not None:
        if _vp(galois_closure_degree, p) == 0:
            return 0
        return Inconclusive(
            f"p = {p} divides the supplied Galois closure degree "
            f"{galois_closure_degree}; r cannot be certified"
        )
    fact_vp = sum(_vp(i, p) for i in range(2, field_degree + 1))
    if fact_vp == 0:
        return 0
    return Inconclusive(
        f"p = {p} divides {field_degree}! and no Galois closure degree was "
        f"supplied; r cannot be certified"
    )


def level_data(N, p, index_kind="auto", trivial_nebentypus=True):
    """Assemble LevelData for the auxiliary level, choosing the Sturm index:
    Gamma_0 for trivial nebentypus (the stripped forms stay on Gamma_0),
    Gamma_1 otherwise."""
    np_ = n_prime(N, p)
    if index_kind == "auto":
        index_kind = "gamma0" if trivial_nebentypus else "gamma1"
    if index_kind not in ("gamma0", "gamma1"):
        raise ValueError("index kind must be gamma0, gamma1 or auto")
    return LevelData(
        N=N,
        p=p,
        N_prime=np_,
        mu1=index_gamma1(np_),
        mu0=index_gamma0(np_),
        sturm_index_used=index_kind,
    )
