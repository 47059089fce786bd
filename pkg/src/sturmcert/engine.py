"""Decision procedures for eigenform congruences modulo prime-ideal powers.

Three routes are implemented and cross-validate each other:

* the equal-weight route: strip to the auxiliary level and compare up to the
  Sturm bound (sound for any pair of forms of one weight);
* the weight-congruence route: a necessary congruence between the weights
  (refutation when its hypotheses are asserted), plus the sufficiency
  direction checking eigenvalue congruences at primes up to the bound;
* the character route: the same sufficiency scan gated by the reduced order
  p^delta * d of the nebentypus quotient at inertia, certifying the full
  exponent whenever delta = 0;

plus an independent constructive confirmation that multiplies the lower
weight form by a power of the Eisenstein unit and reruns the equal-weight
check at the higher weight.

Hypotheses the tool cannot verify (forms living on Gamma_1(N) n Gamma_0(p),
absolute irreducibility of the residual representation) are user-asserted
flags echoed into every certificate.
"""

import random
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import bounds
from .bounds import (
    ExponentData,
    Inconclusive,
    LevelData,
    NecessityRefuted,
    level_data,
    s_value,
    sturm_prime_bound,
    weight_modulus_thm1,
    weight_modulus_thm2,
)
from .characters import (
    DirichletCharacter,
    ReducedOrderRefuted,
    p_part,
    quotient_char,
    reduced_order,
)
from .numberfield import FieldElement, valuation, congruent
from .qseries import QExpansion, ord_mod, series_mul, series_sub, strip, unit_power

__all__ = [
    "ProblemStatement",
    "CongruenceCertificate",
    "InsufficientPrecisionError",
    "CertifiedFull",
    "CertifiedPartial",
    "RefutedAtPrime",
    "RefutedByWeightCongruence",
    "RefutedByCharacterOrder",
    "InconclusiveVerdict",
    "check_equal_weight",
    "check_outside_Np",
    "decide_theorem1",
    "decide_theorem2",
    "verify_by_twist",
    "decide",
]

_SOUNDNESS_SEED = 0x5737  # fixed: certificates must be deterministic
_SOUNDNESS_SAMPLES = 25


class InsufficientPrecisionError(ValueError):
    def __init__(self, needed, have):
        super().__init__(f"need precision >= {needed}, have {have}")
        self.needed = needed
        self.have = have


# -- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedFull:
    exponent: int
    kind: str = "CertifiedFull"


@dataclass(frozen=True)
class CertifiedPartial:
    exponent: int
    kind: str = "CertifiedPartial"


@dataclass(frozen=True)
class RefutedAtPrime:
    index: int
    achieved: int
    index_is_prime: bool = True
    kind: str = "RefutedAtPrime"


@dataclass(frozen=True)
class RefutedByWeightCongruence:
    required_modulus: int
    k1: int
    k2: int
    kind: str = "RefutedByWeightCongruence"


@dataclass(frozen=True)
class RefutedByCharacterOrder:
    delta: int
    d: int
    reason: str
    kind: str = "RefutedByCharacterOrder"


@dataclass(frozen=True)
class InconclusiveVerdict:
    reason: str
    kind: str = "Inconclusive"


# -- problem / certificate ----------------------------------------------------


@dataclass
class ProblemStatement:
    f1: QExpansion
    f2: QExpansion
    field: object  # NumberField of the common coefficient field
    p: int
    place_index: int
    m: int
    forms_on_gamma0_p: bool = False
    rho_f1_absolutely_irreducible: bool = False
    galois_closure_degree: Optional[int] = None
    assumed_r: Optional[int] = None
    psi1: Optional[DirichletCharacter] = None
    psi2: Optional[DirichletCharacter] = None
    index_kind: str = "auto"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.f1.weight < 1 or self.f2.weight < 1:
            raise ValueError("weights must be positive")
        for f, tag in ((self.f1, "f1"), (self.f2, "f2")):
            if not f.is_normalized_cusp_form():
                raise ValueError(f"{tag} is not normalized (a_0 = 0, a_1 = 1)")
        if self.f1.level != self.f2.level:
            raise ValueError("the two forms must share a level")

    @property
    def N(self):
        return self.f1.level

    def characters(self):
        triv = DirichletCharacter.trivial(self.field)
        return self.psi1 or triv, self.psi2 or triv

    def assumptions(self):
        return {
            "forms_on_gamma0_p": self.forms_on_gamma0_p,
            "rho_f1_absolutely_irreducible": self.rho_f1_absolutely_irreducible,
            "galois_closure_degree": self.galois_closure_degree,
            "assumed_r": self.assumed_r,
            "inputs_are_eigenforms_outside_Np": True,
        }


@dataclass
class CongruenceCertificate:
    verdict: object
    route: str
    level: LevelData
    place: dict
    m: int
    exponents: Optional[dict]
    character_data: Optional[dict]
    per_prime: list
    assumptions: dict
    quantities: dict = dc_field(default_factory=dict)
    soundness_sample: Optional[dict] = None


# -- shared helpers -----------------------------------------------------------


def _coefficient_in(field, series, n):
    c = series.coefficients[n]
    if series.field == field:
        return c
    if series.field.degree == 1:
        r = series.field.coords_to_power(c.coords)[0]
        return FieldElement(field, [r * v for v in field.one.coords])
    raise ValueError("series does not embed into the target field")


def _primes_upto(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def _require_precision(problem_or_forms, needed):
    forms = problem_or_forms
    have = min(f.precision for f in forms)
    if have < needed:
        raise InsufficientPrecisionError(needed, have)
    return have


def _sturm_scan(g, h, place, a, bound_rational):
    """ord_mod on the difference, compared against the Sturm bound."""
    diff = series_sub(g, h)
    result = ord_mod(diff, place, a)
    if result.value > bound_rational:
        return CertifiedFull(a), result
    # locate the achieved exponent at the witnessing index
    field = place.field
    n = result.value
    d = _coefficient_in(field, g, n) - _coefficient_in(field, h, n)
    v = valuation(d, place)
    achieved = a if v >= a else int(v)
    witness_prime = _is_prime_int(n)
    return RefutedAtPrime(n, achieved, index_is_prime=witness_prime), result


def _is_prime_int(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def check_equal_weight(f1, f2, place, a, index_kind="gamma0"):
    """Generalized Sturm test at the forms' own level: congruence of all
    coefficients mod P^a follows once the difference vanishes past k*mu/12."""
    if f1.weight != f2.weight:
        raise ValueError("equal-weight check requires equal weights")
    if f1.level != f2.level:
        raise ValueError("equal-weight check requires a common level")
    mu = (
        bounds.index_gamma0(f1.level)
        if index_kind == "gamma0"
        else bounds.index_gamma1(f1.level)
    )
    bound = sturm_prime_bound(f1.weight, mu)
    _require_precision((f1, f2), int(bound))
    verdict, _ = _sturm_scan(f1, f2, place, a, bound)
    return verdict


def check_outside_Np(f1, f2, place, a, p, index_kind="auto",
                     trivial_nebentypus=True):
    """Strip both forms to the auxiliary level and run the Sturm test there;
    the verdict speaks about indices coprime to Np only."""
    if f1.weight != f2.weight:
        raise ValueError("outside-Np check requires equal weights")
    N = f1.level
    ld = level_data(N, p, index_kind, trivial_nebentypus)
    bound = sturm_prime_bound(f1.weight, ld.mu_used)
    _require_precision((f1, f2), int(bound))
    np_product = N * p
    g = strip(f1, np_product, new_level=ld.N_prime)
    h = strip(f2, np_product, new_level=ld.N_prime)
    verdict, _ = _sturm_scan(g, h, place, a, bound)
    return verdict, ld


# -- per-prime eigenvalue scan ------------------------------------------------


def _prime_scan(problem, place, exponent, bound, record):
    """Check a_ell(f1) = a_ell(f2) mod P^exponent for primes ell <= bound
    with ell not dividing Np.  Fills `record` with (ell, min(v, exponent));
    returns the first failing (ell, achieved) or None."""
    field = place.field
    np_product = problem.N * problem.p
    for ell in _primes_upto(int(bound)):
        if np_product % ell == 0:
            continue
        c1 = _coefficient_in(field, problem.f1, ell)
        c2 = _coefficient_in(field, problem.f2, ell)
        if congruent(c1, c2, place, exponent):
            record.append((ell, exponent))
            continue
        v = valuation(c1 - c2, place)
        achieved = int(v) if v < exponent else exponent
        record.append((ell, achieved))
        return ell, achieved
    return None


def _soundness_sample(problem, place, exponent, bound):
    """Spot-check the certificate: random primes beyond the Sturm bound but
    within precision must show no counterexample."""
    have = min(problem.f1.precision, problem.f2.precision)
    lo = int(bound) + 1
    candidates = [
        ell
        for ell in _primes_upto(have)
        if ell >= lo and (problem.N * problem.p) % ell != 0
    ]
    rng = random.Random(_SOUNDNESS_SEED)
    if len(candidates) > _SOUNDNESS_SAMPLES:
        candidates = sorted(rng.sample(candidates, _SOUNDNESS_SAMPLES))
    field = place.field
    checked = []
    for ell in candidates:
        c1 = _coefficient_in(field, problem.f1, ell)
        c2 = _coefficient_in(field, problem.f2, ell)
        if not congruent(c1, c2, place, exponent):
            raise AssertionError(
                f"soundness sample found a counterexample at {ell}: "
                f"certificate is wrong"
            )
        checked.append(ell)
    return {"exponent": exponent, "primes": checked, "violations": 0}


# -- the decision procedures --------------------------------------------------


def _resolve_place(problem):
    from .numberfield import factor_prime

    places = factor_prime(problem.field, problem.p)
    if not 0 <= problem.place_index < len(places):
        raise ValueError(
            f"place index {problem.place_index} out of range: "
            f"{len(places)} places over {problem.p}"
        )
    return places[problem.place_index]


def _place_dict(place):
    return {
        "p": place.p,
        "e": place.e,
        "f": place.f,
        "generator": [str(c) for c in place.generator.coords],
        "tau": [str(c) for c in place.tau.coords],
    }


def _resolve_r(problem):
    if problem.assumed_r is not None:
        return problem.assumed_r, f"user-asserted r = {problem.assumed_r}"
    r = bounds.r_value(
        problem.field.degree, problem.p, problem.galois_closure_degree
    )
    if isinstance(r, Inconclusive):
        return r, r.reason
    if problem.galois_closure_degree is not None:
        prov = (
            f"v_p(galois closure degree {problem.galois_closure_degree}) = 0"
        )
    else:
        prov = f"p = {problem.p} > {problem.field.degree} so p does not divide the closure degree"
    return r, prov


def decide_theorem1(problem):
    """Weight-congruence route: necessity refutation (under its hypotheses)
    plus the Sturm-bounded sufficiency scan."""
    place = _resolve_place(problem)
    psi1, psi2 = problem.characters()
    trivial_neb = psi1.is_trivial() and psi2.is_trivial()
    ld = level_data(problem.N, problem.p, problem.index_kind, trivial_neb)
    k1, k2 = problem.f1.weight, problem.f2.weight
    k = max(k1, k2)
    bound = sturm_prime_bound(k, ld.mu_used)
    cert = CongruenceCertificate(
        verdict=None,
        route="equal_weight" if k1 == k2 else "theorem1",
        level=ld,
        place=_place_dict(place),
        m=problem.m,
        exponents=None,
        character_data=None,
        per_prime=[],
        assumptions=problem.assumptions(),
        quantities={"sturm_bound": str(bound), "k1": k1, "k2": k2},
    )
    if k1 == k2:
        verdict, _ld = check_outside_Np(
            problem.f1,
            problem.f2,
            place,
            problem.m,
            problem.p,
            problem.index_kind,
            trivial_neb,
        )
        cert.verdict = verdict
        if isinstance(verdict, CertifiedFull):
            cert.soundness_sample = _soundness_sample(
                problem, place, problem.m, bound
            )
        return cert
    e = place.e
    r, r_provenance = _resolve_r(problem)
    cert.quantities["r_provenance"] = r_provenance
    if isinstance(r, Inconclusive):
        cert.verdict = InconclusiveVerdict(
            f"r unresolved: {r.reason}; supply --galois-closure-degree or "
            f"--assume-r, or use the character route"
        )
        return cert
    s = s_value(problem.m, e, r, problem.p)
    required = weight_modulus_thm1(s, problem.p)
    cert.exponents = {
        "m": problem.m,
        "e": e,
        "r": r,
        "s": s,
        "p": problem.p,
        "alpha_branch": problem.p == 2,
        "weight_modulus": required,
    }
    ExponentData(problem.m, e, r, problem.p, s, problem.p == 2)
    if (k2 - k1) % required != 0:
        necessity_ok = (
            problem.N >= 3
            and problem.N % problem.p != 0
            and problem.forms_on_gamma0_p
        )
        if necessity_ok:
            cert.verdict = RefutedByWeightCongruence(required, k1, k2)
        else:
            cert.verdict = InconclusiveVerdict(
                f"weights are not congruent mod {required}, and the "
                f"necessity hypotheses (N >= 3, p not dividing N, forms on "
                f"Gamma_1(N) n Gamma_0(p)) are not all asserted"
            )
        return cert
    # sufficiency side conditions
    if problem.p == 2 and problem.N % 3 != 0:
        cert.verdict = InconclusiveVerdict("p = 2 requires 3 | N")
        return cert
    if problem.p == 3 and problem.N % 2 != 0:
        cert.verdict = InconclusiveVerdict("p = 3 requires 2 | N")
        return cert
    _require_precision((problem.f1, problem.f2), int(bound))
    failing = _prime_scan(problem, place, problem.m, bound, cert.per_prime)
    if failing is not None:
        cert.verdict = RefutedAtPrime(failing[0], failing[1])
        return cert
    certified = min(e * (s + 1), problem.m)
    if certified >= problem.m:
        cert.verdict = CertifiedFull(problem.m)
        cert.soundness_sample = _soundness_sample(
            problem, place, problem.m, bound
        )
    else:
        cert.verdict = CertifiedPartial(certified)
        alt = _try_character_upgrade(problem, place, ld, bound, cert)
        if alt is not None:
            return alt
    return cert


def _try_character_upgrade(problem, place, ld, bound, partial_cert):
    """When the weight route certifies less than m, the character route can
    be stronger; keep whichever certifies more."""
    if problem.p == 2 or not problem.rho_f1_absolutely_irreducible:
        return None
    alt = decide_theorem2(problem)
    if isinstance(alt.verdict, CertifiedFull):
        alt.quantities["upgraded_from"] = "theorem1-partial"
        return alt
    return None


def decide_theorem2(problem):
    """Character route: reduced order (delta, d) of the nebentypus quotient
    at inertia gates the weight congruence; delta = 0 certifies the full
    exponent via the Sturm scan."""
    place = _resolve_place(problem)
    psi1, psi2 = problem.characters()
    trivial_neb = psi1.is_trivial() and psi2.is_trivial()
    ld = level_data(problem.N, problem.p, problem.index_kind, trivial_neb)
    k1, k2 = problem.f1.weight, problem.f2.weight
    k = max(k1, k2)
    bound = sturm_prime_bound(k, ld.mu_used)
    e = place.e
    cert = CongruenceCertificate(
        verdict=None,
        route="theorem2",
        level=ld,
        place=_place_dict(place),
        m=problem.m,
        exponents={"m": problem.m, "e": e, "p": problem.p},
        character_data=None,
        per_prime=[],
        assumptions=problem.assumptions(),
        quantities={"sturm_bound": str(bound), "k1": k1, "k2": k2},
    )
    if problem.p == 2:
        cert.verdict = InconclusiveVerdict("the character route needs odd p")
        return cert
    if not problem.rho_f1_absolutely_irreducible:
        cert.verdict = InconclusiveVerdict(
            "absolute irreducibility of the residual representation was not "
            "asserted; the character route is conditional on it"
        )
        return cert
    quotient = quotient_char(psi2, psi1)
    restricted = p_part(quotient, problem.p)
    ro = reduced_order(restricted, place, problem.m)
    if isinstance(ro, ReducedOrderRefuted):
        cert.character_data = {"delta": ro.delta, "d": ro.d}
        cert.verdict = RefutedByCharacterOrder(
            ro.delta,
            ro.d,
            f"reduced order p^{ro.delta} * {ro.d} has d not dividing p - 1",
        )
        return cert
    delta, d = ro
    cert.character_data = {"delta": delta, "d": d}
    cert.quantities["cyclotomic_order"] = bounds.cyclotomic_order(
        problem.m, e, problem.p
    )
    try:
        required = weight_modulus_thm2(problem.m, e, delta, d, problem.p)
    except NecessityRefuted as exc:
        cert.verdict = RefutedByCharacterOrder(delta, d, str(exc))
        return cert
    cert.quantities["weight_modulus"] = required
    if (k2 - k1) % required != 0:
        cert.verdict = RefutedByWeightCongruence(required, k1, k2)
        return cert
    if delta > 0:
        cert.verdict = InconclusiveVerdict(
            f"delta = {delta} > 0: only the necessary condition is available "
            f"on this route; it was not violated"
        )
        return cert
    _require_precision((problem.f1, problem.f2), int(bound))
    failing = _prime_scan(problem, place, problem.m, bound, cert.per_prime)
    if failing is not None:
        cert.verdict = RefutedAtPrime(failing[0], failing[1])
        return cert
    cert.verdict = CertifiedFull(problem.m)
    cert.soundness_sample = _soundness_sample(problem, place, problem.m, bound)
    return cert


def verify_by_twist(problem):
    """Constructive confirmation: multiply the lower-weight form by the
    Eisenstein-unit power matching the weight gap, then run the stripped
    equal-weight check at exponent min(e (s+1), m)."""
    place = _resolve_place(problem)
    psi1, psi2 = problem.characters()
    trivial_neb = psi1.is_trivial() and psi2.is_trivial()
    ld = level_data(problem.N, problem.p, problem.index_kind, trivial_neb)
    f_lo, f_hi = problem.f1, problem.f2
    if f_lo.weight > f_hi.weight:
        f_lo, f_hi = f_hi, f_lo
    k1, k2 = f_lo.weight, f_hi.weight
    bound = sturm_prime_bound(k2, ld.mu_used)
    cert = CongruenceCertificate(
        verdict=None,
        route="twist",
        level=ld,
        place=_place_dict(place),
        m=problem.m,
        exponents=None,
        character_data=None,
        per_prime=[],
        assumptions=problem.assumptions(),
        quantities={"sturm_bound": str(bound), "k1": k1, "k2": k2},
    )
    e = place.e
    if k1 == k2:
        t = 0
        s = 0
        a = problem.m
    else:
        r, r_provenance = _resolve_r(problem)
        cert.quantities["r_provenance"] = r_provenance
        if isinstance(r, Inconclusive):
            cert.verdict = InconclusiveVerdict(f"r unresolved: {r.reason}")
            return cert
        s = s_value(problem.m, e, r, problem.p)
        required = weight_modulus_thm1(s, problem.p)
        if (k2 - k1) % required != 0:
            raise ValueError(
                f"twist verification needs the weight congruence mod "
                f"{required} to hold (weight gap {k2 - k1})"
            )
        t = (k2 - k1) // required
        a = min(e * (s + 1), problem.m)
    cert.exponents = {
        "m": problem.m,
        "e": e,
        "s": s,
        "t": t,
        "p": problem.p,
        "twist_exponent": t * problem.p**s,
        "certified_exponent_cap": a,
    }
    _require_precision((problem.f1, problem.f2), int(bound))
    if t == 0:
        twisted = f_lo
    else:
        prec = min(f_lo.precision, f_hi.precision)
        unit = unit_power(
            problem.p, t * problem.p**s, prec, check_modulus=s
        )
        twisted = series_mul(unit, f_lo)
        if twisted.weight != k2:
            raise AssertionError("twist produced the wrong weight")
    verdict, _ld = check_outside_Np(
        twisted,
        f_hi,
        place,
        a,
        problem.p,
        problem.index_kind,
        trivial_neb,
    )
    cert.verdict = verdict
    if isinstance(verdict, CertifiedFull):
        cert.soundness_sample = _soundness_sample(problem, place, a, bound)
    return cert


def decide(problem):
    """The main entry: equal weights short-circuit to the stripped Sturm
    check; distinct weights run the weight-congruence route (with automatic
    character-route upgrade of partial certificates)."""
    return decide_theorem1(problem)
