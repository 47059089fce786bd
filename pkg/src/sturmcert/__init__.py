"""Certified congruence checking between Hecke eigenform q-expansions
modulo powers of a prime ideal."""

__version__ = "0.1.0"

from .bounds import (  # noqa: F401
    index_gamma0,
    index_gamma1,
    n_prime,
    r_value,
    s_value,
    sturm_prime_bound,
)
from .numberfield import (  # noqa: F401
    INFINITY,
    FieldElement,
    NumberField,
    PrimePlace,
    congruent,
    factor_prime,
    valuation,
)
from .qseries import (  # noqa: F401
    QExpansion,
    bernoulli,
    eisenstein_unit,
    ord_mod,
    series_add,
    series_mul,
    series_sub,
    strip,
    unit_power,
)
