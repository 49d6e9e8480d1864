"""Computable CQ*-algebra structure of L^p spaces.

Weight-function forms, the alpha/beta/gamma norms, GNS data, the
Gel'fand-type embedding, and partial multiplication decided with exact
exponent-interval arithmetic.
"""

from cqlp.exponents import (
    INF,
    Exponent,
    ExponentInterval,
    conjugate,
    gamma_exponent,
    holder_combine,
    reciprocal_sum_contains,
)
from cqlp.spaces import (
    DiscreteFunction,
    DiscreteSpace,
    Support,
    SymbolicDomain,
    SymbolicFunction,
    Term,
    exponent_set,
    norm,
)

__all__ = [
    "INF",
    "DiscreteFunction",
    "DiscreteSpace",
    "Exponent",
    "ExponentInterval",
    "Support",
    "SymbolicDomain",
    "SymbolicFunction",
    "Term",
    "conjugate",
    "exponent_set",
    "gamma_exponent",
    "holder_combine",
    "norm",
    "reciprocal_sum_contains",
]

__version__ = "0.1.0"
