"""Default test corpora: 30 symbolic functions per domain plus seeded discrete samplers."""

from __future__ import annotations

from fractions import Fraction as F

import numpy as np

from cqlp.spaces import DiscreteFunction, DiscreteSpace, Support, SymbolicDomain, SymbolicFunction, Term

NZ, TL = Support.NEAR_ZERO, Support.TAIL

# near-zero exponents spanning bounded, L^3, L^2-only and non-L^2 behaviour
_UNIT_SINGLE = [F(0), F(1), F(1, 2), F(2), F(-1, 10), F(-1, 8), F(-1, 6), F(-1, 5), F(-1, 4), F(-2, 7),
                F(-1, 3), F(-3, 8), F(-2, 5), F(-9, 20), F(-1, 2), F(-3, 5), F(-2, 3), F(-3, 4)]
_UNIT_PAIRS = [(F(0), F(-1, 4)), (F(1), F(-1, 3)), (F(0), F(-1, 8)), (F(1, 2), F(-1, 5)),
               (F(-1, 10), F(-2, 5)), (F(2), F(-1, 6)), (F(0), F(-1, 2)), (F(1), F(-3, 8)),
               (F(-1, 8), F(-1, 4)), (F(0), F(1)), (F(-1, 6), F(-2, 7)), (F(1, 2), F(-2, 3))]


def unit_interval_corpus() -> list[SymbolicFunction]:
    dom = SymbolicDomain.UNIT_INTERVAL
    out = [SymbolicFunction([Term(1, a, NZ)], dom) for a in _UNIT_SINGLE]
    out += [SymbolicFunction([Term(2, a, NZ), Term(F(1, 3), b, NZ)], dom) for a, b in _UNIT_PAIRS]
    return out


# (near exponent or None, tail exponent or None)
_HALF = [(F(0), None), (F(-1, 4), None), (F(-1, 3), None), (F(-1, 8), None), (F(1), None),
         (F(-3, 5), None), (None, F(-1)), (None, F(-2)), (None, F(-3, 4)), (None, F(-1, 3)),
         (None, F(-5, 8)), (None, F(0)), (F(0), F(-1)), (F(-1, 4), F(-1)), (F(-1, 8), F(-3, 4)),
         (F(-1, 3), F(-2)), (F(0), F(-3, 4)), (F(1, 2), F(-5, 8)), (F(-1, 5), F(-1, 2)),
         (F(-1, 10), F(-3, 2)), (F(0), F(-1, 3)), (F(-2, 5), F(-1)), (F(-1, 6), F(-4, 5)),
         (F(-1, 4), F(-2, 3)), (F(2), F(-3)), (F(-1, 8), F(-1, 2)), (F(0), F(0)), (F(-1, 3), F(-3, 5)),
         (F(-2, 7), F(-5, 6)), (F(-1, 2), F(-1))]


def half_line_corpus() -> list[SymbolicFunction]:
    dom = SymbolicDomain.HALF_LINE
    out = []
    for a, b in _HALF:
        terms = []
        if a is not None:
            terms.append(Term(1, a, NZ))
        if b is not None:
            terms.append(Term(1, b, TL))
        out.append(SymbolicFunction(terms, dom))
    return out


def corpus(domain) -> list[SymbolicFunction]:
    domain = SymbolicDomain(domain)
    return unit_interval_corpus() if domain is SymbolicDomain.UNIT_INTERVAL else half_line_corpus()


def random_space(rng: np.random.Generator, n: int, spread: float = 2.0) -> DiscreteSpace:
    """Masses log-uniform in [1/spread, spread]."""
    return DiscreteSpace(np.exp(rng.uniform(-np.log(spread), np.log(spread), size=n)))


def random_function(rng: np.random.Generator, space: DiscreteSpace, kind: str = "complex") -> DiscreteFunction:
    """kind: 'complex', 'real' (signed) or 'positive'."""
    n = space.n
    if kind == "positive":
        return DiscreteFunction(space, rng.exponential(size=n))
    re = rng.standard_normal(n)
    if kind == "real":
        return DiscreteFunction(space, re)
    return DiscreteFunction(space, re + 1j * rng.standard_normal(n))
