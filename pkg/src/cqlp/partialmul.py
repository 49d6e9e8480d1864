"""Partial multiplications on L^p: Gamma_1, Gamma_2, weak and strong products.

Verdicts on the symbolic backend are exact: a product of positive power
sums is again one, and membership is a sign test on rational exponents.
On the discrete backend every product stays in L^p, so all verdicts are
true; the discrete "shadow" of a symbolic pair is only used to exercise
the weak-multiplier identity numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from cqlp.exponents import Exponent, ExponentInterval, conjugate, reciprocal_split, reciprocal_sum_contains
from cqlp.forms import FormWeight, evaluate
from cqlp.seminorms import random_ball_weights
from cqlp.spaces import (
    DiscreteFunction,
    DiscreteSpace,
    Function,
    Support,
    SymbolicDomain,
    SymbolicFunction,
    Term,
    exponent_set,
    in_lp,
)


def _pair_in_lp(f: Function, g: Function, p: Exponent) -> bool:
    return in_lp(f, p) and in_lp(g, p)


def gamma1_check(f: Function, g: Function, p) -> bool:
    """(f, g) in Gamma_1: f, g, fg all in L^p."""
    p = Exponent.of(p)
    return _pair_in_lp(f, g, p) and in_lp(f * g, p)


def gamma2_check(f: Function, g: Function, p) -> tuple[bool, tuple[Exponent, Exponent] | None]:
    """(f, g) in Gamma_2 with an exact witness (r, s), 1/r + 1/s = 1/p.

    E(f) is taken inside [1, inf): the point inf is dropped.
    """
    p = Exponent.of(p)
    if not _pair_in_lp(f, g, p):
        return False, None
    if isinstance(f, DiscreteFunction):
        ef = eg = ExponentInterval.full().finite_part()
    else:
        ef, eg = exponent_set(f).finite_part(), exponent_set(g).finite_part()
    split = reciprocal_split(ef, eg, p)
    return split is not None, split


# --------------------------------------------------------------------------
# discrete shadow of symbolic functions


def shadow_space(domain: SymbolicDomain, levels: int = 30) -> tuple[DiscreteSpace, np.ndarray]:
    """Dyadic cells (2**-k-1, 2**-k] (and (2**k, 2**k+1] on the half-line) with sample points."""
    lo = 2.0 ** -np.arange(1, levels + 1)
    hi = 2.0 ** -np.arange(0, levels)
    mass, pts = list(hi - lo), list(np.sqrt(lo * hi))
    if domain is SymbolicDomain.HALF_LINE:
        a = 2.0 ** np.arange(0, levels)
        b = 2.0 ** np.arange(1, levels + 1)
        mass += list(b - a)
        pts += list(np.sqrt(a * b) * (1 + 1e-12))
    return DiscreteSpace(mass), np.asarray(pts)


def shadow(f: SymbolicFunction, space: DiscreteSpace, points: np.ndarray) -> DiscreteFunction:
    return DiscreteFunction(space, [f(x) for x in points])


@dataclass
class WeakProduct:
    in_gamma_w: bool
    product: Function | None
    checked: int = 0
    max_identity_gap: float = 0.0


def weak_mul_check(f: Function, g: Function, p, seed: int = 0, n_samples: int = 8,
                   tol: float = 1e-9) -> WeakProduct:
    """Is f a weak multiplier of g?

    The candidate is h = fg, accepted iff h is in L^p. When accepted, the
    identity Omega(g phi, f* psi) = Omega(h phi, psi) is sampled over seeded
    forms and test functions (on the dyadic shadow for symbolic input).
    Uniqueness of h is not re-checked: it follows from *-semisimplicity.
    """
    p = Exponent.of(p)
    if p.recip > Fraction(1, 2):
        raise ValueError("weak multiplication is defined for p >= 2")
    if not _pair_in_lp(f, g, p):
        return WeakProduct(False, None)
    h = f * g
    if not in_lp(h, p):
        return WeakProduct(False, None)
    if isinstance(f, SymbolicFunction):
        space, pts = shadow_space(f.domain)
        fs, gs, hs = shadow(f, space, pts), shadow(g, space, pts), shadow(h, space, pts)
    else:
        space, fs, gs, hs = f.space, f, g, h
    rng = np.random.default_rng(seed)
    worst = 0.0
    n = space.n
    for psi_w in random_ball_weights(space, p, rng, n_samples):
        omega = FormWeight(DiscreteFunction(space, psi_w), p, check=False)
        phi = DiscreteFunction(space, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        psi = DiscreteFunction(space, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        lhs = evaluate(omega, gs * phi, fs.conj() * psi)
        rhs = evaluate(omega, hs * phi, psi)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return WeakProduct(worst <= tol, h, n_samples, worst)


# --------------------------------------------------------------------------
# closability and the strong product


@dataclass
class ClosabilityReport:
    p: Exponent
    dual_exponent: Exponent
    # local exponents b such that x**b is in D(T_f'), per support: (bound, kind)
    adjoint_domain: dict = field(default_factory=dict)
    closable: bool | None = None
    status: str = ""
    density_evidence: str = "contains every bounded truncation supported away from 0 and inf"


def closability_report(f: Function, p) -> ClosabilityReport:
    """Describe D(T_f') = {g in L^{p'} : f* g in L^{p'}} and decide closability.

    Closable for 1 < p < inf always, and for p = 1 on finite measure; outside
    those hypotheses the flag is None ("not guaranteed").
    """
    p = Exponent.of(p)
    if p.is_inf:
        raise ValueError("closability is considered for 1 <= p < inf")
    pc = conjugate(p)
    dom: dict[str, dict] = {}
    finite = isinstance(f, DiscreteFunction) or f.domain.is_finite
    if isinstance(f, SymbolicFunction):
        for support in Support:
            if support is Support.TAIL and f.domain is SymbolicDomain.UNIT_INTERVAL:
                continue
            terms = f.on(support)
            if support is Support.NEAR_ZERO:
                # x**b with b + 1/p' > 0 and (b + a_min) + 1/p' > 0
                shift = min((t.a for t in terms), default=Fraction(0))
                bound = -pc.recip - min(shift, Fraction(0))
                dom[support.value] = {"b_greater_than": str(bound), "closed": pc.is_inf}
            else:
                shift = max((t.a for t in terms), default=Fraction(0))
                bound = -pc.recip - max(shift, Fraction(0))
                dom[support.value] = {"b_less_than": str(bound), "closed": pc.is_inf}
    if p.recip < 1:
        return ClosabilityReport(p, pc, dom, True, "closable (1 < p < inf)")
    if finite:
        return ClosabilityReport(p, pc, dom, True, "closable (p = 1, finite measure)")
    return ClosabilityReport(p, pc, dom, None, "not guaranteed (p = 1, infinite measure)")


def strong_product(f: Function, g: Function, p) -> Function | None:
    """f • g = closure(T_f) g, defined iff fg in L^p (p > 1); None when undefined."""
    p = Exponent.of(p)
    if p.recip == 1:
        raise ValueError("the strong product needs p > 1")
    if not _pair_in_lp(f, g, p):
        return None
    h = f * g
    return h if in_lp(h, p) else None


# --------------------------------------------------------------------------
# approximating sequences


def _log_tail_power(term: Term, p: Exponent, log_n: float) -> float:
    """log of ∫ |term|**p over (0, 1/n] or [n, inf); +inf when divergent."""
    pf = float(p)
    e = float(term.a) * pf + 1.0
    if term.support is Support.NEAR_ZERO:
        if e <= 0:
            return math.inf
        return pf * math.log(float(term.c)) - e * log_n - math.log(e)
    if e >= 0:
        return math.inf
    return pf * math.log(float(term.c)) + e * log_n - math.log(-e)


def _log_band_power(term: Term, p: Exponent, log_n: float, log_m: float) -> float:
    """log of ∫ |term|**p over (1/m, 1/n] or [n, m), m > n."""
    pf = float(p)
    e = float(term.a) * pf + 1.0
    lc = pf * math.log(float(term.c))
    if e == 0:
        return lc + math.log(log_m - log_n)
    if term.support is Support.NEAR_ZERO:
        # (n**-e - m**-e) / e
        x, y = -e * log_n, -e * log_m
    else:
        x, y = e * log_m, e * log_n
    hi, lo = max(x, y), min(x, y)
    return lc + hi + math.log1p(-math.exp(lo - hi)) - math.log(abs(e))


def _logsumexp(xs) -> float:
    xs = [x for x in xs if x != -math.inf]
    if not xs:
        return -math.inf
    top = max(xs)
    if math.isinf(top):
        return top
    return top + math.log(sum(math.exp(x - top) for x in xs))


@dataclass
class ApproxSequenceReport:
    p: Exponent
    levels: list[int]
    approx_error: list[float]
    product_norm_lower: list[float]
    increments: list[float]
    decay_rates: list[Fraction]
    convergent: bool
    g_converges: bool


def approx_sequence_check(f: SymbolicFunction, g: SymbolicFunction, p, n_max_log2: int = 40) -> ApproxSequenceReport:
    """Truncations g_n = g 1_(1/n, n) for n = 2, 4, ..., 2**n_max_log2.

    Each g_n is bounded with support away from 0 and inf, hence an L^p limit of
    compactly supported continuous functions. Reported per level: an upper
    bound on ||g - g_n||_p, a lower bound on ||f g_n||_p, and an upper bound
    on the Cauchy increment ||f g_2n - f g_n||_p, all from exact tail
    integrals of single power terms. The verdict uses the exact decay rates of
    the tails of fg: convergent iff every rate is positive.
    """
    p = Exponent.of(p)
    if p.recip == 1 or p.is_inf:
        raise ValueError("approximating sequences need 1 < p < inf")
    pf = float(p)
    prod = f * g
    rates = []
    for t in prod.terms:
        e = t.a * (1 / p.recip) + 1
        rates.append(e / (1 / p.recip) if t.support is Support.NEAR_ZERO else -e / (1 / p.recip))
    levels = list(range(1, n_max_log2 + 1))
    err, low, inc = [], [], []
    for k in levels:
        ln = k * math.log(2.0)
        err.append(sum(math.exp(min(_log_tail_power(t, p, ln), 700.0) / pf) for t in g.terms))
        # ∫ over (1/n, n) of the product, one term at a time (superadditivity of x**p)
        inner = []
        for t in prod.terms:
            band = _log_band_power(t, p, 0.0, ln)
            inner.append(band)
        low.append(math.exp(min(_logsumexp(inner), 1400.0) / pf) if inner else 0.0)
        inc.append(sum(math.exp(min(_log_band_power(t, p, ln, ln + math.log(2.0)), 700.0) / pf)
                       for t in prod.terms))
    g_ok = in_lp(g, p)
    convergent = g_ok and in_lp(f, p) and all(r > 0 for r in rates)
    return ApproxSequenceReport(p, levels, err, low, inc, rates, convergent, g_ok)


# --------------------------------------------------------------------------
# verdict table


@dataclass
class GammaVerdict:
    f: Function
    g: Function
    p: Exponent
    in_lp: bool
    in_gamma1: bool
    in_gamma2: bool
    gamma2_witness: tuple[Exponent, Exponent] | None
    in_gamma_w: bool | None
    in_gamma_s: bool
    product: Function | None

    def row(self) -> dict:
        w = self.gamma2_witness
        return {
            "in_lp": self.in_lp,
            "gamma1": self.in_gamma1,
            "gamma2": self.in_gamma2,
            "gamma_w": self.in_gamma_w,
            "gamma_s": self.in_gamma_s,
            "witness_r": str(w[0]) if w else None,
            "witness_s": str(w[1]) if w else None,
            "product_in_lp": self.product is not None and in_lp(self.product, self.p),
        }


def classify_pair(f: Function, g: Function, p, seed: int = 0) -> GammaVerdict:
    p = Exponent.of(p)
    g1 = gamma1_check(f, g, p)
    g2, wit = gamma2_check(f, g, p)
    gw = weak_mul_check(f, g, p, seed).in_gamma_w if p.recip <= Fraction(1, 2) else None
    prod = strong_product(f, g, p) if p.recip < 1 else None
    gs = prod is not None
    return GammaVerdict(f, g, p, _pair_in_lp(f, g, p), g1, g2, wit, gw, gs, prod)


def gamma_table(corpus: Sequence[Function], p, seed: int = 0) -> list[dict]:
    rows = []
    for i, f in enumerate(corpus):
        for j, g in enumerate(corpus):
            v = classify_pair(f, g, p, seed)
            rows.append({"i": i, "j": j, **v.row()})
    return rows


# --------------------------------------------------------------------------
# distributivity of Gamma_2


def grid_functions(domain: SymbolicDomain, grid: Sequence) -> list[SymbolicFunction]:
    """Power functions built from the grid, one optional term per support."""
    exps = sorted({Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator(1000) for x in grid})
    out = []
    if domain is SymbolicDomain.UNIT_INTERVAL:
        return [SymbolicFunction([Term(1, a, Support.NEAR_ZERO)], domain) for a in exps]
    for a in [None, *exps]:
        for b in [None, *exps]:
            terms = []
            if a is not None:
                terms.append(Term(1, a, Support.NEAR_ZERO))
            if b is not None:
                terms.append(Term(1, b, Support.TAIL))
            if terms:
                out.append(SymbolicFunction(terms, domain))
    return out


@dataclass
class WitnessSearch:
    domain: SymbolicDomain
    p: Exponent
    grid: tuple
    candidates: int
    triples_checked: int
    witness: tuple[SymbolicFunction, SymbolicFunction, SymbolicFunction] | None = None

    @property
    def exhausted(self) -> bool:
        return self.witness is None

    def to_json(self):
        out = {
            "domain": self.domain.value,
            "p": self.p.to_json(),
            "grid": [str(x) for x in self.grid],
            "candidates": self.candidates,
            "triples_checked": self.triples_checked,
            "exhausted": self.exhausted,
        }
        if self.witness:
            out["witness"] = [w.to_json() for w in self.witness]
        return out


def verify_distributivity_witness(f, g, h, p) -> bool:
    """(f, g), (f, h) in Gamma_2 but (f, g + h) not: recomputed from scratch."""
    return gamma2_check(f, g, p)[0] and gamma2_check(f, h, p)[0] and not gamma2_check(f, g + h, p)[0]


def distributivity_witness_search(domain: SymbolicDomain, p, grid: Sequence) -> WitnessSearch:
    """Search grid power functions for a failure of (f,g),(f,h) in Gamma_2 => (f,g+h) in Gamma_2.

    Triples are scanned in lexicographic order of candidate index, so the
    first hit is the least witness. E(g + h) = E(g) ∩ E(h) for positive
    functions; any hit is re-verified on the actual sum.
    """
    p = Exponent.of(p)
    funcs = [f for f in grid_functions(domain, grid) if in_lp(f, p)]
    es = [exponent_set(f).finite_part() for f in funcs]
    checked = 0
    for i, ef in enumerate(es):
        partners = [j for j, eg in enumerate(es) if reciprocal_sum_contains(ef, eg, p)]
        for a, j in enumerate(partners):
            for k in partners[a:]:
                checked += 1
                if not reciprocal_sum_contains(ef, es[j].intersect(es[k]), p):
                    f, g, h = funcs[i], funcs[j], funcs[k]
                    if verify_distributivity_witness(f, g, h, p):
                        return WitnessSearch(domain, p, tuple(grid), len(funcs), checked, (f, g, h))
    return WitnessSearch(domain, p, tuple(grid), len(funcs), checked)


# --------------------------------------------------------------------------
# partial *-algebra axioms


@dataclass
class PartialAlgebraReport:
    gamma: str
    p: Exponent
    domain: SymbolicDomain
    involution_failures: list[tuple[int, int]] = field(default_factory=list)
    sum_failures: list[tuple[int, int, int]] = field(default_factory=list)
    distributivity_failures: list[tuple[int, int, int]] = field(default_factory=list)
    unit_failures: list[int] = field(default_factory=list)
    unit_applicable: bool = True

    @property
    def passed(self) -> bool:
        return not (self.involution_failures or self.sum_failures or self.distributivity_failures
                    or self.unit_failures)


def partial_algebra_axioms_check(gamma: str, corpus: Sequence[SymbolicFunction], p) -> PartialAlgebraReport:
    """Check the partial *-algebra axioms for Gamma_1 or Gamma_2 on a corpus.

    Only corpus members in L^p take part. Sums g + h are formed for every
    pair of right partners of f. The unit axiom applies on finite measure,
    where the unit is in L^p.
    """
    p = Exponent.of(p)
    if gamma not in ("gamma1", "gamma2"):
        raise ValueError("gamma must be 'gamma1' or 'gamma2'")
    check = gamma1_check if gamma == "gamma1" else (lambda a, b, q: gamma2_check(a, b, q)[0])
    members = [f for f in corpus if in_lp(f, p)]
    if not members:
        raise ValueError("empty corpus")
    domain = members[0].domain
    report = PartialAlgebraReport(gamma, p, domain)
    n = len(members)
    rel = [[check(members[i], members[j], p) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if rel[i][j] and not check(members[j].conj(), members[i].conj(), p):
                report.involution_failures.append((i, j))
    for i in range(n):
        partners = [j for j in range(n) if rel[i][j]]
        for a, j in enumerate(partners):
            for k in partners[a:]:
                s = members[j] + members[k]
                if not check(members[i], s, p):
                    report.sum_failures.append((i, j, k))
                elif members[i] * s != members[i] * members[j] + members[i] * members[k]:
                    report.distributivity_failures.append((i, j, k))
    u = domain.unit()
    report.unit_applicable = in_lp(u, p)
    if report.unit_applicable:
        for i, f in enumerate(members):
            if not (check(u, f, p) and check(f, u, p) and u * f == f and f * u == f):
                report.unit_failures.append(i)
    return report
