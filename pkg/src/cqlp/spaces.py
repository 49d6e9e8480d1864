"""Measure spaces, the two function backends, p-norms and the multiplier lemmas.

Discrete backend: finitely many atoms with positive masses and complex
values, everything computed with numpy.

Symbolic backend: finite sums of positive power terms ``c * x**a`` living on
``(0, 1]`` or ``(1, inf)``, over Lebesgue measure on (0, 1] or (0, inf).
Because every coefficient is positive, ``f`` is in L^q exactly when each
of its terms is, so membership questions reduce to exact rational
arithmetic on the exponents.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from cqlp import quadrature
from cqlp.exponents import Exponent, ExponentInterval, ReciprocalInterval, holder_combine

NUMERIC_REL_TOL = 1e-6


# --------------------------------------------------------------------------
# discrete backend


class DiscreteSpace:
    """Finitely many atoms with strictly positive masses."""

    def __init__(self, weights: Sequence[float], atoms: Sequence | None = None):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("a discrete space needs a nonempty 1-d weight vector")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("atom masses must be finite and strictly positive")
        self.weights = w
        self.weights.setflags(write=False)
        self.atoms = tuple(range(w.size)) if atoms is None else tuple(atoms)
        if len(self.atoms) != w.size:
            raise ValueError("one atom id per weight")

    @classmethod
    def uniform(cls, n: int, total_mass: float = 1.0) -> "DiscreteSpace":
        return cls(np.full(n, total_mass / n))

    @property
    def n(self) -> int:
        return self.weights.size

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def is_finite(self) -> bool:
        return True

    def __eq__(self, other):
        return isinstance(other, DiscreteSpace) and self.atoms == other.atoms and np.array_equal(
            self.weights, other.weights
        )

    def __hash__(self):
        return hash((self.atoms, self.weights.tobytes()))

    def __repr__(self):
        return f"DiscreteSpace(weights={self.weights.tolist()})"

    def unit(self) -> "DiscreteFunction":
        return DiscreteFunction(self, np.ones(self.n))

    def indicator(self, i: int) -> "DiscreteFunction":
        v = np.zeros(self.n)
        v[i] = 1.0
        return DiscreteFunction(self, v)

    def function(self, values) -> "DiscreteFunction":
        return DiscreteFunction(self, values)

    def to_json(self):
        return {"weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, obj) -> "DiscreteSpace":
        return cls(obj["weights"], obj.get("atoms"))


class DiscreteFunction:
    """A complex value on each atom of a ``DiscreteSpace``."""

    __array_priority__ = 100

    def __init__(self, space: DiscreteSpace, values):
        v = np.array(values, dtype=complex)
        if v.shape != (space.n,):
            raise ValueError(f"expected {space.n} values, got shape {v.shape}")
        v.setflags(write=False)
        self.space = space
        self.values = v

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def _check(self, other) -> "DiscreteFunction":
        if isinstance(other, SymbolicFunction):
            raise TypeError("cannot mix discrete and symbolic functions")
        if not isinstance(other, DiscreteFunction):
            raise TypeError(f"expected a DiscreteFunction, got {type(other).__name__}")
        if other.space is not self.space and other.space != self.space:
            raise ValueError("functions live on different spaces")
        return other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return DiscreteFunction(self.space, self.values * other)
        other = self._check(other)
        return DiscreteFunction(self.space, self.values * other.values)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return DiscreteFunction(self.space, other * self.values)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        return DiscreteFunction(self.space, self.values + other.values)

    def __sub__(self, other):
        other = self._check(other)
        return DiscreteFunction(self.space, self.values - other.values)

    def __neg__(self):
        return DiscreteFunction(self.space, -self.values)

    def conj(self) -> "DiscreteFunction":
        return DiscreteFunction(self.space, np.conj(self.values))

    def abs(self) -> "DiscreteFunction":
        return DiscreteFunction(self.space, np.abs(self.values))

    def __eq__(self, other):
        return (
            isinstance(other, DiscreteFunction)
            and other.space == self.space
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"DiscreteFunction({self.values.tolist()})"

    def to_json(self):
        return {"re": self.values.real.tolist(), "im": self.values.imag.tolist()}

    @classmethod
    def from_json(cls, space: DiscreteSpace, obj) -> "DiscreteFunction":
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        return cls(space, re + 1j * im)


def _discrete_norm(values: np.ndarray, weights: np.ndarray, p: Exponent) -> float:
    a = np.abs(values)
    top = float(a.max()) if a.size else 0.0
    if p.is_inf or top == 0.0:
        return top
    pf = float(p)
    return top * float(np.sum((a / top) ** pf * weights)) ** (1.0 / pf)


# --------------------------------------------------------------------------
# symbolic backend


class SymbolicDomain(enum.Enum):
    UNIT_INTERVAL = "unit_interval"
    HALF_LINE = "half_line"

    @property
    def mass(self) -> float:
        return 1.0 if self is SymbolicDomain.UNIT_INTERVAL else math.inf

    @property
    def is_finite(self) -> bool:
        return self is SymbolicDomain.UNIT_INTERVAL

    def unit(self) -> "SymbolicFunction":
        terms = [Term(1, 0, Support.NEAR_ZERO)]
        if self is SymbolicDomain.HALF_LINE:
            terms.append(Term(1, 0, Support.TAIL))
        return SymbolicFunction(terms, self)

    def zero(self) -> "SymbolicFunction":
        return SymbolicFunction([], self)


class Support(enum.Enum):
    NEAR_ZERO = "near_zero"
    TAIL = "tail"


def _coeff(c):
    if isinstance(c, bool):
        raise TypeError("bool coefficient")
    if isinstance(c, float):
        if not (math.isfinite(c) and c > 0):
            raise ValueError(f"coefficients must be positive, got {c}")
        return c
    c = Fraction(c)
    if c <= 0:
        raise ValueError(f"coefficients must be positive, got {c}")
    return c


@dataclass(frozen=True)
class Term:
    """``c * x**a`` restricted to one support.

    ``c`` is an exact positive rational, or a positive float when it comes
    out of a norm (extremal weights carry ``||f||_p ** (2 - p)``).
    The exponent is always exact.
    """

    c: Union[Fraction, float]
    a: Fraction
    support: Support = Support.NEAR_ZERO

    def __post_init__(self):
        object.__setattr__(self, "c", _coeff(self.c))
        if isinstance(self.a, float):
            raise TypeError("term exponents are exact; pass a Fraction or str")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "support", Support(self.support))

    def in_lq(self, q: Exponent) -> bool:
        if q.is_inf:
            return self.a >= 0 if self.support is Support.NEAR_ZERO else self.a <= 0
        if self.support is Support.NEAR_ZERO:
            return self.a + q.recip > 0
        return self.a + q.recip < 0

    def reciprocal_set(self) -> ReciprocalInterval:
        """{1/q : q in [1, inf], term in L^q}."""
        a = self.a
        if self.support is Support.NEAR_ZERO:
            if a >= 0:
                return ReciprocalInterval(0, 1, True, True)
            return ReciprocalInterval(-a, 1, False, True)
        if a > 0:
            return ReciprocalInterval.empty()
        if a == 0:
            return ReciprocalInterval(0, 0, True, True)
        if -a > 1:
            return ReciprocalInterval(0, 1, True, True)
        return ReciprocalInterval(0, -a, True, False)

    def norm_power(self, p: Exponent) -> float:
        """∫ |term|**p over its support, closed form (inf when divergent)."""
        if not self.in_lq(p):
            return math.inf
        pf = float(p)
        e = float(self.a) * pf + 1.0
        return float(self.c) ** pf / (e if self.support is Support.NEAR_ZERO else -e)

    def __str__(self):
        where = "(0,1]" if self.support is Support.NEAR_ZERO else "(1,∞)"
        return f"{self.c}·x^{self.a}·1{where}"

    def to_json(self):
        return {"c": _rat_json(self.c), "a": _rat_json(self.a), "support": self.support.value}


def _rat_json(x):
    if isinstance(x, float):
        return x
    return {"num": x.numerator, "den": x.denominator}


def parse_rational(obj):
    """JSON rational: ``{"num", "den"}``, an int, ``"p/q"`` string, or float (coefficients only)."""
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, bool):
        raise TypeError("bool is not a rational")
    if isinstance(obj, (int, str)):
        return Fraction(obj)
    if isinstance(obj, float):
        return obj
    raise TypeError(f"not a rational: {obj!r}")


class SymbolicFunction:
    """A positive sum of power terms on a symbolic Lebesgue domain."""

    def __init__(self, terms: Sequence[Term] = (), domain: SymbolicDomain | None = None):
        terms = [t if isinstance(t, Term) else Term(*t) for t in terms]
        if domain is None:
            has_tail = any(t.support is Support.TAIL for t in terms)
            domain = SymbolicDomain.HALF_LINE if has_tail else SymbolicDomain.UNIT_INTERVAL
        domain = SymbolicDomain(domain)
        if domain is SymbolicDomain.UNIT_INTERVAL and any(t.support is Support.TAIL for t in terms):
            raise ValueError("tail terms need the half-line domain")
        merged: dict[tuple[Support, Fraction], object] = {}
        for t in terms:
            key = (t.support, t.a)
            merged[key] = merged[key] + t.c if key in merged else t.c
        order = sorted(merged, key=lambda k: (k[0].value != "near_zero", k[1]))
        self.terms: tuple[Term, ...] = tuple(Term(merged[k], k[1], k[0]) for k in order)
        self.domain = domain

    @classmethod
    def power(cls, a, c=1, support: Support = Support.NEAR_ZERO,
              domain: SymbolicDomain | None = None) -> "SymbolicFunction":
        return cls([Term(c, Fraction(a), support)], domain)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def on(self, support: Support) -> tuple[Term, ...]:
        return tuple(t for t in self.terms if t.support is support)

    def _check(self, other) -> "SymbolicFunction":
        if isinstance(other, DiscreteFunction):
            raise TypeError("cannot mix discrete and symbolic functions")
        if not isinstance(other, SymbolicFunction):
            raise TypeError(f"expected a SymbolicFunction, got {type(other).__name__}")
        if other.domain is not self.domain:
            raise ValueError("functions live on different domains")
        return other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
            if other == 0:
                return SymbolicFunction([], self.domain)
            return SymbolicFunction([Term(t.c * other, t.a, t.support) for t in self.terms], self.domain)
        other = self._check(other)
        out = [
            Term(s.c * t.c, s.a + t.a, s.support)
            for s in self.terms
            for t in other.terms
            if s.support is t.support
        ]
        return SymbolicFunction(out, self.domain)

    __rmul__ = __mul__

    def __add__(self, other):
        other = self._check(other)
        return SymbolicFunction(self.terms + other.terms, self.domain)

    def conj(self) -> "SymbolicFunction":
        return self

    def is_bounded(self) -> bool:
        return all(t.in_lq(Exponent.of("inf")) for t in self.terms)

    def __call__(self, x: float) -> float:
        sup = Support.NEAR_ZERO if x <= 1 else Support.TAIL
        return float(sum(float(t.c) * x ** float(t.a) for t in self.on(sup)))

    def __eq__(self, other):
        return isinstance(other, SymbolicFunction) and self.domain is other.domain and self.terms == other.terms

    def __hash__(self):
        return hash((self.domain, self.terms))

    def __repr__(self):
        body = " + ".join(str(t) for t in self.terms) or "0"
        return f"SymbolicFunction({body}; {self.domain.value})"

    def to_json(self):
        return {"domain": self.domain.value, "terms": [t.to_json() for t in self.terms]}

    @classmethod
    def from_json(cls, obj) -> "SymbolicFunction":
        terms = [
            Term(parse_rational(t["c"]), Fraction(parse_rational(t["a"])), Support(t.get("support", "near_zero")))
            for t in obj["terms"]
        ]
        dom = obj.get("domain")
        return cls(terms, SymbolicDomain(dom) if dom else None)


Function = Union[DiscreteFunction, SymbolicFunction]


# --------------------------------------------------------------------------
# norms and exponent sets


def in_lp(f: Function, p) -> bool:
    p = Exponent.of(p)
    if isinstance(f, DiscreteFunction):
        return True
    return all(t.in_lq(p) for t in f.terms)


def norm(f: Function, p) -> float:
    """The L^p norm; ``math.inf`` when f is not in L^p."""
    p = Exponent.of(p)
    if isinstance(f, DiscreteFunction):
        return _discrete_norm(f.values, f.space.weights, p)
    if f.is_zero:
        return 0.0
    if not in_lp(f, p):
        return math.inf
    if p.is_inf:
        return float(max(sum(float(t.c) for t in f.on(s)) for s in Support if f.on(s)))
    total = 0.0
    pf = float(p)
    for support in Support:
        terms = f.on(support)
        if not terms:
            continue
        if len(terms) == 1:
            total += terms[0].norm_power(p)
            continue
        cs = [float(t.c) for t in terms]
        exps = [float(t.a) for t in terms]
        if support is Support.NEAR_ZERO:
            total += quadrature.near_zero_integral(cs, exps, pf)
        else:
            total += quadrature.tail_integral(cs, exps, pf)
    return total ** (1.0 / pf)


def exponent_set(f: Function) -> ExponentInterval:
    """E(f) = {q : ||f||_q < inf}, with inf included when f is bounded.

    Callers that quantify over [1, inf) only should use ``.finite_part()``.
    """
    if isinstance(f, DiscreteFunction):
        return ExponentInterval.full()
    rec = ReciprocalInterval(0, 1, True, True)
    for t in f.terms:
        rec = rec.intersect(t.reciprocal_set())
    return rec.to_exponents()


def multiply(f: Function, g: Function) -> Function:
    return f * g


def add(f: Function, g: Function) -> Function:
    return f + g


def involution(f: Function) -> Function:
    return f.conj()


# --------------------------------------------------------------------------
# multiplication operators


def _exponent_gap(p: Exponent, r: Exponent) -> Exponent:
    """q with 1/p + 1/q = 1/r."""
    if r.recip < p.recip:
        raise ValueError(f"no q >= 1 solves 1/{p} + 1/q = 1/{r}: need r <= p")
    return Exponent.from_recip(r.recip - p.recip)


def _ratio(w: np.ndarray, f: np.ndarray, mu: np.ndarray, p: Exponent, r: Exponent) -> float:
    denom = _discrete_norm(f, mu, p)
    if denom == 0.0:
        return 0.0
    return _discrete_norm(f * w, mu, r) / denom


def operator_norm_candidates(w: DiscreteFunction, p, r, seed: int = 0, n_random: int = 64) -> list[np.ndarray]:
    """The test vectors searched by ``operator_norm``.

    The closed-form maximizer |w|**(q/p), every atom indicator, and
    seeded random complex vectors.
    """
    p, r = Exponent.of(p), Exponent.of(r)
    q = _exponent_gap(p, r)
    n = w.space.n
    absw = np.abs(w.values)
    cands = []
    if not q.is_inf:
        power = float(q.value / p.value) if not p.is_inf else 0.0
        with np.errstate(divide="ignore"):
            cands.append(np.where(absw > 0, absw ** power, 0.0) if power > 0 else np.ones(n))
    cands.extend(np.eye(n))
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        cands.append(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return cands


def operator_norm(w: DiscreteFunction, p, r, seed: int = 0, n_random: int = 64) -> float:
    """Norm of f -> f*w from L^p to L^r, maximized over the candidate set."""
    p, r = Exponent.of(p), Exponent.of(r)
    mu = w.space.weights
    return max(_ratio(w.values, f, mu, p, r) for f in operator_norm_candidates(w, p, r, seed, n_random))


def operator_norm_random_search(w: DiscreteFunction, p, r, seed: int = 0, iters: int = 4000) -> float:
    """Derivative-free lower bound: a (1+1) random search on the ratio.

    Starts from the best of a few random vectors and only ever sees ratio
    values, so it is independent of any closed-form maximizer.
    """
    p, r = Exponent.of(p), Exponent.of(r)
    _exponent_gap(p, r)
    mu = w.space.weights
    n = w.space.n
    rng = np.random.default_rng(seed)
    starts = [np.abs(rng.standard_normal(n)) + 1e-3 for _ in range(16)]
    x = max(starts, key=lambda v: _ratio(w.values, v, mu, p, r))
    best = _ratio(w.values, x, mu, p, r)
    for _ in range(iters):
        # multiplicative move, log-uniform size; one coordinate or all of them
        size = 10.0 ** rng.uniform(-6, 0)
        z = np.zeros(n)
        if n > 1 and rng.random() < 0.7:
            z[rng.integers(n)] = size * rng.standard_normal()
        else:
            z = size * rng.standard_normal(n)
        y = x * np.exp(z)
        val = _ratio(w.values, y, mu, p, r)
        if val > best:
            x, best = y, val
    return best


def factorize(psi: Function, m, p, r_conj) -> tuple[Function, Function]:
    """Split psi >= 0 in L^m as (psi**(m/p), psi**(m/r')) with 1/m = 1/p + 1/r'."""
    m, p, r_conj = Exponent.of(m), Exponent.of(p), Exponent.of(r_conj)
    if holder_combine(p, r_conj) != m:
        raise ValueError(f"1/{m} != 1/{p} + 1/{r_conj}")
    s1 = p.recip / m.recip if m.recip else Fraction(0)
    s2 = r_conj.recip / m.recip if m.recip else Fraction(0)
    if isinstance(psi, DiscreteFunction):
        if not psi.is_real or np.any(psi.real < 0):
            raise ValueError("factorize needs psi >= 0")
        v = psi.real
        return (
            DiscreteFunction(psi.space, np.where(v > 0, v ** float(s1), 0.0) if s1 else np.ones_like(v)),
            DiscreteFunction(psi.space, np.where(v > 0, v ** float(s2), 0.0) if s2 else np.ones_like(v)),
        )
    first, second = [], []
    for support in Support:
        terms = psi.on(support)
        if len(terms) > 1:
            raise ValueError("powers of multi-term sums are not power sums; split one term per support")
        for t in terms:
            c1 = _rational_power(t.c, s1)
            if c1 is None:
                first.append(Term(t.c, t.a * s1, support))
                second.append(Term(1, t.a * s2, support))
            else:
                first.append(Term(c1, t.a * s1, support))
                second.append(Term(_rational_power(t.c, s2), t.a * s2, support))
    return SymbolicFunction(first, psi.domain), SymbolicFunction(second, psi.domain)


def _rational_power(c, s: Fraction):
    """c**s when exactly rational, else None (the caller keeps c on one factor)."""
    if isinstance(c, float):
        return None
    if s == 0:
        return Fraction(1)
    root = s.denominator
    out = []
    for part in (c.numerator, c.denominator):
        x = round(part ** (1.0 / root))
        for cand in (x - 1, x, x + 1):
            if cand > 0 and cand ** root == part:
                out.append(cand)
                break
        else:
            return None
    return Fraction(out[0], out[1]) ** s.numerator


@dataclass
class MultiplierReport:
    """Both sides of the multiplier lemma for one symbolic g."""

    p: Exponent
    r: Exponent
    q: Exponent
    maps_lp_into_lr: bool
    g_in_lq: bool
    critical_terms: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.maps_lp_into_lr == self.g_in_lq


def _maps_lp_into_lr(term: Term, p: Exponent, r: Exponent) -> bool:
    # The local exponents of f in L^p fill (-1/p, inf) near 0 and (-inf, -1/p)
    # at infinity; at the boundary -1/p itself there are log-corrected f in L^p
    # whose product with x**-1/q escapes L^r unless r = p.
    edge = -p.recip + term.a
    if term.support is Support.NEAR_ZERO:
        if edge > -r.recip:
            return True
        return edge == -r.recip and r == p
    if edge < -r.recip:
        return True
    return edge == -r.recip and r == p


def multiplier_theorem_check(g: SymbolicFunction, p, r) -> MultiplierReport:
    """Decide "fg in L^r for every f in L^p" and "g in L^q" separately."""
    p, r = Exponent.of(p), Exponent.of(r)
    q = _exponent_gap(p, r)
    maps = all(_maps_lp_into_lr(t, p, r) for t in g.terms)
    bad = [str(t) for t in g.terms if not _maps_lp_into_lr(t, p, r)]
    return MultiplierReport(p, r, q, maps, in_lp(g, q), bad)


# --------------------------------------------------------------------------
# CQ*-algebra norm conditions on the discrete backend


@dataclass
class Violation:
    condition: str
    slack: float
    witness: dict


@dataclass
class CqAxiomReport:
    p: Exponent
    checked: int
    involution_max_gap: float
    module_worst_slack: float
    multiplier_sup: float
    multiplier_sup_target: float
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def cq_axioms_check(space: DiscreteSpace, p, seed: int = 0, phi: DiscreteFunction | None = None,
                    n_samples: int = 200, rel_tol: float = NUMERIC_REL_TOL) -> CqAxiomReport:
    """Seeded check of the L^p norm conditions over C(X) = all atom functions.

    * ||f*||_p = ||f||_p
    * ||f phi||_p <= ||f||_p ||phi||_inf
    * sup over the unit p-ball of ||f phi||_p equals ||phi||_inf
    """
    p = Exponent.of(p)
    rng = np.random.default_rng(seed)
    mu = space.weights
    n = space.n
    violations: list[Violation] = []
    inv_gap = 0.0
    worst = -math.inf
    for _ in range(n_samples):
        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        nf = _discrete_norm(f, mu, p)
        gap = abs(_discrete_norm(np.conj(f), mu, p) - nf)
        inv_gap = max(inv_gap, gap)
        if gap != 0.0:
            violations.append(Violation("involution_isometry", gap, {"f": f.tolist()}))
        lhs = _discrete_norm(f * g, mu, p)
        rhs = nf * float(np.abs(g).max())
        slack = lhs - rhs
        worst = max(worst, slack)
        if slack > rel_tol * max(rhs, 1.0):
            violations.append(Violation("module_bound", slack, {"f": f.tolist(), "phi": g.tolist()}))
    if phi is None:
        phi = DiscreteFunction(space, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    target = float(np.abs(phi.values).max())
    cands = [np.eye(n)[i] for i in range(n)]
    cands += [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(n_samples)]
    sup = max(_ratio(phi.values, f, mu, p, p) for f in cands)
    if abs(sup - target) > rel_tol * max(target, 1.0):
        violations.append(Violation("multiplier_sup", sup - target, {"phi": phi.values.tolist()}))
    return CqAxiomReport(p, n_samples, inv_gap, worst, sup, target, violations)
