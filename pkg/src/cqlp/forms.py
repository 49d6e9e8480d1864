"""Positive invariant sesquilinear forms on L^p as weight functions.

For p >= 2 every such form is ``Omega(f, g) = ∫ f conj(g) psi dmu`` with
``psi >= 0`` in the ball ``||psi||_{p/(p-2)} <= 1``; a ``FormWeight`` is
that psi together with the ambient p. For p < 2 the only such form is 0,
and ``divergence_witness`` produces the function that rules out any other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from cqlp import quadrature
from cqlp.exponents import Exponent, gamma_exponent
from cqlp.spaces import (
    DiscreteFunction,
    DiscreteSpace,
    Function,
    Support,
    SymbolicDomain,
    SymbolicFunction,
    Term,
    in_lp,
    norm,
)

BALL_TOL = 1e-9


class FormWeight:
    """The weight psi of a form on L^p.

    Construction checks ``psi >= 0`` and, for p >= 2, the ball bound
    ``||psi||_{p/(p-2)} <= 1``. Pass ``check=False`` to build an
    out-of-ball weight on purpose (e.g. to exhibit an axiom violation).
    """

    def __init__(self, psi: Function, p, check: bool = True):
        self.psi = psi
        self.p = Exponent.of(p)
        if isinstance(psi, DiscreteFunction):
            if not psi.is_real or np.any(psi.real < 0):
                raise ValueError("form weights must be real and nonnegative")
        if check and self.p.recip <= Fraction(1, 2) and self.ball_norm() > 1 + BALL_TOL:
            raise ValueError(f"weight outside the ball: ||psi||_{self.dual_exponent} = {self.ball_norm()}")

    @property
    def dual_exponent(self) -> Exponent:
        return gamma_exponent(self.p)

    def ball_norm(self) -> float:
        return norm(self.psi, self.dual_exponent)

    @property
    def is_discrete(self) -> bool:
        return isinstance(self.psi, DiscreteFunction)

    @property
    def space(self):
        return self.psi.space if self.is_discrete else self.psi.domain

    def __repr__(self):
        return f"FormWeight(p={self.p}, psi={self.psi!r})"

    def to_json(self):
        return {"p": self.p.to_json(), "psi": self.psi.to_json()}


def evaluate(omega: FormWeight, f: Function, g: Function) -> complex | float:
    """Omega(f, g) = ∫ f conj(g) psi dmu; ``math.inf`` when the integral diverges."""
    psi = omega.psi
    if isinstance(psi, DiscreteFunction):
        return complex(np.sum(f.values * np.conj(g.values) * psi.real * psi.space.weights))
    integrand = f * g.conj() * psi
    if integrand.is_zero:
        return 0.0
    if not in_lp(integrand, 1):
        return math.inf
    return norm(integrand, 1)


def diagonal(omega: FormWeight, f: Function) -> float:
    """Omega(f, f) as a real number (or inf)."""
    v = evaluate(omega, f, f)
    return v if isinstance(v, float) else float(v.real)


def adjoint_form_value(omega: FormWeight, f: Function, g: Function):
    """Omega*(f, g) := Omega(g*, f*)."""
    return evaluate(omega, g.conj(), f.conj())


# --------------------------------------------------------------------------
# axioms


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    worst_slack: float
    witness: dict | None = None

    def to_json(self):
        return {"axiom": self.axiom, "passed": self.passed, "worst_slack": self.worst_slack, "witness": self.witness}


@dataclass
class FormAxiomReport:
    p: Exponent
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def to_json(self):
        return [r.to_json() for r in self.results]


def holder_extremal_pair(omega: FormWeight) -> DiscreteFunction:
    """The f maximizing Omega(f, f) / ||f||_p**2, namely psi**(1/(p-2))."""
    psi = omega.psi.real
    space = omega.psi.space
    if omega.p.recip == Fraction(1, 2):
        return space.indicator(int(np.argmax(psi)))
    if omega.p.is_inf:
        return space.unit()
    s = float(1 / (1 / omega.p.recip - 2))
    return DiscreteFunction(space, np.where(psi > 0, psi ** s, 0.0))


def _rand_complex(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def check_form_axioms(omega: FormWeight, seed: int = 0, n_samples: int = 200,
                      tol: float = 1e-12) -> FormAxiomReport:
    """Check positivity, module invariance and the norm bound on samples.

    Discrete backend only. Invariance is ``Omega(a b, c) = Omega(b, a* c)``;
    the bound is ``|Omega(f, g)| <= ||f||_p ||g||_p``, also tried at the
    Hölder-extremal pair where it is tight.
    """
    if not omega.is_discrete:
        raise ValueError("axiom sampling needs a discrete weight")
    space = omega.psi.space
    n = space.n
    p = omega.p
    rng = np.random.default_rng(seed)
    report = FormAxiomReport(p)

    worst_pos, wit_pos = math.inf, None
    worst_inv, wit_inv = 0.0, None
    worst_bnd, wit_bnd = -math.inf, None
    for _ in range(n_samples):
        a = DiscreteFunction(space, _rand_complex(rng, n))
        b = DiscreteFunction(space, _rand_complex(rng, n))
        c = DiscreteFunction(space, _rand_complex(rng, n))
        d = diagonal(omega, a)
        if d < worst_pos:
            worst_pos, wit_pos = d, {"f": a.to_json()}
        lhs = evaluate(omega, a * b, c)
        rhs = evaluate(omega, b, a.conj() * c)
        gap = abs(lhs - rhs) / max(1.0, abs(lhs))
        if gap > worst_inv:
            worst_inv, wit_inv = gap, {"a": a.to_json(), "b": b.to_json(), "c": c.to_json()}
        bound = norm(a, p) * norm(b, p)
        slack = (abs(evaluate(omega, a, b)) - bound) / bound
        if slack > worst_bnd:
            worst_bnd, wit_bnd = slack, {"f": a.to_json(), "g": b.to_json()}
    ext = holder_extremal_pair(omega)
    if norm(ext, p) > 0:
        slack = (diagonal(omega, ext) - norm(ext, p) ** 2) / norm(ext, p) ** 2
        if slack > worst_bnd:
            worst_bnd, wit_bnd = slack, {"f": ext.to_json(), "g": ext.to_json()}

    report.results.append(AxiomResult("positivity", worst_pos >= 0, worst_pos, wit_pos if worst_pos < 0 else None))
    report.results.append(AxiomResult("module_invariance", worst_inv <= tol, worst_inv,
                                      wit_inv if worst_inv > tol else None))
    report.results.append(AxiomResult("norm_bound", worst_bnd <= 1e-9, worst_bnd,
                                      wit_bnd if worst_bnd > 1e-9 else None))
    return report


# --------------------------------------------------------------------------
# distinguished weights


def _require_p_ge_2(p: Exponent):
    if p.recip > Fraction(1, 2):
        raise ValueError(f"needs p >= 2, got {p}")


def extremal_weight(f: Function, p) -> FormWeight:
    """psi = ||f||_p**(2-p) |f|**(p-2), the weight with Omega(f, f) = ||f||_p**2.

    At p = 2 the weight is the unit, including where f vanishes.
    """
    p = Exponent.of(p)
    _require_p_ge_2(p)
    if p.is_inf:
        raise ValueError("extremal weight needs a finite p")
    nf = norm(f, p)
    if nf == 0:
        raise ValueError("extremal weight of the zero function")
    if math.isinf(nf):
        raise ValueError(f"f is not in L^{p}")
    if p.recip == Fraction(1, 2):
        unit = f.space.unit() if isinstance(f, DiscreteFunction) else f.domain.unit()
        return FormWeight(unit, p)
    pf = float(p)
    scale = nf ** (2.0 - pf)
    if isinstance(f, DiscreteFunction):
        a = np.abs(f.values)
        return FormWeight(DiscreteFunction(f.space, scale * a ** (pf - 2.0)), p)
    power = 1 / p.recip - 2
    terms = []
    for support in Support:
        on = f.on(support)
        if len(on) > 1:
            raise ValueError("|f|**(p-2) of a multi-term sum is not a power sum")
        for t in on:
            terms.append(Term(scale * float(t.c) ** float(power), t.a * power, support))
    return FormWeight(SymbolicFunction(terms, f.domain), p)


def normalized_weight(space, p) -> FormWeight:
    """The constant weight mu(X)**((2-p)/p), the unique normalized form."""
    p = Exponent.of(p)
    _require_p_ge_2(p)
    if isinstance(space, SymbolicDomain):
        if not space.is_finite:
            raise ValueError("normalized form needs a finite-measure domain")
        return FormWeight(space.unit(), p)
    mass = space.total_mass
    level = mass ** ((2.0 - float(p)) / float(p))
    return FormWeight(DiscreteFunction(space, np.full(space.n, level)), p)


@dataclass
class UniquenessReport:
    p: Exponent
    normalization_gap: float
    normalized: bool
    max_deviation: float
    deviation_tol: float

    @property
    def passed(self) -> bool:
        return (not self.normalized) or self.max_deviation <= self.deviation_tol


def uniqueness_check(omega: FormWeight, tol: float = 1e-9, deviation_tol: float = 1e-4) -> UniquenessReport:
    """If Omega(u, u) is within tol of ||u||_p**2, psi must be the constant level."""
    if not omega.is_discrete:
        raise ValueError("uniqueness is checked on the discrete backend")
    _require_p_ge_2(omega.p)
    space = omega.psi.space
    target = space.total_mass ** (2.0 / float(omega.p))
    value = diagonal(omega, space.unit())
    gap = target - value
    level = space.total_mass ** ((2.0 - float(omega.p)) / float(omega.p))
    dev = float(np.max(np.abs(omega.psi.real - level)))
    return UniquenessReport(omega.p, gap, gap <= tol, dev, deviation_tol)


# --------------------------------------------------------------------------
# p < 2


def admissible_witness_exponents(p):
    """Open-closed range (-1/p, -1/2] of a with x**a in L^p but not L^2."""
    p = Exponent.of(p)
    lo, hi = -p.recip, Fraction(-1, 2)
    return lo, hi


@dataclass
class DivergenceWitness:
    f: SymbolicFunction
    exponent: Fraction
    in_lp: bool
    in_l2: bool
    form_value: float
    scan: quadrature.BlowupScan

    @property
    def certified(self) -> bool:
        return self.in_lp and not self.in_l2 and math.isinf(self.form_value) and self.scan.diverged


def divergence_witness(p, omega: FormWeight, alpha: float = 1.0, threshold: float = 1e6,
                       max_halvings: int = 40) -> DivergenceWitness:
    """f = x**a on (0, 1] with f in L^p, f not in L^2, so Omega(f, f) = inf.

    ``a`` is the midpoint of the admissible range in the reciprocal scale,
    -(1/p + 1/2)/2, strictly inside so the truncated integrals grow like a
    power of 1/eps. ``alpha`` is a lower bound for psi on (0, 1]; the scan
    records ∫_eps^1 |f|**2 psi for eps = 2**-k.
    """
    p = Exponent.of(p)
    if p.recip <= Fraction(1, 2):
        raise ValueError(f"no function in L^{p} outside L^2 on a finite domain: needs p < 2")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lo, hi = admissible_witness_exponents(p)
    a = (lo + hi) / 2
    if not isinstance(omega.psi, SymbolicFunction):
        raise ValueError("the witness lives on a symbolic domain")
    floor = sum(float(t.c) for t in omega.psi.on(Support.NEAR_ZERO) if t.a <= 0)
    if alpha > floor:
        raise ValueError(f"psi is not bounded below by {alpha} on (0, 1]")
    domain = omega.psi.domain
    f = SymbolicFunction([Term(1, a, Support.NEAR_ZERO)], domain)
    integrand = f * f * omega.psi
    near = integrand.on(Support.NEAR_ZERO)
    scan = quadrature.blowup_scan([float(t.c) for t in near], [float(t.a) for t in near], 1.0,
                                  threshold, max_halvings)
    return DivergenceWitness(f, a, in_lp(f, p), in_lp(f, 2), diagonal(omega, f), scan)
