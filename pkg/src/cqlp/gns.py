"""GNS data for a weight form: null atoms, L^2(w dmu), diagonal representation.

On a discrete space the quotient by the null space is an atom mask and
the completion is a no-op (finite dimension). For symbolic weights only
the bounded-multiplier domain is meaningful, and it is decided from
exponent signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cqlp.exponents import Exponent
from cqlp.forms import FormWeight, evaluate
from cqlp.spaces import DiscreteFunction, DiscreteSpace, Function, Support, SymbolicFunction, in_lp


@dataclass(frozen=True)
class GnsModel:
    base: DiscreteSpace
    p: Exponent
    w: FormWeight
    kernel_atoms: tuple[int, ...]
    hilbert_weights: np.ndarray
    dense_image: bool = True
    completion_needed: bool = False

    @property
    def support_mask(self) -> np.ndarray:
        return self.hilbert_weights > 0

    @property
    def dimension(self) -> int:
        return int(self.support_mask.sum())

    def vector(self, f: DiscreteFunction) -> np.ndarray:
        """lambda(f): the class of f, with null-atom coordinates zeroed."""
        return np.where(self.support_mask, f.values, 0.0)

    def inner(self, xi: np.ndarray, eta: np.ndarray) -> complex:
        return complex(np.sum(xi * np.conj(eta) * self.hilbert_weights))

    def same_class(self, f: DiscreteFunction, g: DiscreteFunction) -> bool:
        return bool(np.array_equal(self.vector(f), self.vector(g)))

    def to_json(self):
        return {
            "kernel": [self.base.atoms[i] for i in self.kernel_atoms],
            "hweights": self.hilbert_weights[self.support_mask].tolist(),
        }


def build(space: DiscreteSpace, w: FormWeight) -> GnsModel:
    if not w.is_discrete or w.psi.space != space:
        raise ValueError("the weight must live on the given discrete space")
    hw = w.psi.real * space.weights
    kernel = tuple(int(i) for i in np.flatnonzero(hw == 0))
    hw = hw.copy()
    hw.setflags(write=False)
    return GnsModel(space, w.p, w, kernel, hw)


@dataclass
class DiagonalOperator:
    diag: np.ndarray
    bounded: bool
    op_norm: float

    def apply(self, xi: np.ndarray) -> np.ndarray:
        return self.diag * xi

    def to_json(self):
        return {
            "diag_re": self.diag.real.tolist(),
            "diag_im": self.diag.imag.tolist(),
            "bounded": self.bounded,
            "op_norm": self.op_norm,
        }


def represent(model: GnsModel, f: DiscreteFunction) -> DiagonalOperator:
    """pi(f): multiplication by f on the non-null atoms."""
    mask = model.support_mask
    diag = np.where(mask, f.values, 0.0)
    op = float(np.abs(diag[mask]).max()) if mask.any() else 0.0
    return DiagonalOperator(diag, True, op)


@dataclass
class DomainReport:
    in_domain: bool
    ratio_sup: float
    linf_w_squared: float
    in_lp: bool
    bounded_on_support: bool

    @property
    def consistent(self) -> bool:
        if math.isinf(self.ratio_sup) or math.isinf(self.linf_w_squared):
            return math.isinf(self.ratio_sup) and math.isinf(self.linf_w_squared)
        return abs(self.ratio_sup - self.linf_w_squared) <= 1e-12 * max(1.0, self.linf_w_squared)


def domain_check(model_or_weight, f: Function) -> DomainReport:
    """Membership of f in D_Omega = {f : sup Omega(fB, fB)/Omega(B, B) < inf}.

    Discrete: the sup over atom indicators B, compared with ess-sup |f|**2
    on the support of w. Symbolic: f must be in L^p and bounded wherever w
    has a term.
    """
    if isinstance(model_or_weight, GnsModel):
        model = model_or_weight
        omega = model.w
        space = model.base
        best = 0.0
        for i in range(space.n):
            b = space.indicator(i)
            den = evaluate(omega, b, b).real
            if den > 0:
                best = max(best, evaluate(omega, f * b, f * b).real / den)
        mask = model.support_mask
        linf = float(np.abs(f.values[mask]).max() ** 2) if mask.any() else 0.0
        return DomainReport(True, best, linf, True, True)
    omega: FormWeight = model_or_weight
    if not isinstance(f, SymbolicFunction) or omega.is_discrete:
        raise ValueError("symbolic domain check needs a symbolic weight and function")
    supports = {t.support for t in omega.psi.terms}
    bounded = all(
        (t.a >= 0 if t.support is Support.NEAR_ZERO else t.a <= 0) for t in f.terms if t.support in supports
    )
    lp = in_lp(f, omega.p)
    sup = 0.0
    if bounded:
        sup = max((sum(float(t.c) for t in f.on(s)) ** 2 for s in supports), default=0.0)
    else:
        sup = math.inf
    return DomainReport(bounded and lp, sup, sup, lp, bounded)


@dataclass
class RepresentationReport:
    checked: int
    worst_form_gap: float
    worst_adjoint_gap: float
    tol: float
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def representation_axioms_check(model: GnsModel, seed: int = 0, n_samples: int = 100,
                                tol: float = 1e-12) -> RepresentationReport:
    """<pi(f) lambda(phi), lambda(psi)> = Omega(f phi, psi) and the adjoint identity."""
    rng = np.random.default_rng(seed)
    space = model.base
    n = space.n
    worst_f = worst_a = 0.0
    fails = []

    def rand():
        return DiscreteFunction(space, rng.standard_normal(n) + 1j * rng.standard_normal(n))

    for _ in range(n_samples):
        f, phi, psi = rand(), rand(), rand()
        op = represent(model, f)
        lhs = model.inner(op.apply(model.vector(phi)), model.vector(psi))
        rhs = evaluate(model.w, f * phi, psi)
        gap = abs(lhs - rhs) / max(1.0, abs(rhs))
        worst_f = max(worst_f, gap)
        adj = represent(model, f.conj())
        xi, eta = model.vector(phi), model.vector(psi)
        agap = abs(model.inner(op.apply(xi), eta) - model.inner(xi, adj.apply(eta)))
        agap /= max(1.0, abs(model.inner(op.apply(xi), eta)))
        worst_a = max(worst_a, agap)
        if gap > tol or agap > tol:
            fails.append({"f": f.to_json(), "phi": phi.to_json(), "psi": psi.to_json(), "gap": max(gap, agap)})
    return RepresentationReport(n_samples, worst_f, worst_a, tol, fails)


def is_admissible(omega: FormWeight, corpus) -> bool:
    """True iff every tested function lies in D_Omega (no general theory)."""
    return all(domain_check(omega, f).in_domain for f in corpus if in_lp(f, omega.p))
