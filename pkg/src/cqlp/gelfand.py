"""Measure families, the norm ||.||_{p,I}, and the Gel'fand-type embedding.

The characters of the discrete C(X) are the atom evaluations, so the
Gel'fand transform is the identity on values. All content is in the
norm: ||Phi(f)||_{2,I} is the sup over the family of the L^2(mu_alpha)
norms, and isometry is certified through the extremal weight of f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from cqlp.exponents import Exponent
from cqlp.forms import FormWeight, extremal_weight
from cqlp.spaces import DiscreteFunction, DiscreteSpace, _discrete_norm, norm


@dataclass(frozen=True)
class MeasureFamily:
    base: DiscreteSpace
    members: np.ndarray
    C: float

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.members, dtype=float))
        if m.shape[1] != self.base.n:
            raise ValueError("each member needs one mass per atom")
        if np.any(m < 0):
            raise ValueError("member masses must be nonnegative")
        if np.any(m.sum(axis=1) > self.C * (1 + 1e-12)):
            raise ValueError("a member exceeds the uniform mass bound C")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    def __len__(self):
        return self.members.shape[0]

    def to_json(self):
        return {"C": self.C, "members": self.members.tolist()}

    @classmethod
    def from_json(cls, base: DiscreteSpace, obj) -> "MeasureFamily":
        return cls(base, np.asarray(obj["members"], dtype=float), float(obj["C"]))


def member_norms(phi: DiscreteFunction, p, fam: MeasureFamily) -> np.ndarray:
    p = Exponent.of(p)
    return np.array([_member_norm(phi.values, m, p) for m in fam.members])


def _member_norm(values, masses, p: Exponent) -> float:
    if p.is_inf:
        live = masses > 0
        return float(np.abs(values[live]).max()) if live.any() else 0.0
    return _discrete_norm(values, masses, p)


def sup_norm(phi: DiscreteFunction, p, fam: MeasureFamily) -> float:
    """max over the family of ||phi||_{p, mu_alpha}."""
    if len(fam) == 0:
        raise ValueError("empty measure family")
    return float(member_norms(phi, p, fam).max())


@dataclass
class FamilyAxiomReport:
    checked: int
    involution_max_gap: float
    module_worst_slack: float
    bound_worst_slack: float
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def family_axioms_check(fam: MeasureFamily, p, seed: int = 0, n_samples: int = 200,
                        rel_tol: float = 1e-12) -> FamilyAxiomReport:
    """||phi*||_{p,I} = ||phi||_{p,I} and ||phi psi||_{p,I} <= ||phi||_{p,I} ||psi||_inf.

    Also records the bound ||phi||_{p,I} <= C**(1/p) ||phi||_inf.
    """
    p = Exponent.of(p)
    rng = np.random.default_rng(seed)
    n = fam.base.n
    inv = mod = bnd = -math.inf
    fails = []
    for _ in range(n_samples):
        phi = DiscreteFunction(fam.base, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        psi = DiscreteFunction(fam.base, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        a = sup_norm(phi, p, fam)
        gap = abs(sup_norm(phi.conj(), p, fam) - a)
        inv = max(inv, gap)
        lhs = sup_norm(phi * psi, p, fam)
        rhs = a * float(np.abs(psi.values).max())
        mod = max(mod, lhs - rhs)
        cap = fam.C ** float(p.recip) * float(np.abs(phi.values).max())
        bnd = max(bnd, a - cap)
        if gap != 0.0 or lhs - rhs > rel_tol * max(rhs, 1.0) or a - cap > rel_tol * max(cap, 1.0):
            fails.append({"phi": phi.to_json(), "psi": psi.to_json()})
    return FamilyAxiomReport(n_samples, inv, mod, bnd, fails)


def measures_from_forms(weights: Sequence[FormWeight]) -> MeasureFamily:
    """mu_Omega has atom masses psi_i mu_i, since Omega(B, u) = sum B_i psi_i mu_i."""
    if not weights:
        raise ValueError("no weights")
    base = weights[0].psi.space
    for w in weights:
        if not w.is_discrete or w.psi.space != base:
            raise ValueError("all weights must live on the same discrete space")
    p = weights[0].p
    members = np.array([w.psi.real * base.weights for w in weights])
    return MeasureFamily(base, members, base.total_mass ** (2.0 / float(p)))


def phi_map(f: DiscreteFunction) -> DiscreteFunction:
    """The transform itself: identity on values (characters are atom evaluations)."""
    return DiscreteFunction(f.space, f.values)


@dataclass
class TransformReport:
    image: DiscreteFunction
    embedded_norm: float
    lp_norm: float
    isometry_gap: float
    certified: bool
    linear: bool
    injective: bool
    multiplicative: bool
    involutive: bool

    @property
    def all_properties(self) -> bool:
        return self.linear and self.injective and self.multiplicative and self.involutive

    def to_json(self):
        return {
            "image": self.image.to_json(),
            "embedded_norm": self.embedded_norm,
            "lp_norm": self.lp_norm,
            "isometry_gap": self.isometry_gap,
            "certified": self.certified,
            "linear": self.linear,
            "injective": self.injective,
            "multiplicative": self.multiplicative,
            "involutive": self.involutive,
        }


def transform(f: DiscreteFunction, weights: Sequence[FormWeight], p=None, seed: int = 0,
              n_samples: int = 16) -> TransformReport:
    """Embed f into L^2_I for the family built from ``weights``.

    The isometry claim is certified only when the family contains the
    extremal weight of f; otherwise the embedded norm is just a lower
    bound and ``certified`` is False.
    """
    p = Exponent.of(p) if p is not None else weights[0].p
    fam = measures_from_forms(weights)
    image = phi_map(f)
    emb = sup_norm(image, 2, fam)
    lp = norm(f, p)
    certified = False
    if lp > 0:
        ext = extremal_weight(f, p).psi.real
        certified = any(np.allclose(w.psi.real, ext, rtol=1e-12, atol=0) for w in weights)

    rng = np.random.default_rng(seed)
    n = f.space.n
    linear = multiplicative = involutive = True
    for _ in range(n_samples):
        g = DiscreteFunction(f.space, rng.standard_normal(n) + 1j * rng.standard_normal(n))
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        linear &= phi_map(a * f + b * g) == a * phi_map(f) + b * phi_map(g)
        multiplicative &= phi_map(f * g) == phi_map(f) * phi_map(g)
    involutive &= phi_map(f.conj()) == phi_map(f).conj()
    # injectivity: a nonzero f has a form with Omega(f, f) = ||f||_p**2 > 0
    injective = (emb > 0) == bool(np.any(f.values))
    return TransformReport(image, emb, lp, abs(emb - lp), certified, bool(linear), bool(injective),
                           bool(multiplicative), bool(involutive))


def extremal_family(f: DiscreteFunction, p, extra: Sequence[FormWeight] = ()) -> list[FormWeight]:
    """The weight set used for isometry certificates: extremal weight of f plus extras."""
    return [extremal_weight(f, p), *extra]
