"""The property suite: one check per acceptance criterion, each seeded and self-contained.

Every check returns a ``CriterionResult`` whose ``details`` hold the worst
observed slack and, on failure, the offending witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction as F

import numpy as np
from scipy.optimize import linprog

from cqlp import forms, gelfand, gns, partialmul, seminorms
from cqlp.corpus import corpus, random_function, random_space
from cqlp.exponents import Exponent, gamma_exponent
from cqlp.spaces import (
    DiscreteFunction,
    DiscreteSpace,
    Support,
    SymbolicDomain,
    SymbolicFunction,
    Term,
    _discrete_norm,
    in_lp,
    norm,
    operator_norm,
    operator_norm_random_search,
)


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key} {self.title}"

    def to_json(self):
        return {"key": self.key, "title": self.title, "passed": self.passed, "details": self.details}


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _bounded_by_exponents(f: SymbolicFunction) -> bool:
    return all(t.a >= 0 if t.support is Support.NEAR_ZERO else t.a <= 0 for t in f.terms)


# --------------------------------------------------------------------------


def alpha_theorem(seed: int = 1, n_funcs: int = 200) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst_over, worst_gap = -math.inf, 0.0
    bad = None
    for k in range(n_funcs):
        space = random_space(rng, int(rng.integers(1, 9)))
        f = random_function(rng, space)
        for p in (2, F(5, 2), 3, 4):
            closed = norm(f, p)
            plain = seminorms.alpha_norm(f, p, "optimize", seed=k, n_random=64, include_extremal=False).value
            full = seminorms.alpha_norm(f, p, "optimize", seed=k, n_random=64).value
            over = (plain - closed) / closed
            gap = _rel(full, closed)
            worst_over, worst_gap = max(worst_over, over), max(worst_gap, gap)
            if (over > 1e-12 or gap > 1e-6) and bad is None:
                bad = {"sample": k, "p": str(p), "closed": closed, "random": plain, "with_extremal": full}
    return CriterionResult("alpha", "alpha norm equals the L^p norm", bad is None,
                           {"worst_excess": worst_over, "worst_gap": worst_gap, "witness": bad})


_PR = [(2, 1), (3, 2), (4, 2), (4, F(4, 3)), ("inf", 2), (3, F(3, 2)), (6, 3), (F(5, 2), F(5, 4)),
       (3, 3), (5, 1)]


def operator_norm_lemma(seed: int = 2, n_cases: int = 100) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst_c = worst_r = 0.0
    bad = None
    for k in range(n_cases):
        p, r = (Exponent.of(x) for x in _PR[k % len(_PR)])
        q = Exponent.from_recip(r.recip - p.recip)
        space = random_space(rng, int(rng.integers(1, 9)))
        w = random_function(rng, space)
        exact = norm(w, q)
        cand = operator_norm(w, p, r, seed=k)
        search = operator_norm_random_search(w, p, r, seed=k)
        gc, gr = _rel(cand, exact), (exact - search) / exact
        worst_c, worst_r = max(worst_c, gc), max(worst_r, gr)
        if (gc > 1e-6 or gr > 1e-3 or search > exact * (1 + 1e-9)) and bad is None:
            bad = {"case": k, "p": str(p), "r": str(r), "exact": exact, "candidates": cand, "search": search}
    return CriterionResult("operator_norm", "multiplication operator norm is ||w||_q", bad is None,
                           {"worst_candidate_gap": worst_c, "worst_search_gap": worst_r, "witness": bad})


def _p2_lp_deviation(space: DiscreteSpace, tol: float) -> float:
    """Max |psi_i - 1| over the whole feasible polytope, by LP per coordinate."""
    n, mu = space.n, space.weights
    worst = 0.0
    for i in range(n):
        for sign in (1.0, -1.0):
            c = np.zeros(n)
            c[i] = sign
            res = linprog(c, A_ub=[-mu], b_ub=[-(space.total_mass - tol)], bounds=[(0, 1)] * n,
                          method="highs")
            worst = max(worst, abs(res.x[i] - 1.0))
    return worst


def uniqueness_normalized(seed: int = 3, n_samples: int = 10_000) -> CriterionResult:
    rng = np.random.default_rng(seed)
    details: dict = {}
    ok = True
    # p = 2: the ball is the cube [0,1]^n and the constraint is linear
    worst = 0.0
    for _ in range(20):
        space = random_space(rng, int(rng.integers(1, 9)))
        worst = max(worst, _p2_lp_deviation(space, 1e-9))
    details["p2_lp_max_deviation"] = worst
    ok &= worst < 1e-4
    for p in (3, 4):
        p = Exponent.of(p)
        q = gamma_exponent(p)
        space = random_space(rng, 5)
        level = space.total_mass ** ((2.0 - float(p)) / float(p))
        hits, dev = 0, 0.0
        for k in range(n_samples):
            if k % 2:
                psi = rng.exponential(size=space.n)
            else:
                delta = 10.0 ** -rng.uniform(1, 8)
                psi = level * (1 + delta * rng.standard_normal(space.n))
                psi = np.maximum(psi, 0.0)
            psi = psi / _discrete_norm(psi, space.weights, q)
            rep = forms.uniqueness_check(forms.FormWeight(DiscreteFunction(space, psi), p, check=False))
            if rep.normalized:
                hits += 1
                dev = max(dev, rep.max_deviation)
        details[f"p{p}_normalized_hits"] = hits
        details[f"p{p}_max_deviation"] = dev
        ok &= hits > 0 and dev < 1e-4
    return CriterionResult("uniqueness", "the normalized form is the constant weight", bool(ok), details)


def gamma_set(seed: int = 4, n_funcs: int = 200) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_funcs):
        space = random_space(rng, int(rng.integers(1, 9)))
        f = random_function(rng, space)
        p = (2, F(5, 2), 3, 4)[k % 4]
        v = seminorms.gamma_norm(f, p, "optimize", seed=k, n_random=32).value
        worst = max(worst, _rel(v, float(np.abs(f.values).max())))
    mismatches = []
    for dom in SymbolicDomain:
        for p in (2, 3):
            for i, f in enumerate(corpus(dom)):
                expect = in_lp(f, p) and _bounded_by_exponents(f)
                if seminorms.gamma_membership(f, p) != expect:
                    mismatches.append({"domain": dom.value, "p": p, "index": i})
    return CriterionResult("gamma_set", "gamma norm is the sup norm", worst <= 1e-9 and not mismatches,
                           {"worst_gap": worst, "membership_mismatches": mismatches})


def beta_bounds(seed: int = 5, n_funcs: int = 200) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst_excess = -math.inf
    worst_pos = 0.0
    exact_mismatch = []
    for k in range(n_funcs):
        p = (2, F(5, 2), 3, 4)[k % 4]
        half = Exponent.of(p).scaled(F(1, 2))
        kind = ("positive", "real", "complex")[k % 3]
        n = int(rng.integers(1, 13 if kind != "complex" else 7))
        space = random_space(rng, n)
        f = random_function(rng, space, kind)
        if kind == "complex":
            if k % 9:
                continue
            v = seminorms.beta_norm(f, p, "optimize", seed=k).value
        else:
            v = seminorms.beta_norm(f, p, "optimize").value
            closed = seminorms.beta_norm(f, p, "closed").value
            if v != closed:
                exact_mismatch.append({"sample": k, "closed": closed, "vertex": v})
        bound = norm(f, half)
        worst_excess = max(worst_excess, v - bound)
        if kind == "positive":
            worst_pos = max(worst_pos, _rel(v, bound))
    ok = worst_excess <= 1e-9 and worst_pos <= 1e-6 and not exact_mismatch
    return CriterionResult("beta", "beta norm bounds and the signed reduction", ok,
                           {"worst_excess": worst_excess, "worst_positive_gap": worst_pos,
                            "vertex_mismatches": exact_mismatch})


def collapse_below_two() -> CriterionResult:
    rows = {}
    ok = True
    for p in (1, F(3, 2), F(9, 5)):
        omega = forms.FormWeight(SymbolicDomain.UNIT_INTERVAL.unit(), p, check=False)
        w = forms.divergence_witness(p, omega)
        good = w.in_lp and not w.in_l2 and w.scan.exceeded_at is not None
        rows[str(Exponent.of(p))] = {
            "exponent": str(w.exponent),
            "in_lp": w.in_lp,
            "in_l2": w.in_l2,
            "exceeded_at_halving": w.scan.exceeded_at,
            "last_truncated_value": w.scan.values[-1],
        }
        ok &= good
    return CriterionResult("collapse", "no nonzero form for p < 2", bool(ok), rows)


def gamma_coherence(seed: int = 7) -> CriterionResult:
    counts = {}
    ok = True
    for dom in SymbolicDomain:
        c = corpus(dom)
        for p in (2, 3):
            sub = w_s = appr = 0
            for f in c:
                for g in c:
                    g1 = partialmul.gamma1_check(f, g, p)
                    g2, _ = partialmul.gamma2_check(f, g, p)
                    gw = partialmul.weak_mul_check(f, g, p, seed).in_gamma_w
                    gs = partialmul.strong_product(f, g, p) is not None
                    sub += g2 and not g1
                    w_s += (gw != g1) + (gs != g1)
                    appr += partialmul.approx_sequence_check(f, g, p).convergent != g1
            counts[f"{dom.value}/p={p}"] = {"gamma2_not_gamma1": sub, "weak_strong_mismatch": w_s,
                                            "approx_mismatch": appr}
            ok &= sub == 0 and w_s == 0 and appr == 0
    return CriterionResult("gamma_coherence", "Gamma sets are coherent", bool(ok), counts)


DEFAULT_GRID = tuple(F(k, 2) for k in range(-8, 9))


def distributivity(grid=DEFAULT_GRID) -> CriterionResult:
    half = partialmul.distributivity_witness_search(SymbolicDomain.HALF_LINE, 2, grid)
    unit = partialmul.distributivity_witness_search(SymbolicDomain.UNIT_INTERVAL, 2, grid)
    verified = half.witness is not None and partialmul.verify_distributivity_witness(*half.witness, 2)
    return CriterionResult("distributivity", "Gamma_2 distributivity fails on infinite measure",
                           verified and unit.exhausted,
                           {"half_line": half.to_json(), "unit_interval": unit.to_json()})


def _symbolic_weights(p) -> list[forms.FormWeight]:
    p = Exponent.of(p)
    q = gamma_exponent(p)
    out = [forms.FormWeight(SymbolicDomain.UNIT_INTERVAL.unit(), p),
           forms.FormWeight(SymbolicFunction([Term(1, F(1), Support.NEAR_ZERO)]), p)]
    hl = SymbolicDomain.HALF_LINE
    shapes = [[Term(1, F(0), Support.NEAR_ZERO)], [Term(1, F(-1), Support.TAIL)],
              [Term(1, F(0), Support.NEAR_ZERO), Term(1, F(-1), Support.TAIL)]]
    for terms in shapes:
        raw = SymbolicFunction(terms, hl)
        scale = norm(raw, q)
        out.append(forms.FormWeight(SymbolicFunction([Term(t.c / scale, t.a, t.support) for t in terms], hl), p))
    return out


def gns_domain(seed: int = 9, n_pairs: int = 50) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_pairs):
        p = (2, 3, 4)[k % 3]
        space = random_space(rng, int(rng.integers(1, 9)))
        psi = seminorms.random_ball_weights(space, p, rng, 1)[0]
        model = gns.build(space, forms.FormWeight(DiscreteFunction(space, psi), p))
        rep = gns.representation_axioms_check(model, seed=k, n_samples=4)
        worst = max(worst, rep.worst_form_gap, rep.worst_adjoint_gap)
    mismatches = []
    for p in (2, 3):
        for omega in _symbolic_weights(p):
            on = {t.support for t in omega.psi.terms}
            for i, f in enumerate(corpus(omega.psi.domain)):
                bounded = all(t.a >= 0 if t.support is Support.NEAR_ZERO else t.a <= 0
                              for t in f.terms if t.support in on)
                if gns.domain_check(omega, f).in_domain != (in_lp(f, p) and bounded):
                    mismatches.append({"p": p, "weight": omega.psi.to_json(), "index": i})
    return CriterionResult("gns", "GNS representation and the bounded domain", worst <= 1e-12 and not mismatches,
                           {"worst_gap": worst, "domain_mismatches": mismatches})


def gelfand_embedding(seed: int = 10, n_funcs: int = 100) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for k in range(n_funcs):
        p = (2, F(5, 2), 3, 4)[k % 4]
        space = random_space(rng, int(rng.integers(1, 9)))
        f = random_function(rng, space)
        extra = [forms.FormWeight(DiscreteFunction(space, w), p)
                 for w in seminorms.random_ball_weights(space, p, rng, 4)]
        rep = gelfand.transform(f, gelfand.extremal_family(f, p, extra), p, seed=k)
        worst = max(worst, rep.isometry_gap)
        if not (rep.certified and rep.all_properties and rep.isometry_gap <= 1e-6):
            failures.append({"sample": k, **{key: v for key, v in rep.to_json().items() if key != "image"}})
    return CriterionResult("gelfand", "isometric embedding into L^2_I", not failures,
                           {"worst_gap": worst, "failures": failures})


CRITERIA = {
    "alpha": alpha_theorem,
    "operator_norm": operator_norm_lemma,
    "uniqueness": uniqueness_normalized,
    "gamma_set": gamma_set,
    "beta": beta_bounds,
    "collapse": collapse_below_two,
    "gamma_coherence": gamma_coherence,
    "distributivity": distributivity,
    "gns": gns_domain,
    "gelfand": gelfand_embedding,
}


def run_all(keys=None) -> list[CriterionResult]:
    return [CRITERIA[k]() for k in (keys or CRITERIA)]
