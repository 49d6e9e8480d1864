from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cqlp import gns
from cqlp.corpus import half_line_corpus, random_function, random_space, unit_interval_corpus
from cqlp.exponents import gamma_exponent
from cqlp.forms import FormWeight, evaluate
from cqlp.seminorms import random_ball_weights
from cqlp.spaces import DiscreteFunction, DiscreteSpace, Support, SymbolicDomain, SymbolicFunction, Term, norm


def _model(seed, p=3, zero_atoms=True):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(2, 8)))
    psi = random_ball_weights(space, p, rng, 1)[0]
    if zero_atoms:
        psi[0] = 0.0
        psi[1] = max(psi[1], 0.5)
        psi /= norm(DiscreteFunction(space, psi), gamma_exponent(p))
    return rng, space, gns.build(space, FormWeight(DiscreteFunction(space, psi), p))


@given(st.integers(0, 10_000))
def test_inner_product_is_the_form(seed):
    rng, space, model = _model(seed)
    f, g = random_function(rng, space), random_function(rng, space)
    assert model.inner(model.vector(f), model.vector(g)) == pytest.approx(evaluate(model.w, f, g), rel=1e-12,
                                                                           abs=1e-14)


def test_kernel_is_the_null_atoms():
    rng, space, model = _model(7)
    assert 0 in model.kernel_atoms and model.dimension == space.n - len(model.kernel_atoms)
    f = random_function(rng, space)
    bumped = f.values.copy()
    bumped[0] += 10.0
    assert model.same_class(f, DiscreteFunction(space, bumped))
    assert model.to_json()["kernel"] == [space.atoms[i] for i in model.kernel_atoms]
    assert len(model.to_json()["hweights"]) == model.dimension


@given(st.integers(0, 10_000))
def test_representation_norm_is_sup_on_support(seed):
    rng, space, model = _model(seed)
    f = random_function(rng, space)
    op = gns.represent(model, f)
    mask = model.support_mask
    assert op.op_norm == float(np.abs(f.values[mask]).max())
    rep = gns.domain_check(model, f)
    assert rep.in_domain and rep.consistent


@pytest.mark.parametrize("p", [2, 3, 4])
def test_representation_axioms(p):
    for seed in range(10):
        _, _, model = _model(seed, p)
        assert gns.representation_axioms_check(model, seed=seed, n_samples=20).passed


def test_symbolic_domain_examples():
    unit = FormWeight(SymbolicDomain.UNIT_INTERVAL.unit(), 2)
    assert not gns.domain_check(unit, SymbolicFunction.power(F(-1, 8))).in_domain
    assert gns.domain_check(unit, SymbolicFunction.power(F(1, 2))).in_domain
    tail_only = FormWeight(SymbolicFunction([Term(1, F(0), Support.TAIL)], SymbolicDomain.HALF_LINE), 2)
    f = SymbolicFunction([Term(1, F(-1, 4), Support.NEAR_ZERO), Term(1, F(-1), Support.TAIL)])
    # unbounded only where the weight vanishes
    rep = gns.domain_check(tail_only, f)
    assert rep.in_domain and rep.bounded_on_support


def test_is_admissible():
    unit = FormWeight(SymbolicDomain.UNIT_INTERVAL.unit(), 2)
    bounded = [f for f in unit_interval_corpus() if all(t.a >= 0 for t in f.terms)]
    assert gns.is_admissible(unit, bounded)
    assert not gns.is_admissible(unit, unit_interval_corpus())
    assert half_line_corpus()  # corpus is non-empty
