from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cqlp import gelfand
from cqlp.corpus import random_function, random_space
from cqlp.forms import FormWeight, diagonal
from cqlp.seminorms import random_ball_weights
from cqlp.spaces import DiscreteFunction, DiscreteSpace, norm

P_VALUES = [2, F(5, 2), 3, 4]


def _weights(space, p, rng, k=4):
    return [FormWeight(DiscreteFunction(space, w), p) for w in random_ball_weights(space, p, rng, k)]


def test_family_validation():
    s = DiscreteSpace([1.0, 1.0])
    with pytest.raises(ValueError):
        gelfand.MeasureFamily(s, [[-1.0, 0.0]], 2.0)
    with pytest.raises(ValueError):
        gelfand.MeasureFamily(s, [[2.0, 2.0]], 2.0)
    with pytest.raises(ValueError):
        gelfand.MeasureFamily(s, [[1.0, 1.0, 1.0]], 5.0)
    fam = gelfand.MeasureFamily(s, [[0.5, 1.0]], 2.0)
    assert gelfand.MeasureFamily.from_json(s, fam.to_json()).members.tolist() == [[0.5, 1.0]]


@given(st.integers(0, 10_000), st.sampled_from(P_VALUES))
def test_form_measures_respect_uniform_bound(seed, p):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(1, 7)))
    fam = gelfand.measures_from_forms(_weights(space, p, rng))
    assert np.all(fam.members.sum(axis=1) <= fam.C * (1 + 1e-12))
    assert gelfand.family_axioms_check(fam, 2, seed=seed, n_samples=20).passed


@given(st.integers(0, 10_000), st.sampled_from(P_VALUES))
def test_sup_norm_is_sqrt_of_max_form_value(seed, p):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(1, 7)))
    f = random_function(rng, space)
    ws = _weights(space, p, rng)
    fam = gelfand.measures_from_forms(ws)
    assert gelfand.sup_norm(f, 2, fam) == pytest.approx(max(diagonal(w, f) for w in ws) ** 0.5, rel=1e-12)


@given(st.integers(0, 10_000), st.sampled_from(P_VALUES))
def test_transform_is_isometric_with_extremal_weight(seed, p):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(1, 7)))
    f = random_function(rng, space)
    rep = gelfand.transform(f, gelfand.extremal_family(f, p, _weights(space, p, rng)), p, seed=seed)
    assert rep.certified and rep.all_properties
    assert rep.isometry_gap <= 1e-9 * max(1.0, rep.lp_norm)


def test_transform_without_extremal_is_a_lower_bound(rng):
    space = random_space(rng, 6)
    f = random_function(rng, space)
    rep = gelfand.transform(f, _weights(space, 3, rng, 8), 3)
    assert not rep.certified
    assert rep.embedded_norm <= norm(f, 3) * (1 + 1e-12)


def test_zero_function_is_not_certified():
    space = DiscreteSpace([1.0, 2.0])
    zero = DiscreteFunction(space, [0.0, 0.0])
    w = FormWeight(DiscreteFunction(space, [0.1, 0.1]), 3)
    rep = gelfand.transform(zero, [w], 3)
    assert rep.embedded_norm == 0.0 and rep.injective and not rep.certified
