from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cqlp import seminorms as sn
from cqlp.corpus import random_function, random_space
from cqlp.exponents import Exponent
from cqlp.spaces import DiscreteFunction, DiscreteSpace, SymbolicFunction, norm

P_VALUES = [2, F(5, 2), 3, 4]
seeds = st.integers(0, 100_000)


def _setup(seed, kind="complex", max_n=7):
    rng = np.random.default_rng(seed)
    space = random_space(rng, int(rng.integers(1, max_n)))
    return rng, space, random_function(rng, space, kind)


@given(seeds, st.sampled_from(P_VALUES))
def test_alpha_random_search_never_exceeds_closed_form(seed, p):
    _, _, f = _setup(seed)
    res = sn.alpha_norm(f, p, "optimize", seed=seed, n_random=32, include_extremal=False)
    assert res.value <= norm(f, p) * (1 + 1e-12)
    full = sn.alpha_norm(f, p, "optimize", seed=seed, n_random=8)
    assert full.value == pytest.approx(norm(f, p), rel=1e-9)


def test_alpha_rejects_p_below_two():
    f = DiscreteFunction(DiscreteSpace([1.0]), [1.0])
    with pytest.raises(ValueError):
        sn.alpha_norm(f, F(3, 2))


def _beta_grid_oracle(g, mu, p, steps=6):
    """Independent oracle: grid over h in [0,1]^n; psi from the Hölder-dual formula on g*h."""
    half = float(p) / 2
    best = 0.0
    for h in product(np.linspace(0, 1, steps), repeat=len(g)):
        gh = g * np.array(h)
        for part in (np.maximum(gh, 0), np.maximum(-gh, 0)):
            best = max(best, float(np.sum(part**half * mu) ** (1 / half)))
    return best


@given(seeds, st.sampled_from(P_VALUES))
def test_beta_vertex_search_matches_grid_oracle(seed, p):
    _, space, f = _setup(seed, "real", max_n=5)
    v, _ = sn.beta_vertex_search(f, p)
    assert v == pytest.approx(_beta_grid_oracle(f.real, space.weights, Exponent.of(p)), rel=1e-12)


@given(seeds, st.sampled_from(P_VALUES))
def test_beta_equals_half_norm_for_positive_f(seed, p):
    _, _, f = _setup(seed, "positive")
    half = Exponent.of(p).scaled(F(1, 2))
    assert sn.beta_norm(f, p, "optimize").value == pytest.approx(norm(f, half), rel=1e-12)
    assert sn.beta_norm(f, p).value == pytest.approx(norm(f, half), rel=1e-12)


def test_beta_dual_maximizer_attains(rng):
    space = random_space(rng, 5)
    g = rng.standard_normal(5)
    p = Exponent.of(3)
    psi = sn.dual_maximizer(g, space.weights, p)
    assert np.all(psi >= 0)
    val = float(np.sum(np.maximum(g, 0) * psi * space.weights))
    half = p.scaled(F(1, 2))
    assert val == pytest.approx(norm(DiscreteFunction(space, np.maximum(g, 0)), half), rel=1e-9)


def test_beta_complex_projected_gradient_is_bounded(rng):
    space = random_space(rng, 4)
    f = random_function(rng, space)
    res = sn.beta_norm(f, 4, "optimize", seed=3)
    assert res.value <= norm(f, 2) + 1e-9
    # at least as good as the best real-axis rotation
    rot = max(sn._dual_sup(np.real(np.exp(1j * t) * f.values), space.weights, Exponent.of(4))
              for t in np.linspace(0, 2 * np.pi, 64))
    assert res.value >= rot * (1 - 1e-3)
    with pytest.raises(ValueError):
        sn.beta_norm(f, 4, "closed")


@given(seeds, st.sampled_from(P_VALUES))
def test_gamma_optimizer_is_sup_norm(seed, p):
    _, _, f = _setup(seed)
    res = sn.gamma_norm(f, p, "optimize", seed=seed, n_random=16)
    assert res.value == pytest.approx(float(np.abs(f.values).max()), rel=1e-12)


def test_gamma_membership_symbolic():
    assert sn.gamma_membership(SymbolicFunction.power(F(1, 2)), 2)
    assert not sn.gamma_membership(SymbolicFunction.power(F(-1, 8)), 2)


@given(seeds, st.sampled_from(P_VALUES))
def test_rescaled_weight_stays_in_ball(seed, p):
    rng, space, phi = _setup(seed)
    psi = sn.random_ball_weights(space, p, rng, 1)[0]
    from cqlp.forms import FormWeight

    w = sn.rescaled_weight(FormWeight(DiscreteFunction(space, psi), p), phi)
    assert w.ball_norm() <= 1 + 1e-12


def test_random_ball_weights_on_sphere(rng):
    space = random_space(rng, 6)
    for p in P_VALUES:
        q = Exponent.of(p)
        from cqlp.exponents import gamma_exponent

        for psi in sn.random_ball_weights(space, p, rng, 10):
            assert norm(DiscreteFunction(space, psi), gamma_exponent(q)) == pytest.approx(1.0, rel=1e-12)
