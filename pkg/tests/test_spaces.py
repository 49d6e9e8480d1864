import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cqlp.exponents import INF, Exponent, ExponentInterval
from cqlp.spaces import (
    DiscreteFunction,
    DiscreteSpace,
    Support,
    SymbolicDomain,
    SymbolicFunction,
    Term,
    cq_axioms_check,
    exponent_set,
    factorize,
    in_lp,
    multiplier_theorem_check,
    norm,
    operator_norm,
)

NZ, TL = Support.NEAR_ZERO, Support.TAIL
HL = SymbolicDomain.HALF_LINE
small_rat = st.fractions(min_value=F(-3, 2), max_value=F(3, 2), max_denominator=8)
pexp = st.sampled_from([1, F(4, 3), F(3, 2), 2, F(5, 2), 3, 4, "inf"]).map(Exponent.of)


def vec(draw, n):
    return np.array(draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n)))


@st.composite
def discrete_pair(draw):
    n = draw(st.integers(1, 6))
    space = DiscreteSpace(draw(st.lists(st.floats(0.1, 3.0), min_size=n, max_size=n)))
    f = DiscreteFunction(space, vec(draw, n) + 1j * vec(draw, n))
    g = DiscreteFunction(space, vec(draw, n) + 1j * vec(draw, n))
    return space, f, g


def naive_norm(values, mu, p: Exponent):
    if p.is_inf:
        return float(np.max(np.abs(values)))
    pf = float(p)
    return float(np.sum(np.abs(values) ** pf * mu) ** (1 / pf))


# ---------------------------------------------------------------- discrete


def test_discrete_space_basics():
    s = DiscreteSpace([1.0, 2.0, 0.5])
    assert s.n == 3 and s.total_mass == 3.5
    assert DiscreteSpace.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        DiscreteSpace([1.0, 0.0])
    f = DiscreteFunction(s, [1, 2j, -3])
    assert DiscreteFunction.from_json(s, f.to_json()) == f
    assert (f * f.conj()).is_real


def test_backends_do_not_mix():
    s = DiscreteSpace([1.0])
    with pytest.raises(TypeError):
        DiscreteFunction(s, [1.0]) * SymbolicFunction.power(0)


@given(discrete_pair(), pexp)
def test_discrete_norm_matches_naive_formula(data, p):
    space, f, _ = data
    assert norm(f, p) == pytest.approx(naive_norm(f.values, space.weights, p), rel=1e-12, abs=1e-300)


@given(discrete_pair(), pexp)
def test_holder_and_minkowski(data, p):
    space, f, g = data
    if p.recip < 1:
        pc = Exponent.from_recip(1 - p.recip)
        assert norm(f * g, 1) <= norm(f, p) * norm(g, pc) * (1 + 1e-12) + 1e-12
    assert norm(f + g, p) <= (norm(f, p) + norm(g, p)) * (1 + 1e-12) + 1e-12


@given(discrete_pair())
def test_algebra_laws(data):
    _, f, g = data
    assert np.allclose((f * g).values, (g * f).values)
    assert (f.conj()).conj() == f
    assert np.allclose((f * g).conj().values, (f.conj() * g.conj()).values)


@given(discrete_pair(), st.sampled_from([(2, 1), (4, 2), (3, F(3, 2)), ("inf", 2), (3, 3)]))
def test_operator_norm_equals_q_norm(data, pr):
    space, w, _ = data
    p, r = Exponent.of(pr[0]), Exponent.of(pr[1])
    q = Exponent.from_recip(r.recip - p.recip)
    assert operator_norm(w, p, r) == pytest.approx(naive_norm(w.values, space.weights, q), rel=1e-9, abs=1e-12)


def test_operator_norm_rejects_r_above_p():
    w = DiscreteFunction(DiscreteSpace([1.0]), [1.0])
    with pytest.raises(ValueError):
        operator_norm(w, 2, 3)


def test_cq_axioms_hold(rng):
    space = DiscreteSpace(rng.uniform(0.2, 2.0, size=5))
    for p in (1, 2, 3, "inf"):
        assert cq_axioms_check(space, p, seed=4, n_samples=50).passed


@given(st.lists(st.floats(0.0, 4.0), min_size=1, max_size=6))
def test_factorize_discrete_recovers_psi(vals):
    space = DiscreteSpace(np.ones(len(vals)))
    psi = DiscreteFunction(space, vals)
    a, b = factorize(psi, 1, 3, F(3, 2))
    assert np.allclose((a * b).values, psi.values)
    # ||a||_3^3 = ||psi||_1
    assert norm(a, 3) ** 3 == pytest.approx(norm(psi, 1), rel=1e-9, abs=1e-12)


# ---------------------------------------------------------------- symbolic


def test_symbolic_norm_examples():
    f = SymbolicFunction.power(F(-1, 3))
    assert norm(f, 2) == pytest.approx(math.sqrt(3), rel=1e-12)
    assert math.isinf(norm(f, 3))
    assert str(exponent_set(f)) == "[1, 3)"
    assert exponent_set(SymbolicFunction.power(0)) == ExponentInterval.full()
    tail = SymbolicFunction([Term(1, F(-1), TL)], HL)
    assert str(exponent_set(tail)) == "(1, inf]"


def test_symbolic_multi_term_norm_against_mpmath():
    f = SymbolicFunction([Term(2, F(-1, 4), NZ), Term(F(1, 3), F(1, 2), NZ), Term(1, F(-1), TL)], HL)
    for p in (2, 3):
        # x = t**4 removes the endpoint singularity
        near = mpmath.quad(lambda t: 4 * t**3 * (2 / t + t**2 / 3) ** p, [0, 1])
        tail = mpmath.quad(lambda x: x ** (-p), [1, mpmath.inf])
        assert norm(f, p) == pytest.approx(float((near + tail) ** (1 / p)), rel=1e-8)


def test_symbolic_sup_norm():
    f = SymbolicFunction([Term(2, F(1), NZ), Term(F(1, 2), F(0), NZ), Term(3, F(-2), TL)], HL)
    assert norm(f, INF) == pytest.approx(3.0)


@given(small_rat, small_rat, pexp)
def test_membership_is_the_integrability_rule(a, b, p):
    f = SymbolicFunction([Term(1, a, NZ), Term(1, b, TL)], HL)
    if p.is_inf:
        expect = a >= 0 and b <= 0
    else:
        expect = a * p.value > -1 and b * p.value < -1
    assert in_lp(f, p) == expect
    assert (p in exponent_set(f)) == expect


@given(small_rat, small_rat, small_rat, small_rat)
def test_exponent_set_of_sum_is_intersection(a1, b1, a2, b2):
    f = SymbolicFunction([Term(1, a1, NZ), Term(1, b1, TL)], HL)
    g = SymbolicFunction([Term(1, a2, NZ), Term(1, b2, TL)], HL)
    assert exponent_set(f + g) == exponent_set(f).intersect(exponent_set(g))


@given(small_rat, small_rat)
def test_product_exponent_is_sum(a, b):
    f, g = SymbolicFunction.power(a), SymbolicFunction.power(b)
    assert exponent_set(f * g) == exponent_set(SymbolicFunction.power(a + b))


def test_symbolic_json_roundtrip():
    f = SymbolicFunction([Term(F(2, 3), F(-1, 4), NZ), Term(1, F(-2), TL)], HL)
    assert SymbolicFunction.from_json(f.to_json()) == f


def test_factorize_symbolic():
    psi = SymbolicFunction([Term(F(1, 4), F(-1, 3), NZ)])
    a, b = factorize(psi, 2, 4, 4)
    assert a * b == psi
    assert a.terms[0].a == F(-1, 6)


@given(st.fractions(min_value=F(-1), max_value=F(1), max_denominator=12),
       st.sampled_from([(2, 1), (4, 2), (3, 3), (4, F(4, 3)), (6, 3)]))
def test_multiplier_lemma_both_sides_agree(a, pr):
    for support, dom in ((NZ, SymbolicDomain.UNIT_INTERVAL), (TL, HL)):
        g = SymbolicFunction([Term(1, a, support)], dom)
        rep = multiplier_theorem_check(g, *pr)
        assert rep.consistent, (a, pr, support)
