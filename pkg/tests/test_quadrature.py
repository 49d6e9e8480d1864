import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from cqlp import quadrature as q


@pytest.mark.parametrize("c,a,p", [(1.0, -1 / 3, 2.0), (2.0, -0.45, 2.0), (0.5, 1.5, 3.0), (1.0, -0.2, 4.0)])
def test_single_term_near_zero_closed_form(c, a, p):
    exact = c**p / (a * p + 1)
    assert q.near_zero_integral([c], [a], p) == pytest.approx(exact, rel=1e-9)


@pytest.mark.parametrize("c,a,p", [(1.0, -1.0, 2.0), (3.0, -0.6, 2.0), (1.0, -2.0, 1.5)])
def test_single_term_tail_closed_form(c, a, p):
    exact = c**p / -(a * p + 1)
    assert q.tail_integral([c], [a], p) == pytest.approx(exact, rel=1e-9)


def test_two_term_sum_against_mpmath():
    coeffs, exps, p = [1.0, 2.0], [-0.4, 0.5], 2.0
    ref = mpmath.quad(lambda x: sum(c * x**a for c, a in zip(coeffs, exps)) ** p, [0, mpmath.mpf("1e-12"), 1])
    # the exact square expands into three power integrals
    exact = 1 / (1 - 0.8) + 4 / (0.1 + 1) + 4 / (2)
    assert float(ref) == pytest.approx(exact, rel=1e-6)
    assert q.near_zero_integral(coeffs, exps, p) == pytest.approx(exact, rel=1e-8)


@given(st.floats(-0.9, 2.0), st.floats(1.0, 4.0))
def test_unit_integral_matches_power_rule(e, p):
    assert q.unit_integral([1.0], [0.0], e, p) == pytest.approx(1 / (e + 1), rel=1e-8)


def test_divergent_endpoint_is_inf():
    assert math.isinf(q.unit_integral([1.0], [0.0], -1.0, 2.0))


@given(st.floats(-0.6, 0.5), st.floats(1.0, 3.0), st.integers(1, 30))
def test_truncated_single_term_matches_quadrature(a, p, k):
    eps = 2.0**-k
    closed = q.truncated_near_zero_integral([1.0], [a], p, eps)
    ref = float(mpmath.quad(lambda x: x ** (a * p), [eps, 1]))
    assert closed == pytest.approx(ref, rel=1e-8)


def test_truncated_multi_term_matches_expansion():
    eps = 2.0**-20
    got = q.truncated_near_zero_integral([1.0, 1.0], [-0.75, 0.0], 2.0, eps)
    # (x^-3/4 + 1)^2 = x^-3/2 + 2 x^-3/4 + 1
    exact = 2 * (eps**-0.5 - 1) + 8 * (1 - eps**0.25) + (1 - eps)
    assert got == pytest.approx(exact, rel=1e-8)


def test_blowup_scan_records_first_crossing():
    scan = q.blowup_scan([1.0], [-0.75], 2.0, threshold=1e3)
    # 2 (2^{k/2} - 1) > 1e3 first at k = 18
    assert scan.diverged and scan.exceeded_at == 18
    assert [k for k, _ in scan.values] == list(range(1, 19))
    calm = q.blowup_scan([1.0], [-0.25], 2.0, threshold=1e3)
    assert not calm.diverged and len(calm.values) == 40
