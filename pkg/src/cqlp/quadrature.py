"""Integrals of positive power sums on (0, 1] and (1, inf).

Every integrand here has the form ``(sum_k c_k x**a_k) ** p``. The power
singularity at the endpoint is absorbed by the substitution x = t**k
before handing the (now bounded) integrand to QUADPACK's adaptive
Gauss-Kronrod routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

REL_TOL = 1e-9


def _adaptive(fn, a: float, b: float, rel_tol: float) -> float:
    value, _err = integrate.quad(fn, a, b, epsabs=0.0, epsrel=rel_tol, limit=400)
    return value


def unit_integral(coeffs: Sequence[float], shifts: Sequence[float], e: float, p: float,
                  rel_tol: float = REL_TOL) -> float:
    """∫_0^1 t**e (sum c_k t**d_k)**p dt for d_k >= 0 and e > -1."""
    if e <= -1:
        return math.inf
    c = np.asarray(coeffs, dtype=float)
    d = np.asarray(shifts, dtype=float)
    if e < 0:
        k = 1.0 / (e + 1.0)

        def fn(s):
            return k * float(np.sum(c * s ** (k * d))) ** p
    else:

        def fn(t):
            return t ** e * float(np.sum(c * t ** d)) ** p

    return _adaptive(fn, 0.0, 1.0, rel_tol)


def near_zero_integral(coeffs, exps, p: float, rel_tol: float = REL_TOL) -> float:
    """∫_0^1 (sum c_k x**a_k)**p dx."""
    a = np.asarray(exps, dtype=float)
    m = float(a.min())
    return unit_integral(coeffs, a - m, m * p, p, rel_tol)


def tail_integral(coeffs, exps, p: float, rel_tol: float = REL_TOL) -> float:
    """∫_1^inf (sum c_k x**a_k)**p dx, via x = 1/s."""
    a = np.asarray(exps, dtype=float)
    top = float(a.max())
    return unit_integral(coeffs, top - a, -top * p - 2.0, p, rel_tol)


def truncated_near_zero_integral(coeffs, exps, p: float, eps: float,
                                 rel_tol: float = REL_TOL) -> float:
    """∫_eps^1 (sum c_k x**a_k)**p dx, integrated in u = -log x."""
    c = np.asarray(coeffs, dtype=float)
    a = np.asarray(exps, dtype=float)
    if len(c) == 1:
        e = a[0] * p + 1.0
        cp = c[0] ** p
        if e == 0.0:
            return cp * math.log(1.0 / eps)
        return cp * (1.0 - eps ** e) / e
    upper = math.log(1.0 / eps)

    def fn(u):
        return float(np.sum(c * np.exp(-a * u))) ** p * math.exp(-u)

    return _adaptive(fn, 0.0, upper, rel_tol)


@dataclass
class BlowupScan:
    """Truncated integrals on (2**-k, 1] for k = 1, 2, ..."""

    threshold: float
    values: list[tuple[int, float]] = field(default_factory=list)
    exceeded_at: int | None = None

    @property
    def diverged(self) -> bool:
        return self.exceeded_at is not None


def blowup_scan(coeffs, exps, p: float, threshold: float = 1e6, max_halvings: int = 40) -> BlowupScan:
    scan = BlowupScan(threshold)
    for k in range(1, max_halvings + 1):
        v = truncated_near_zero_integral(coeffs, exps, p, 2.0 ** -k)
        scan.values.append((k, v))
        if v > threshold:
            scan.exceeded_at = k
            break
    return scan
