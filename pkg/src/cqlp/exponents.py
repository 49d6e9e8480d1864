"""Exact arithmetic on extended Hölder exponents and exponent intervals.

An exponent p in [1, inf] is stored through its reciprocal 1/p, an exact
``Fraction`` in [0, 1] (1/inf = 0). Every identity used downstream
(conjugates, Hölder triples, interval sums) is linear in the reciprocal,
so nothing here ever touches a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

RationalLike = Union[int, Fraction, str]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("bool is not an exponent")
    if isinstance(x, float):
        raise TypeError(f"exponents are exact; got float {x!r}, pass a Fraction or str")
    return Fraction(x)


@total_ordering
@dataclass(frozen=True)
class Exponent:
    """An exponent in [1, inf], held as its exact reciprocal."""

    recip: Fraction

    def __post_init__(self):
        r = _as_fraction(self.recip)
        if not (_ZERO <= r <= _ONE):
            raise ValueError(f"exponent reciprocal {r} outside [0, 1]")
        object.__setattr__(self, "recip", r)

    @classmethod
    def of(cls, value) -> "Exponent":
        """Build from an int, Fraction, ``"inf"``/``math.inf`` or a string like ``"5/2"``."""
        if isinstance(value, Exponent):
            return value
        if value is math.inf or (isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞")):
            return cls(_ZERO)
        v = _as_fraction(value)
        if v < 1:
            raise ValueError(f"exponent {v} is below 1")
        return cls(1 / v)

    @classmethod
    def from_recip(cls, recip) -> "Exponent":
        return cls(_as_fraction(recip))

    @property
    def is_inf(self) -> bool:
        return self.recip == 0

    @property
    def value(self):
        """``Fraction`` for finite exponents, ``math.inf`` otherwise."""
        return math.inf if self.is_inf else 1 / self.recip

    def __float__(self) -> float:
        return math.inf if self.is_inf else float(1 / self.recip)

    def __lt__(self, other):
        other = Exponent.of(other)
        return self.recip > other.recip

    def __eq__(self, other):
        try:
            other = Exponent.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.recip == other.recip

    def __hash__(self):
        return hash(("Exponent", self.recip))

    def scaled(self, factor) -> "Exponent":
        """The exponent ``factor * p``; must stay >= 1."""
        factor = _as_fraction(factor)
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return Exponent.from_recip(self.recip / factor)

    def __str__(self):
        if self.is_inf:
            return "inf"
        v = 1 / self.recip
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __repr__(self):
        return f"Exponent({self})"

    def to_json(self):
        if self.is_inf:
            return "inf"
        v = 1 / self.recip
        return {"num": v.numerator, "den": v.denominator}

    @classmethod
    def from_json(cls, obj) -> "Exponent":
        if isinstance(obj, str):
            return cls.of(obj)
        if isinstance(obj, dict):
            return cls.of(Fraction(int(obj["num"]), int(obj["den"])))
        if isinstance(obj, int) and not isinstance(obj, bool):
            return cls.of(obj)
        raise ValueError(f"not an exponent: {obj!r}")


INF = Exponent(_ZERO)


def conjugate(p) -> Exponent:
    """Hölder conjugate p' with 1/p + 1/p' = 1."""
    p = Exponent.of(p)
    return Exponent.from_recip(1 - p.recip)


def gamma_exponent(p) -> Exponent:
    """p/(p-2), with the value inf at p = 2."""
    p = Exponent.of(p)
    if p.recip > Fraction(1, 2):
        raise ValueError(f"gamma exponent needs p >= 2, got {p}")
    return Exponent.from_recip(1 - 2 * p.recip)


def holder_combine(p, q) -> Exponent:
    """r with 1/r = 1/p + 1/q."""
    p, q = Exponent.of(p), Exponent.of(q)
    s = p.recip + q.recip
    if s > 1:
        raise ValueError(f"1/{p} + 1/{q} > 1; the combined exponent would fall below 1")
    return Exponent.from_recip(s)


@dataclass(frozen=True)
class ReciprocalInterval:
    """An interval of reciprocals 1/q inside [0, 1].

    Open/closed flags are kept exactly; ``lo > hi`` or a degenerate open
    interval means empty, and every empty instance compares equal to
    ``ReciprocalInterval.empty()``.
    """

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        lc, hc = bool(self.lo_closed), bool(self.hi_closed)
        if lo > hi or (lo == hi and not (lc and hc)):
            lo, hi, lc, hc = _ONE, _ONE, False, False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_closed", lc)
        object.__setattr__(self, "hi_closed", hc)

    @classmethod
    def empty(cls) -> "ReciprocalInterval":
        return cls(_ONE, _ONE, False, False)

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def __contains__(self, x) -> bool:
        if self.is_empty:
            return False
        x = Fraction(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def intersect(self, other: "ReciprocalInterval") -> "ReciprocalInterval":
        if self.is_empty or other.is_empty:
            return ReciprocalInterval.empty()
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return ReciprocalInterval(lo, hi, lc, hc)

    def minkowski_sum(self, other: "ReciprocalInterval") -> tuple[Fraction, Fraction, bool, bool] | None:
        """Endpoints of {x + y}; may leave [0, 1], so returned raw."""
        if self.is_empty or other.is_empty:
            return None
        return (
            self.lo + other.lo,
            self.hi + other.hi,
            self.lo_closed and other.lo_closed,
            self.hi_closed and other.hi_closed,
        )

    def reflect(self, t) -> tuple[Fraction, Fraction, bool, bool]:
        """Endpoints of {t - x : x in self}."""
        t = Fraction(t)
        return (t - self.hi, t - self.lo, self.hi_closed, self.lo_closed)

    def pick(self) -> Fraction:
        """A canonical member: the single point, else the midpoint."""
        if self.is_empty:
            raise ValueError("empty interval has no members")
        return (self.lo + self.hi) / 2

    def to_exponents(self) -> "ExponentInterval":
        if self.is_empty:
            return ExponentInterval.empty()
        return ExponentInterval(
            Exponent.from_recip(self.hi),
            Exponent.from_recip(self.lo),
            self.hi_closed,
            self.lo_closed,
        )


@dataclass(frozen=True)
class ExponentInterval:
    """An order interval of exponents with explicit endpoint flags.

    The canonical empty interval is ``(1, 1)`` with both ends open.
    """

    lower: Exponent
    upper: Exponent
    lower_closed: bool = True
    upper_closed: bool = True

    def __post_init__(self):
        lo, hi = Exponent.of(self.lower), Exponent.of(self.upper)
        lc, hc = bool(self.lower_closed), bool(self.upper_closed)
        if lo > hi or (lo == hi and not (lc and hc)):
            lo, hi, lc, hc = Exponent.of(1), Exponent.of(1), False, False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "lower_closed", lc)
        object.__setattr__(self, "upper_closed", hc)

    @classmethod
    def empty(cls) -> "ExponentInterval":
        return cls(Exponent.of(1), Exponent.of(1), False, False)

    @classmethod
    def point(cls, q) -> "ExponentInterval":
        q = Exponent.of(q)
        return cls(q, q, True, True)

    @classmethod
    def full(cls) -> "ExponentInterval":
        """[1, inf]."""
        return cls(Exponent.of(1), INF, True, True)

    @property
    def is_empty(self) -> bool:
        return self.lower == self.upper and not (self.lower_closed and self.upper_closed)

    def __contains__(self, q) -> bool:
        return Exponent.of(q).recip in self.reciprocal()

    def reciprocal(self) -> ReciprocalInterval:
        """The image {1/q : q in I}, an interval in [0, 1]."""
        if self.is_empty:
            return ReciprocalInterval.empty()
        return ReciprocalInterval(self.upper.recip, self.lower.recip, self.upper_closed, self.lower_closed)

    def intersect(self, other: "ExponentInterval") -> "ExponentInterval":
        return self.reciprocal().intersect(other.reciprocal()).to_exponents()

    def finite_part(self) -> "ExponentInterval":
        """Drop the point inf, leaving the part inside [1, inf)."""
        if self.is_empty or not (self.upper.is_inf and self.upper_closed):
            return self
        return ExponentInterval(self.lower, self.upper, self.lower_closed, False)

    def __str__(self):
        if self.is_empty:
            return "∅"
        return f"{'[' if self.lower_closed else '('}{self.lower}, {self.upper}{']' if self.upper_closed else ')'}"

    def to_json(self):
        return {
            "lo": self.lower.to_json(),
            "hi": self.upper.to_json(),
            "lo_closed": self.lower_closed,
            "hi_closed": self.upper_closed,
        }

    @classmethod
    def from_json(cls, obj) -> "ExponentInterval":
        return cls(
            Exponent.from_json(obj["lo"]),
            Exponent.from_json(obj["hi"]),
            bool(obj["lo_closed"]),
            bool(obj["hi_closed"]),
        )


def _contains_raw(bounds, t: Fraction) -> bool:
    lo, hi, lc, hc = bounds
    if t < lo or t > hi:
        return False
    if t == lo and not lc:
        return False
    if t == hi and not hc:
        return False
    return True


def reciprocal_sum_contains(I: ExponentInterval, J: ExponentInterval, p) -> bool:
    """Whether some r in I, s in J satisfy 1/r + 1/s = 1/p."""
    bounds = I.reciprocal().minkowski_sum(J.reciprocal())
    if bounds is None:
        return False
    return _contains_raw(bounds, Exponent.of(p).recip)


def reciprocal_split(I: ExponentInterval, J: ExponentInterval, p) -> tuple[Exponent, Exponent] | None:
    """An exact witness (r, s) for ``reciprocal_sum_contains``, or None.

    The witness is the midpoint of the feasible set of 1/r, namely
    1/I intersected with 1/p - 1/J.
    """
    if not reciprocal_sum_contains(I, J, p):
        return None
    t = Exponent.of(p).recip
    a = I.reciprocal()
    lo, hi, lc, hc = J.reciprocal().reflect(t)
    feasible = a.intersect(ReciprocalInterval(lo, hi, lc, hc))
    x = feasible.pick()
    return Exponent.from_recip(x), Exponent.from_recip(t - x)
