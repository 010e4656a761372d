"""Certified strict comparisons between the quantities in the bound chains.

A quantity knows a float approximation and can produce a rigorous rational
enclosure of any requested width.  ``compare`` decides ``lhs < rhs`` by the
cheapest sound route:

* both exact rationals, or a polynomial root against a rational: exact
  (Sturm counts, no rounding anywhere);
* otherwise a double-precision margin of at least ``FLOAT_MARGIN``;
* otherwise escalate to enclosures at ``ESCALATION_BITS`` of precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .polynomials import Polynomial, count_roots_above, isolate_largest_root, largest_root_exceeds

FLOAT_MARGIN = 1e-9
REPORT_WIDTH = Fraction(1, 10**30)
ESCALATION_BITS = 256


def _ivmpf_endpoint(x) -> Fraction:
    sign, man, exp, _ = x._mpi_[0]
    val = Fraction(int(man)) * (Fraction(2) ** exp)
    return -val if sign else val


class Quantity:
    exact_rational = False

    def approx(self) -> float:
        raise NotImplementedError

    def enclosure(self, width: Fraction) -> tuple[Fraction, Fraction]:
        raise NotImplementedError


@dataclass(frozen=True)
class Exact(Quantity):
    value: Fraction
    exact_rational = True

    def approx(self) -> float:
        return float(self.value)

    def enclosure(self, width):
        return self.value, self.value


@dataclass(frozen=True)
class Log2(Quantity):
    """log2 of a positive rational, optionally scaled: scale * log2(arg)."""

    arg: Fraction
    scale: Fraction = Fraction(1)
    base: int = 2

    def approx(self) -> float:
        return float(self.scale) * math.log(float(self.arg)) / math.log(self.base)

    def enclosure(self, width):
        bits = max(ESCALATION_BITS, int(-math.log2(float(width))) + 32) if width > 0 else ESCALATION_BITS
        iv = mpmath.iv
        old = iv.prec
        iv.prec = bits
        try:
            a = iv.mpf(self.arg.numerator) / iv.mpf(self.arg.denominator)
            s = iv.mpf(self.scale.numerator) / iv.mpf(self.scale.denominator)
            y = s * iv.log(a) / iv.log(iv.mpf(self.base))
            return _ivmpf_endpoint(y.a), _ivmpf_endpoint(y.b)
        finally:
            iv.prec = old


@dataclass(frozen=True)
class Sqrt(Quantity):
    arg: Fraction

    def approx(self) -> float:
        return math.sqrt(float(self.arg))

    def enclosure(self, width):
        # integer square roots of a scaled rational give a rigorous bracket
        bits = max(ESCALATION_BITS, int(-math.log2(float(width))) + 32) if width > 0 else ESCALATION_BITS
        scale = 1 << bits
        num = self.arg.numerator * scale * scale
        lo = Fraction(math.isqrt(num // self.arg.denominator), scale)
        hi = Fraction(math.isqrt(-(-num // self.arg.denominator)) + 1, scale)
        return lo, hi


@dataclass(frozen=True)
class RootOf(Quantity):
    """Largest real root of ``poly``, known to lie in (lo, hi]."""

    poly: Polynomial
    lo: Fraction
    hi: Fraction

    def approx(self) -> float:
        a, b = isolate_largest_root(self.poly, self.lo, self.hi, Fraction(1, 10**15))
        return float((a + b) / 2)

    def enclosure(self, width):
        return isolate_largest_root(self.poly, self.lo, self.hi, width)


@dataclass(frozen=True)
class Measured(Quantity):
    """A float known only to within ``error`` (e.g. a power-iteration residual)."""

    value: float
    error: float

    def approx(self) -> float:
        return self.value

    def enclosure(self, width):
        v = Fraction(self.value)
        e = Fraction(self.error)
        return v - e, v + e


@dataclass(frozen=True)
class Comparison:
    lhs: float
    rhs: float
    margin: float
    holds: bool
    method: str  # exact | float | interval | undecided

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
            "method": self.method,
        }


def _as_quantity(x) -> Quantity:
    if isinstance(x, Quantity):
        return x
    if isinstance(x, (int, Fraction)):
        return Exact(Fraction(x))
    if isinstance(x, float):
        return Measured(x, 0.0)
    raise TypeError(f"cannot compare {type(x).__name__}")


def precise_margin(lhs: Quantity, rhs: Quantity) -> float:
    """rhs - lhs evaluated from tight enclosures."""
    a_lo, a_hi = lhs.enclosure(REPORT_WIDTH)
    b_lo, b_hi = rhs.enclosure(REPORT_WIDTH)
    return float((b_lo + b_hi) / 2 - (a_lo + a_hi) / 2)


def compare(lhs, rhs, float_margin: float = FLOAT_MARGIN) -> Comparison:
    """Decide lhs < rhs (strict) with a sound method; see module docstring."""
    lhs, rhs = _as_quantity(lhs), _as_quantity(rhs)
    lf, rf = lhs.approx(), rhs.approx()
    if lhs.exact_rational and rhs.exact_rational:
        m = rhs.value - lhs.value
        return Comparison(lf, rf, float(m), m > 0, "exact")
    if isinstance(lhs, RootOf) and rhs.exact_rational:
        holds = not largest_root_exceeds(lhs.poly, rhs.value)
        return Comparison(lf, rf, precise_margin(lhs, rhs), holds, "exact")
    if lhs.exact_rational and isinstance(rhs, RootOf):
        holds = count_roots_above(rhs.poly, lhs.value) > 0
        return Comparison(lf, rf, precise_margin(lhs, rhs), holds, "exact")
    margin = rf - lf
    if margin >= float_margin:
        return Comparison(lf, rf, _report_margin(lhs, rhs, margin), True, "float")
    width = Fraction(1, 1 << ESCALATION_BITS)
    a_lo, a_hi = lhs.enclosure(width)
    b_lo, b_hi = rhs.enclosure(width)
    precise = float((b_lo + b_hi) / 2 - (a_lo + a_hi) / 2)
    if a_hi < b_lo:
        return Comparison(lf, rf, precise, True, "interval")
    if a_lo >= b_hi:
        return Comparison(lf, rf, precise, False, "interval")
    return Comparison(lf, rf, precise, False, "undecided")


def _report_margin(lhs: Quantity, rhs: Quantity, fallback: float) -> float:
    if isinstance(lhs, Measured) or isinstance(rhs, Measured):
        return fallback
    return precise_margin(lhs, rhs)
