"""Exact polynomial arithmetic and the recursions whose roots are
principal eigenvalues of Hamming balls and bricklayer's graphs.

All coefficients are :class:`fractions.Fraction`; floats only appear when a
root is reported.  Root location is certified with Sturm sequences, so every
claim of the form "largest root < t" for rational t is decided exactly.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Number = int | Fraction


class DomainError(ValueError):
    pass


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Polynomial:
    """Univariate polynomial with rational coefficients, index = power."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "Polynomial":
        out = cls([1])
        for r in roots:
            out = out * cls([-Fraction(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.format()

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                power = var if i == 1 else f"{var}^{i}"
                body = power if mag == 1 else f"{mag}*{power}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        if len(rem) - 1 < dq:
            return Polynomial(), Polynomial(rem)
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            quot[i - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        return eval_exact(self, x)

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        return Polynomial([c / self.leading for c in self.coeffs])

    def primitive(self) -> "Polynomial":
        """Positive multiple with coprime integer coefficients (same roots, same signs)."""
        if not self.coeffs:
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        return Polynomial([c // g for c in ints])

    def to_float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def to_json(self) -> str:
        return json.dumps({"coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        obj = json.loads(text)
        return cls(Fraction(int(n), int(d)) for n, d in obj["coeffs"])


def eval_exact(p: Polynomial, x) -> Fraction:
    """Horner evaluation in exact rational arithmetic."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def _int_coeffs(p: Polynomial) -> list[int]:
    return [int(c) for c in p.primitive().coeffs]


def _sign_int(coeffs: Sequence[int], x: Fraction) -> int:
    # homogeneous Horner keeps everything in integers
    num, den = x.numerator, x.denominator
    acc = 0
    scale = 1
    for c in reversed(coeffs):
        acc = acc * num + c * scale
        scale *= den
    return (acc > 0) - (acc < 0)


def sturm_sequence(p: Polynomial) -> list[list[int]]:
    """Sturm chain of p as integer coefficient lists (positive rescalings)."""
    if p.degree < 1:
        raise DomainError("Sturm sequence needs a nonconstant polynomial")
    chain = [p.primitive(), p.derivative().primitive()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append((-r).primitive())
    return [[int(c) for c in q.coeffs] for q in chain]


def _variations(signs: Iterable[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _variations_at(chain: list[list[int]], x: Fraction) -> int:
    return _variations(_sign_int(q, x) for q in chain)


def _variations_at_inf(chain: list[list[int]]) -> int:
    return _variations((q[-1] > 0) - (q[-1] < 0) for q in chain)


def count_roots_above(p: Polynomial, t) -> int:
    """Number of distinct real roots of p in the open interval (t, inf)."""
    t = Fraction(t)
    lin = Polynomial([-t, 1])
    while not p.is_zero() and eval_exact(p, t) == 0:
        p = p // lin
    if p.degree < 1:
        return 0
    chain = sturm_sequence(p)
    return _variations_at(chain, t) - _variations_at_inf(chain)


def count_roots_between(p: Polynomial, lo, hi) -> int:
    """Distinct real roots in (lo, hi]."""
    return count_roots_above(p, lo) - count_roots_above(p, hi)


def isolate_largest_root(p: Polynomial, lo, hi, width) -> tuple[Fraction, Fraction]:
    """Exact bracket (a, b) with b - a <= width containing the largest real root.

    Requires no root above ``hi`` and at least one root in (lo, hi].
    Newton steps from ``hi`` do the bulk of the work (for a real-rooted p they
    approach the largest root from above); Sturm counts certify the result
    and drive a bisection fallback.
    """
    lo, hi, width = Fraction(lo), Fraction(hi), Fraction(width)
    if p.degree < 1 or lo >= hi:
        raise DomainError("need a nonconstant polynomial and lo < hi")
    if count_roots_above(p, hi) != 0:
        raise DomainError(f"polynomial has a root above hi={float(hi)}")
    if eval_exact(p, hi) == 0:
        return hi, hi
    if count_roots_between(p, lo, hi) == 0:
        raise DomainError(f"no root in ({float(lo)}, {float(hi)}]")

    ip = _int_coeffs(p)
    lead_sign = 1 if ip[-1] > 0 else -1
    q = Polynomial(ip)
    dq = q.derivative()
    bits = max(64, int(-math.log2(float(width))) + 24) if width > 0 else 256
    unit = Fraction(1, 1 << bits)

    x = hi
    for _ in range(500):
        dx = eval_exact(dq, x)
        if dx == 0:
            break
        step = eval_exact(q, x) / dx
        cand = x - step
        # round up to a dyadic grid so sizes stay bounded
        cand = Fraction(math.ceil(cand / unit)) * unit
        if cand >= x:
            break
        s = _sign_int(ip, cand)
        if s == 0:
            if count_roots_above(p, cand) == 0:
                return cand, cand
            break
        if s != lead_sign:
            break
        x = cand
        if step < width / 4:
            break
    b = x
    if count_roots_above(p, b) != 0:
        b = hi
    a = b - width
    if a > lo and count_roots_above(p, a) >= 1:
        return a, b
    a = lo
    while b - a > width:
        mid = (a + b) / 2
        if count_roots_above(p, mid) >= 1:
            a = mid
        else:
            b = mid
    return a, b


def largest_real_root(p: Polynomial, lo: float, hi: float, tol: float = 1e-13) -> float:
    """Largest real root of p, known to lie in (lo, hi], to within ``tol``."""
    a, b = isolate_largest_root(p, Fraction(lo), Fraction(hi), Fraction(tol))
    return float((a + b) / 2)


def largest_root_exceeds(p: Polynomial, t) -> bool:
    """Exact test: does p have a real root >= t?"""
    t = Fraction(t)
    return eval_exact(p, t) == 0 or count_roots_above(p, t) > 0


class BivariatePoly:
    """Polynomial in lambda whose coefficients are polynomials in d.

    ``coeffs[j]`` is the coefficient of lambda**j.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Polynomial]):
        cs = [c if isinstance(c, Polynomial) else Polynomial([c]) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, BivariatePoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"BivariatePoly({[c.format('d') for c in self.coeffs]})"

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        n = max(len(self.coeffs), len(other.coeffs))
        zero = Polynomial()
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return BivariatePoly([x - y for x, y in zip(a, b)])

    def times_lambda(self) -> "BivariatePoly":
        return BivariatePoly((Polynomial(),) + self.coeffs)

    def scale(self, factor: Polynomial) -> "BivariatePoly":
        return BivariatePoly([c * factor for c in self.coeffs])

    def substitute_d(self, d) -> Polynomial:
        """The univariate polynomial in lambda obtained by fixing d."""
        return Polynomial([eval_exact(c, d) for c in self.coeffs])

    def evaluate(self, d, lam) -> Fraction:
        return eval_exact(self.substitute_d(d), lam)

    def derivative_lambda(self) -> "BivariatePoly":
        return BivariatePoly([c * j for j, c in enumerate(self.coeffs)][1:])

    def format(self) -> str:
        parts = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            lam = "" if j == 0 else ("l" if j == 1 else f"l^{j}")
            parts.append(f"({c.format('d')})*{lam}" if lam else f"({c.format('d')})")
        return " + ".join(parts) or "0"


# -- the recursions ---------------------------------------------------------

def ball_poly(d: int, r: int) -> Polynomial:
    """Characteristic polynomial of the distance-class matrix of B_{d,r}.

    p_0 = x, p_1 = x^2 - d, p_r = x p_{r-1} - r(d-r+1) p_{r-2}.
    """
    if not 0 <= r <= d:
        raise DomainError(f"radius must lie in [0, {d}], got {r}")
    x = Polynomial.x()
    prev, cur = None, x
    if r == 0:
        return cur
    prev, cur = cur, Polynomial([-d, 0, 1])
    for k in range(2, r + 1):
        prev, cur = cur, x * cur - prev * (k * (d - k + 1))
    return cur


@lru_cache(maxsize=None)
def f_poly(k: int) -> BivariatePoly:
    """f_k(d, lambda): f_1 = l, f_2 = l^2 - d, f_k = l f_{k-1} - (k-1)(d-k+2) f_{k-2}."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    f1 = BivariatePoly([Polynomial(), Polynomial([1])])
    if k == 1:
        return f1
    f2 = BivariatePoly([Polynomial([0, -1]), Polynomial(), Polynomial([1])])
    prev, cur = f1, f2
    for j in range(3, k + 1):
        factor = Polynomial([-(j - 2) * (j - 1), j - 1])  # (j-1)(d-j+2)
        prev, cur = cur, cur.times_lambda() - prev.scale(factor)
    return cur


@lru_cache(maxsize=None)
def p_power(d: int) -> Polynomial:
    """prod_{i=0}^{d} (x - (d - 2i)): the hypercube spectrum without multiplicities."""
    if d < 1:
        raise DomainError(f"d must be at least 1, got {d}")
    return Polynomial.from_roots(d - 2 * i for i in range(d + 1))


@lru_cache(maxsize=None)
def p_minus(d: int) -> Polynomial:
    """Polynomial whose largest root is the principal eigenvalue of G_{2^d - 1}."""
    if d < 1:
        raise DomainError(f"d must be at least 1, got {d}")
    return f_poly(d).substitute_d(d)


@lru_cache(maxsize=None)
def p_plus(d: int) -> Polynomial:
    """x * p_power(d) - p_minus(d); largest root is the eigenvalue of G_{2^d + 1}."""
    if d < 1:
        raise DomainError(f"d must be at least 1, got {d}")
    return Polynomial.x() * p_power(d) - p_minus(d)


def hypercube_factor(d: int) -> Polynomial:
    """prod_{i=1}^{d-1} (x - (d-2i))^(C(d,i) - 1), shared by chi_{2^d} and chi_{2^d +- 1}."""
    out = Polynomial([1])
    for i in range(1, d):
        out = out * Polynomial([-(d - 2 * i), 1]) ** (math.comb(d, i) - 1)
    return out


def weighted_power_sum(d: int) -> Fraction:
    """sum_{j=0}^{d-1} 2^j / (j+1)."""
    return sum((Fraction(2 ** j, j + 1) for j in range(d)), Fraction(0))


def falling_factorial(i: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= i - t
    return out


def tangent_bound_minus(d: int) -> Fraction:
    """d - 1/sum: the tangent-line upper bound on the largest root of p_minus(d)."""
    if d < 1:
        raise DomainError(f"d must be at least 1, got {d}")
    return d - 1 / weighted_power_sum(d)


def tangent_bound_plus(d: int) -> Fraction:
    """d + 1/(d 2^d - sum): the tangent-line upper bound for p_plus(d)."""
    if d < 1:
        raise DomainError(f"d must be at least 1, got {d}")
    den = d * 2 ** d - weighted_power_sum(d)
    if den <= 0:
        raise DomainError(f"denominator not positive at d={d}")
    return d + 1 / den


def minus_root(d: int, tol: float = 1e-13) -> float:
    return largest_real_root(p_minus(d), 0 if d > 1 else -1, d, tol)


def plus_root(d: int, tol: float = 1e-13) -> float:
    # P_plus(d) = -d! < 0, so the largest root sits just above d
    return largest_real_root(p_plus(d), d, d + 1, tol)
