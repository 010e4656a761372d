"""Mechanical checks of the log2 bound on bricklayer's graphs.

Each check returns plain report objects; a violated inequality is recorded
in the report and never raised.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import certify
from .certify import Exact, Log2, Measured, RootOf, Sqrt, compare
from .graphs import bricklayer, star
from .polynomials import (
    weighted_power_sum,
    p_minus,
    p_plus,
    tangent_bound_minus,
    tangent_bound_plus,
)
from .spectra import principal_eigenvalue_char_poly, principal_eigenvalue_power

EQUALITY_TOL = 1e-9
HOLDS_STRICT = "holds_strict"
HOLDS_EQUAL = "holds_equal"
VIOLATED = "violated"


def power_of(n: int, a: int = 2) -> int | None:
    """k with a**k == n, or None; repeated division, no logarithms."""
    if n < 1:
        return None
    k = 0
    while n % a == 0:
        n //= a
        k += 1
    return k if n == 1 else None


@dataclass
class BoundReport:
    n: int
    lam: float
    bound: float
    margin: float
    verdict: str
    a: int = 2
    method: str = "float"
    witness: str | None = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        if out["witness"] is None:
            del out["witness"]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def summarize(reports) -> dict:
    counts = {"checked": 0, HOLDS_STRICT: 0, HOLDS_EQUAL: 0, VIOLATED: 0}
    for r in reports:
        counts["checked"] += 1
        counts[r.verdict] += 1
    return counts


def _bound_report(n: int, a: int, spectral, bound_q) -> BoundReport:
    k = power_of(n, a)
    lam = spectral.lam
    bound = bound_q.approx()
    if k is not None:
        target = (a - 1) * k
        ok = abs(lam - target) <= EQUALITY_TOL
        return BoundReport(n, lam, float(target), target - lam, HOLDS_EQUAL if ok else VIOLATED, a, "float")
    cmp = compare(Measured(lam, spectral.residual), bound_q)
    verdict = HOLDS_STRICT if cmp.holds else VIOLATED
    return BoundReport(n, lam, bound, cmp.margin, verdict, a, cmp.method)


def _theorem_one(n: int) -> BoundReport:
    res = principal_eigenvalue_power(bricklayer(n))
    return _bound_report(n, 2, res, Log2(Fraction(n)))


def check_theorem(n_max: int, workers: int = 1) -> list[BoundReport]:
    """lambda_n <= log2 n for 1 <= n <= n_max, equality exactly at powers of 2."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ns = range(1, n_max + 1)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(_theorem_one, ns))
    return [_theorem_one(n) for n in ns]


# -- staircase induction ------------------------------------------------------

@dataclass
class StaircaseReport:
    k: int
    condition_k: dict[int, certify.Comparison] = field(default_factory=dict)
    doubled: dict[int, certify.Comparison] = field(default_factory=dict)
    product_shift: dict[int, float] = field(default_factory=dict)
    chain: dict[int, bool] = field(default_factory=dict)
    condition_next: dict[int, certify.Comparison] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return (
            all(c.holds for c in self.condition_k.values())
            and all(c.holds for c in self.doubled.values())
            and all(v < EQUALITY_TOL for v in self.product_shift.values())
            and all(self.chain.values())
            and all(c.holds for c in self.condition_next.values())
        )

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "holds": self.holds,
            "condition_k": {n: c.to_dict() for n, c in self.condition_k.items()},
            "doubled": {n: c.to_dict() for n, c in self.doubled.items()},
            "product_shift_error": self.product_shift,
            "chain": self.chain,
            "condition_next": {n: c.to_dict() for n, c in self.condition_next.items()},
        }


def check_staircase(k: int, lam=None) -> StaircaseReport:
    """Numerically confirm the staircase step from k to k+1.

    Checks lambda_n < log2(n-1) on 2^k+2 <= n <= 2^(k+1)-1, the doubled bound
    lambda_2n < log2(2n-2), the six-term chain, and the condition at k+1.
    ``lam`` maps n to a SpectralResult; missing entries are computed.
    """
    if k < 3:
        raise ValueError("the staircase starts at k = 3")
    cache = {} if lam is None else lam

    def eig(n):
        if n not in cache:
            cache[n] = principal_eigenvalue_power(bricklayer(n))
        return cache[n]

    def measured(n):
        r = eig(n)
        return Measured(r.lam, r.residual)

    rep = StaircaseReport(k)
    lo, hi = 2**k + 2, 2 ** (k + 1) - 1
    for n in range(lo, hi + 1):
        rep.condition_k[n] = compare(measured(n), Log2(Fraction(n - 1)))
        rep.doubled[2 * n] = compare(measured(2 * n), Log2(Fraction(2 * n - 2)))
        rep.product_shift[n] = abs(eig(2 * n).lam - (eig(n).lam + 1))
        terms = [
            measured(2 * n - 2), measured(2 * n - 1), measured(2 * n),
            Log2(Fraction(2 * n - 2)), Log2(Fraction(2 * n - 1)), Log2(Fraction(2 * n)),
        ]
        rep.chain[n] = all(compare(x, y).holds for x, y in zip(terms, terms[1:]))
    for m in range(2 ** (k + 1) + 2, 2 ** (k + 2)):
        rep.condition_next[m] = compare(measured(m), Log2(Fraction(m - 1)))
    return rep


@dataclass
class InductionReport:
    """Outcome of running the staircase induction with upper bounds only."""

    k_start: int
    k_end: int
    base_ok: bool
    certified_upto: int
    bounds: dict[int, float]
    failures: list[str]

    @property
    def holds(self) -> bool:
        return self.base_ok and not self.failures


def staircase_induction(k_start: int = 3, k_end: int = 8) -> InductionReport:
    """Certify lambda_n <= log2 n up to 2^(k_end+2) from a small base.

    Only lambda_n for n <= 2^(k_start+1) is computed from graphs.  Every later
    value is an upper bound derived from lambda_2n = lambda_n + 1 (product with
    K_2), lambda_{2n-1} < lambda_2n (proper subgraph), and the polynomial roots
    for n = 2^d - 1 and n = 2^d + 1.
    """
    failures: list[str] = []
    base_top = 2 ** (k_start + 1)
    upper: dict[int, float] = {}
    err: dict[int, float] = {}
    base_ok = True
    for n in range(1, base_top + 1):
        r = principal_eigenvalue_power(bricklayer(n))
        upper[n] = r.lam
        err[n] = r.residual
        k = power_of(n)
        if k is not None:
            base_ok &= abs(r.lam - k) <= EQUALITY_TOL
        else:
            base_ok &= compare(Measured(r.lam, r.residual), Log2(Fraction(n))).holds
    for n in range(2**k_start + 2, 2 ** (k_start + 1)):
        base_ok &= compare(Measured(upper[n], err[n]), Log2(Fraction(n - 1))).holds
    if not base_ok:
        failures.append("base case")

    for k in range(k_start, k_end + 1):
        # root conditions: 2^d+1 just above the block, 2^d-1 at the top of the next
        d_plus, d_minus = k + 1, k + 2
        plus_q = RootOf(p_plus(d_plus), Fraction(d_plus), Fraction(d_plus + 1))
        minus_q = RootOf(p_minus(d_minus), Fraction(0), Fraction(d_minus))
        if not compare(plus_q, Log2(Fraction(2 * 2**d_plus + 1, 2))).holds:
            failures.append(f"plus condition d={d_plus}")
        if not compare(minus_q, Log2(Fraction(2**d_minus - 2))).holds:
            failures.append(f"minus condition d={d_minus}")
        m_plus, m_minus = 2**d_plus + 1, 2**d_minus - 1
        upper[m_plus] = plus_q.approx()
        err[m_plus] = 1e-15
        new_upper: dict[int, float] = {}
        for n in range(2**k + 1, 2 ** (k + 1) + 1):
            new_upper[2 * n] = upper[n] + 1
            err[2 * n] = err[n]
            if 2 * n - 1 != m_plus:
                new_upper[2 * n - 1] = upper[n] + 1
                err[2 * n - 1] = err[n]
        new_upper[m_minus] = min(new_upper[m_minus], minus_q.approx())
        upper.update(new_upper)
        for m in range(2 ** (k + 1) + 1, 2 ** (k + 2) + 1):
            p = power_of(m)
            if p is not None:
                if abs(upper[m] - p) > EQUALITY_TOL:
                    failures.append(f"power of two at {m}")
                continue
            if not compare(Measured(upper[m], err[m]), Log2(Fraction(m))).holds:
                failures.append(f"theorem at {m}")
        for m in range(2 ** (k + 1) + 2, 2 ** (k + 2)):
            if not compare(Measured(upper[m], err[m]), Log2(Fraction(m - 1))).holds:
                failures.append(f"condition at k={k + 1}, n={m}")
    top = 2 ** (k_end + 2)
    return InductionReport(k_start, k_end, base_ok, top if not failures else 0, upper, failures)


# -- bound chains for n = 2^d - 1 and n = 2^d + 1 ------------------------------

@dataclass
class Link:
    name: str
    comparison: certify.Comparison
    asserted: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "asserted": self.asserted, **self.comparison.to_dict()}


@dataclass
class ChainReport:
    d: int
    kind: str
    links: list[Link]

    @property
    def holds(self) -> bool:
        return all(l.comparison.holds for l in self.links if l.asserted)

    def link(self, name: str) -> Link:
        for l in self.links:
            if l.name == name:
                return l
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"d": self.d, "kind": self.kind, "holds": self.holds,
                "links": [l.to_dict() for l in self.links]}


def minus_root_quantity(d: int) -> RootOf:
    return RootOf(p_minus(d), Fraction(0 if d > 1 else -1), Fraction(d))


def plus_root_quantity(d: int) -> RootOf:
    return RootOf(p_plus(d), Fraction(d), Fraction(d + 1))


def check_minus_chain(d: int) -> ChainReport:
    """lambda_{2^d-1} < d - 1/S < d - (2/3) d/2^d <= d - 3/2^d < log2(2^d - 2).

    Links past the tangent bound need d >= 5 and are reported but not
    asserted below that.
    """
    if d < 2:
        raise ValueError("the chain needs d >= 2")
    root = minus_root_quantity(d)
    tangent = Exact(tangent_bound_minus(d))
    sum_bound = Exact(d - Fraction(2, 3) * Fraction(d, 2**d))
    log_bound = Exact(d - Fraction(3, 2**d))
    target = Log2(Fraction(2**d - 2))
    full = d >= 5
    links = [
        Link("root < tangent", compare(root, tangent)),
        Link("tangent < log2(2^d-2)", compare(tangent, target), full),
        Link("tangent < sum bound", compare(tangent, sum_bound), full),
        Link("sum bound <= d - 3/2^d", _le(sum_bound, log_bound), full),
        Link("d - 3/2^d < log2(2^d-2)", compare(log_bound, target), full),
        Link("root < log2(2^d-2)", compare(root, target), full),
    ]
    return ChainReport(d, "minus", links)


def check_plus_chain(d: int) -> ChainReport:
    """lambda_{2^d+1} < d + 1/(d 2^d - S) < d + 1/((d - 3/(2d)) 2^d) < d + 1/2^(d+1) < log2(2^d + 1/2)."""
    if d < 2:
        raise ValueError("the chain needs d >= 2")
    root = plus_root_quantity(d)
    tangent = Exact(tangent_bound_plus(d))
    sum_bound = Exact(d + 1 / ((d - Fraction(3, 2 * d)) * 2**d))
    half = Exact(d + Fraction(1, 2 ** (d + 1)))
    target = Log2(Fraction(2 ** (d + 1) + 1, 2))
    links = [
        Link("root < tangent", compare(root, tangent)),
        Link("tangent < log2(2^d+1/2)", compare(tangent, target), d >= 3),
        Link("tangent < sum bound", compare(tangent, sum_bound), d >= 2),
        Link("sum bound < d + 1/2^(d+1)", compare(sum_bound, half), d >= 3),
        Link("d + 1/2^(d+1) < log2(2^d+1/2)", compare(half, target), d >= 3),
        Link("root < log2(2^d+1/2)", compare(root, target), d >= 3),
    ]
    return ChainReport(d, "plus", links)


def _le(lhs: Exact, rhs: Exact) -> certify.Comparison:
    m = rhs.value - lhs.value
    return certify.Comparison(float(lhs.value), float(rhs.value), float(m), m >= 0, "exact")


def sum_bound_holds(d: int) -> bool:
    """sum_{j=1}^{d} 2^j/j < 3 * 2^d / d, exactly."""
    return 2 * weighted_power_sum(d) < Fraction(3 * 2**d, d)


# -- star graphs ---------------------------------------------------------------

@dataclass
class CrossoverRow:
    n: int
    star_lambda: float
    log_bound: float
    winner: str
    power_check: float

    def to_dict(self) -> dict:
        return asdict(self)


def star_crossover(n_max: int) -> tuple[list[CrossoverRow], int | None]:
    """Compare sqrt(n-1) (star on n vertices) with log2 n; return rows and first star win."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    rows = []
    first = None
    for n in range(2, n_max + 1):
        c = compare(Log2(Fraction(n)), Sqrt(Fraction(n - 1)))
        winner = "star" if c.holds else "bricklayer"
        pw = principal_eigenvalue_power(star(n - 1)).lam
        rows.append(CrossoverRow(n, math.sqrt(n - 1), math.log2(n), winner, pw))
        if c.holds and first is None:
            first = n
    return rows, first


# -- general alphabets ---------------------------------------------------------

def check_conjecture(a: int, n_max: int, artifact_dir: str | None = None) -> list[BoundReport]:
    """Empirical check of lambda_{n,a} <= (a-1) log_a n.

    A violation is a finding, not an error: it is re-checked with the exact
    characteristic polynomial when small enough and written to
    ``artifact_dir`` as JSON.
    """
    if a < 3:
        raise ValueError("the conjecture concerns a >= 3")
    reports = []
    for n in range(1, n_max + 1):
        g = bricklayer(n, a)
        res = principal_eigenvalue_power(g)
        rep = _bound_report(n, a, res, Log2(Fraction(n), Fraction(a - 1), a))
        if rep.verdict == VIOLATED:
            rep.witness = g.to_json()
            rep.method += "+" + _recheck_exact(g, n, a)
            if artifact_dir:
                os.makedirs(artifact_dir, exist_ok=True)
                path = os.path.join(artifact_dir, f"counterexample_a{a}_n{n}.json")
                with open(path, "w") as fh:
                    fh.write(rep.to_json() + "\n")
        reports.append(rep)
    return reports


def _recheck_exact(g, n: int, a: int) -> str:
    if g.num_vertices > 64:
        return "unchecked"
    res = principal_eigenvalue_char_poly(g, max_vertices=64)
    k = power_of(n, a)
    if k is not None:
        return "confirmed" if abs(res.lam - (a - 1) * k) > EQUALITY_TOL else "refuted"
    c = compare(Measured(res.lam, 1e-12), Log2(Fraction(n), Fraction(a - 1), a))
    return "refuted" if c.holds else "confirmed"


# -- large-d remarks -----------------------------------------------------------

@dataclass
class ProbeRow:
    d: int
    minus_holds: bool
    minus_margin: float
    plus_holds: bool
    plus_margin: float


@dataclass
class ProbeReport:
    N: int
    eps: float
    rows: list[ProbeRow]
    minus_from: int | None
    plus_from: int | None
    minus_stable: bool
    plus_stable: bool


def _first_stable(flags: list[tuple[int, bool]]) -> tuple[int | None, bool]:
    first = next((d for d, ok in flags if ok), None)
    if first is None:
        return None, False
    return first, all(ok for d, ok in flags if d >= first)


def asymptotic_probe(N: int, eps, d_range) -> ProbeReport:
    """Where do lambda_{2^d-1} < log2(2^d - N) and lambda_{2^d+1} < log2(2^d + eps) start to hold?

    A trend check over a finite range of d, from the polynomial roots.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    rows = []
    for d in d_range:
        minus = None
        if 2**d - N > 0 and d >= 2:
            minus = compare(minus_root_quantity(d), Log2(Fraction(2**d - N)))
        plus = compare(plus_root_quantity(d), Log2(Fraction(2**d) + eps))
        rows.append(ProbeRow(
            d,
            bool(minus and minus.holds),
            minus.margin if minus else float("nan"),
            plus.holds,
            plus.margin,
        ))
    mf, ms = _first_stable([(r.d, r.minus_holds) for r in rows])
    pf, ps = _first_stable([(r.d, r.plus_holds) for r in rows])
    return ProbeReport(N, float(eps), rows, mf, pf, ms, ps)
