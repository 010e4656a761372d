import json
import math
from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neutralnet import theorem
from neutralnet.certify import Exact, Log2, Measured, RootOf, Sqrt, compare
from neutralnet.polynomials import p_minus, tangent_bound_minus
from neutralnet.theorem import (
    HOLDS_EQUAL,
    HOLDS_STRICT,
    VIOLATED,
    asymptotic_probe,
    check_conjecture,
    check_minus_chain,
    check_plus_chain,
    check_staircase,
    check_theorem,
    power_of,
    star_crossover,
    staircase_induction,
    sum_bound_holds,
    summarize,
)

from oracles import bricklayer_eigenvalue


# -- power detection -----------------------------------------------------------

def test_power_of():
    assert power_of(1) == 0 and power_of(1024) == 10 and power_of(1023) is None
    assert power_of(81, 3) == 4 and power_of(82, 3) is None and power_of(0) is None


@given(st.integers(0, 200), st.integers(2, 7))
def test_power_of_round_trip(k, a):
    assert power_of(a**k, a) == k
    if a**k > 1:
        assert power_of(a**k + 1, a) is None


# -- certified comparisons -----------------------------------------------------

def test_compare_exact_rationals():
    c = compare(Fraction(1, 3), Fraction(1, 2))
    assert c.holds and c.method == "exact"
    assert not compare(Fraction(1, 2), Fraction(1, 2)).holds


def test_compare_root_against_rational_is_exact():
    root = RootOf(p_minus(3), Fraction(0), Fraction(3))
    assert compare(root, Fraction(27, 10)).method == "exact"
    assert compare(root, Fraction(27, 10)).holds
    assert not compare(root, Fraction(264, 100)).holds  # sqrt(7) = 2.6457...
    assert compare(Fraction(264, 100), root).holds


def test_compare_float_route():
    c = compare(Log2(Fraction(5)), Sqrt(Fraction(19)))
    assert c.holds and c.method == "float" and c.margin > 1e-9


def test_compare_escalates_below_float_margin():
    # log2(2^40 + 1) - 40 is about 1.3e-12: invisible to the float margin
    lhs = Exact(Fraction(40))
    rhs = Log2(Fraction(2**40 + 1))
    c = compare(lhs, rhs)
    assert c.holds and c.method == "interval"
    assert 1e-12 < c.margin < 2e-12
    assert not compare(rhs, lhs).holds


def test_compare_undecided_for_measured_tie():
    c = compare(Measured(2.0, 1e-12), Exact(Fraction(2)))
    assert not c.holds and c.method == "undecided"


def test_enclosures_are_rigorous():
    lo, hi = Log2(Fraction(3)).enclosure(Fraction(1, 10**40))
    assert lo <= hi and hi - lo < Fraction(1, 10**40)
    with mpmath.workdps(80):
        ref = mpmath.log(3, 2)
        assert mpmath.mpf(lo.numerator) / lo.denominator <= ref <= mpmath.mpf(hi.numerator) / hi.denominator
    lo, hi = Sqrt(Fraction(19)).enclosure(Fraction(1, 10**30))
    assert lo * lo <= 19 <= hi * hi


# -- the bound itself ----------------------------------------------------------

def test_check_theorem_examples():
    reports = {r.n: r for r in check_theorem(8)}
    assert reports[8].verdict == HOLDS_EQUAL and abs(reports[8].lam - 3) < 1e-9
    assert reports[1].verdict == HOLDS_EQUAL and reports[1].lam == 0
    assert reports[5].verdict == HOLDS_STRICT
    assert abs(reports[5].lam - 2.13578) < 1e-5 and abs(reports[5].bound - math.log2(5)) < 1e-12


def test_check_theorem_to_256_matches_oracle():
    reports = check_theorem(256, workers=4)
    assert [r.n for r in reports] == list(range(1, 257))
    assert summarize(reports) == {"checked": 256, HOLDS_STRICT: 247, HOLDS_EQUAL: 9, VIOLATED: 0}
    for r in reports[:40]:
        assert abs(r.lam - bricklayer_eigenvalue(r.n)) < 1e-9
    for r in reports:
        if r.verdict == HOLDS_STRICT:
            assert r.margin >= 1e-9


def test_report_serialization():
    r = check_theorem(3)[2]
    obj = json.loads(r.to_json())
    assert obj["lambda"] == r.lam and obj["verdict"] == HOLDS_STRICT and "witness" not in obj


def test_check_theorem_rejects_bad_range():
    with pytest.raises(ValueError):
        check_theorem(0)


# -- staircase -----------------------------------------------------------------

def test_staircase_k3():
    rep = check_staircase(3)
    assert rep.holds
    assert sorted(rep.condition_k) == list(range(10, 16))
    assert all(c.holds for c in rep.condition_k.values())


def test_staircase_k4_and_chain_at_10():
    rep = check_staircase(4)
    assert rep.holds
    assert check_staircase(3).chain[10]
    lams = [bricklayer_eigenvalue(n) for n in (18, 19, 20)]
    assert lams[0] < lams[1] < lams[2]


def test_staircase_needs_k3():
    with pytest.raises(ValueError):
        check_staircase(2)


def test_staircase_induction_to_512():
    rep = staircase_induction(3, 7)
    assert rep.holds and rep.certified_upto == 512
    # the derived upper bounds really are upper bounds
    for n in (17, 31, 33, 63, 100, 129, 255, 257, 511):
        assert bricklayer_eigenvalue(n) <= rep.bounds[n] + 1e-9


# -- bound chains --------------------------------------------------------------

@pytest.mark.parametrize("d", range(5, 21))
def test_minus_chain(d):
    rep = check_minus_chain(d)
    assert rep.holds
    assert rep.link("root < tangent").comparison.method == "exact"


@pytest.mark.parametrize("d", range(5, 21))
def test_plus_chain(d):
    assert check_plus_chain(d).holds


@pytest.mark.parametrize("d", [21, 25])
def test_chains_beyond_twenty(d):
    assert check_minus_chain(d).holds and check_plus_chain(d).holds


def test_minus_chain_d5_values():
    rep = check_minus_chain(5)
    assert rep.link("root < tangent").comparison.rhs == float(5 - Fraction(15, 128))
    assert rep.link("tangent < sum bound").comparison.rhs == 5 - 2 * 5 / (3 * 32)


def test_minus_chain_gating_below_five():
    rep = check_minus_chain(4)
    asserted = [l.name for l in rep.links if l.asserted]
    assert asserted == ["root < tangent"]
    assert rep.holds


def test_plus_chain_d3_log_link():
    rep = check_plus_chain(3)
    c = rep.link("d + 1/2^(d+1) < log2(2^d+1/2)").comparison
    assert c.holds and abs(c.rhs - math.log2(8.5)) < 1e-12 and c.lhs == 3 + 1 / 16
    assert check_plus_chain(4).holds


def test_plus_chain_margins_shrink():
    m = [check_plus_chain(d).link("root < log2(2^d+1/2)").comparison.margin for d in (6, 8, 10)]
    assert m[0] > m[1] > m[2] > 0


def test_sum_bound_helper():
    assert all(sum_bound_holds(d) for d in range(1, 65))


# -- stars ---------------------------------------------------------------------

def test_star_crossover():
    rows, first = star_crossover(40)
    by_n = {r.n: r for r in rows}
    assert first == 20
    assert by_n[19].winner == "bricklayer" and by_n[20].winner == "star" and by_n[4].winner == "bricklayer"
    assert all(r.winner == "star" for r in rows if r.n >= 20)
    assert all(abs(r.power_check - r.star_lambda) < 1e-9 for r in rows)


# -- general alphabets ---------------------------------------------------------

def test_conjecture_examples():
    reps = {r.n: r for r in check_conjecture(3, 9)}
    assert reps[9].verdict == HOLDS_EQUAL and abs(reps[9].lam - 4) < 1e-9
    assert reps[4].verdict == HOLDS_STRICT and reps[4].lam < 2 * math.log(4, 3)
    r16 = {r.n: r for r in check_conjecture(4, 16)}[16]
    assert r16.verdict == HOLDS_EQUAL and abs(r16.lam - 6) < 1e-9


def test_conjecture_needs_large_alphabet():
    with pytest.raises(ValueError):
        check_conjecture(2, 4)


def test_conjecture_violation_becomes_artifact(tmp_path, monkeypatch):
    real = theorem.principal_eigenvalue_power

    def inflated(g, *args, **kw):
        res = real(g, *args, **kw)
        return replace(res, lam=res.lam + 1) if g.num_vertices == 5 else res

    monkeypatch.setattr(theorem, "principal_eigenvalue_power", inflated)
    reports = check_conjecture(3, 6, artifact_dir=str(tmp_path))
    bad = [r for r in reports if r.verdict == VIOLATED]
    assert [r.n for r in bad] == [5]
    assert bad[0].method.endswith("refuted")  # the exact recheck disagrees with the inflated value
    saved = json.loads((tmp_path / "counterexample_a3_n5.json").read_text())
    assert saved["verdict"] == VIOLATED and json.loads(saved["witness"])["labels"] == [0, 1, 2, 3, 4]


# -- large d -------------------------------------------------------------------

def test_probe_n1():
    rep = asymptotic_probe(1, Fraction(1, 2), range(5, 13))
    assert all(r.minus_holds and r.plus_holds for r in rep.rows)
    assert rep.minus_from == 5 and rep.minus_stable


def test_probe_n4_and_eps():
    rep = asymptotic_probe(4, Fraction(1, 2), range(3, 16))
    assert rep.minus_from is not None and rep.minus_stable
    assert rep.plus_from == 3 and rep.plus_stable
    assert not rep.rows[0].minus_holds


def test_probe_rejects_bad_parameters():
    with pytest.raises(ValueError):
        asymptotic_probe(0, 1, range(3, 5))
    with pytest.raises(ValueError):
        asymptotic_probe(1, 0, range(3, 5))


def test_tangent_bound_below_log_is_not_trivially_float():
    # at d = 20 the first link is below the float margin and must be settled exactly
    rep = check_minus_chain(20)
    c = rep.link("root < tangent").comparison
    assert c.holds and c.method == "exact" and c.margin < 1e-9
    assert float(tangent_bound_minus(20)) - c.lhs == pytest.approx(c.margin, rel=1e-3)
