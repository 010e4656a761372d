import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neutralnet.graphs import (
    bricklayer,
    cartesian_product_k2,
    connected_components,
    hamming_ball,
    hamming_graph,
    induced_subgraph,
    star,
)
from neutralnet.polynomials import Polynomial
from neutralnet.spectra import (
    ConvergenceError,
    adjacency_matrix,
    ball_eigenvalue_reduced,
    char_poly_exact,
    distance_class_matrix,
    expand_profile,
    hypercube_spectrum,
    principal_eigenvalue_char_poly,
    principal_eigenvalue_dense,
    principal_eigenvalue_power,
    robustness,
)

from oracles import bricklayer_eigenvalue, dense_eigenvalues, largest_eigenvalue, sympy_charpoly

LAMBDA_5 = math.sqrt((5 + math.sqrt(17)) / 2)


# -- power iteration -----------------------------------------------------------

def test_square():
    r = principal_eigenvalue_power(bricklayer(4))
    assert abs(r.lam - 2) < 1e-12
    assert r.method == "power"


def test_single_vertex():
    assert principal_eigenvalue_power(bricklayer(1)).lam == 0


def test_bricklayer_5():
    assert abs(principal_eigenvalue_power(bricklayer(5)).lam - LAMBDA_5) < 1e-11
    assert abs(bricklayer_eigenvalue(5) - LAMBDA_5) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 6, 7, 11, 13, 29, 64, 100])
def test_power_matches_dense_oracle(n):
    r = principal_eigenvalue_power(bricklayer(n))
    assert abs(r.lam - bricklayer_eigenvalue(n)) < 1e-10
    assert r.residual <= 1e-12


def test_eigenvector_is_nonnegative_unit_perron_vector():
    g = hamming_ball(5, 2)
    r = principal_eigenvalue_power(g)
    x = r.eigenvector
    assert np.all(x >= 0) and abs(np.linalg.norm(x) - 1) < 1e-12
    a = adjacency_matrix(g)
    assert np.linalg.norm(a @ x - r.lam * x) <= 1e-12


def test_disconnected_takes_best_component():
    # a square, a separate edge and an isolated vertex
    labels = [0, 1, 2, 3, 22, 28, 29]
    g = induced_subgraph(5, 2, labels)
    assert len(connected_components(g)) == 3
    r = principal_eigenvalue_power(g)
    assert abs(r.lam - 2) < 1e-12
    assert abs(r.lam - largest_eigenvalue(5, 2, labels)) < 1e-10
    assert np.all(r.eigenvector[[4, 5, 6]] == 0)


def test_nonconvergence_carries_last_iterate():
    with pytest.raises(ConvergenceError) as info:
        principal_eigenvalue_power(bricklayer(100), max_iter=2)
    assert info.value.last.residual > 1e-12
    assert info.value.last.lam > 0


def test_bad_tolerance():
    with pytest.raises(ValueError):
        principal_eigenvalue_power(bricklayer(3), tol=0)


def test_star_graph_power():
    assert abs(principal_eigenvalue_power(star(19)).lam - math.sqrt(19)) < 1e-11


def test_dense_route_agrees():
    for n in (3, 9, 21):
        assert abs(principal_eigenvalue_dense(bricklayer(n)).lam - bricklayer_eigenvalue(n)) < 1e-12


def test_serialization():
    r = principal_eigenvalue_power(bricklayer(4))
    obj = json.loads(r.to_json())
    assert set(obj) == {"lambda", "residual", "method", "iterations"}
    assert len(json.loads(r.to_json(include_vector=True))["eigenvector"]) == 4


# -- hypercube spectrum and balls ---------------------------------------------

def test_hypercube_spectrum_examples():
    assert hypercube_spectrum(1).pairs == ((1, 1), (-1, 1))
    assert hypercube_spectrum(3).pairs == ((3, 1), (1, 3), (-1, 3), (-3, 1))
    s5 = hypercube_spectrum(5)
    assert [m for _, m in s5.pairs] == [1, 5, 10, 10, 5, 1] and s5.total_multiplicity() == 32


@pytest.mark.parametrize("d", [2, 3, 4])
def test_hypercube_spectrum_matches_dense(d):
    vals = np.round(dense_eigenvalues(d, 2, range(2**d))).astype(int)
    expected = sorted(v for v, m in hypercube_spectrum(d).pairs for _ in range(m))
    assert sorted(vals.tolist()) == expected


@pytest.mark.parametrize("d", [1, 4, 9, 19, 30])
def test_unit_ball_is_sqrt_d(d):
    assert abs(ball_eigenvalue_reduced(d, 1).lam - math.sqrt(d)) < 1e-12


def test_ball_radius_zero_and_4_2():
    assert ball_eigenvalue_reduced(6, 0).lam == 0
    assert abs(ball_eigenvalue_reduced(4, 2).lam - math.sqrt(10)) < 1e-12


@pytest.mark.parametrize("d,r", [(4, 2), (5, 2), (6, 3), (7, 2), (8, 4)])
def test_ball_reduction_matches_materialized(d, r):
    red = ball_eigenvalue_reduced(d, r)
    g = hamming_ball(d, r)
    full = principal_eigenvalue_power(g)
    assert abs(red.lam - full.lam) <= 10 * 1e-12 + 1e-12
    assert max(abs(x) for x in red.profile.residuals(red.lam)) < 1e-10
    assert np.allclose(expand_profile(g, red.profile), full.eigenvector, atol=1e-9)
    t = distance_class_matrix(d, r)
    assert abs(max(np.linalg.eigvals(t).real) - red.lam) < 1e-10


# -- exact characteristic polynomials -----------------------------------------

def test_char_poly_examples():
    assert char_poly_exact(bricklayer(2)) == Polynomial([-1, 0, 1])
    assert char_poly_exact(bricklayer(3)) == Polynomial([0, -2, 0, 1])
    assert char_poly_exact(bricklayer(8)) == Polynomial.from_roots([3, 1, 1, 1, -1, -1, -1, -3])


@pytest.mark.parametrize("labels,d", [(range(5), 3), (range(11), 4), (range(20), 5),
                                      ([0, 1, 2, 4, 8, 3, 17], 5), (range(32), 5)])
def test_char_poly_matches_sympy(labels, d):
    g = induced_subgraph(d, 2, labels)
    expected = sympy_charpoly(d, 2, labels)
    assert list(char_poly_exact(g).coeffs) == expected
    assert list(char_poly_exact(g, method="trace").coeffs) == expected


def test_char_poly_ternary():
    g = bricklayer(7, 3)
    assert list(char_poly_exact(g).coeffs) == sympy_charpoly(2, 3, range(7))


def test_char_poly_guard():
    with pytest.raises(ValueError):
        char_poly_exact(bricklayer(33))
    p = char_poly_exact(bricklayer(33), max_vertices=33)
    assert p.degree == 33 and p.is_integral() and p.leading == 1
    assert p == char_poly_exact(bricklayer(33), method="trace", max_vertices=33)


@given(st.sets(st.integers(0, 31), min_size=1, max_size=16))
@settings(max_examples=30, deadline=None)
def test_char_poly_methods_agree(labels):
    g = induced_subgraph(5, 2, labels)
    assert char_poly_exact(g) == char_poly_exact(g, method="trace")


def test_oracle_triangle():
    graphs = [bricklayer(n) for n in range(2, 33)] + [hamming_ball(d, r) for d, r in ((4, 2), (5, 1), (5, 2), (6, 1))]
    for g in graphs:
        p = principal_eigenvalue_power(g).lam
        c = principal_eigenvalue_char_poly(g).lam
        assert abs(p - c) < 1e-9
    for d, r in ((4, 2), (5, 2), (6, 1)):
        assert abs(ball_eigenvalue_reduced(d, r).lam - principal_eigenvalue_char_poly(hamming_ball(d, r)).lam) < 1e-9


def test_char_poly_eigenvector():
    r = principal_eigenvalue_char_poly(bricklayer(7))
    assert r.method == "char_poly" and r.residual < 1e-9 and np.all(r.eigenvector >= 0)


# -- structural properties ----------------------------------------------------

def test_monotone_in_n():
    lams = [principal_eigenvalue_power(bricklayer(n)).lam for n in range(1, 257)]
    assert all(b - a > 1e-10 for a, b in zip(lams, lams[1:]))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 9, 17, 40, 77, 128])
def test_product_shift(n):
    g = bricklayer(n)
    assert abs(principal_eigenvalue_power(cartesian_product_k2(g)).lam
               - (principal_eigenvalue_power(g).lam + 1)) < 1e-9


def test_interlacing():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 20)
        big = dense_eigenvalues(5, 2, range(n + 1))
        small = dense_eigenvalues(5, 2, range(n))
        for i in range(n):
            assert big[i] - 1e-9 <= small[i] <= big[i + 1] + 1e-9


@pytest.mark.parametrize("g", [bricklayer(n) for n in (2, 5, 12, 27, 100)]
                         + [hamming_ball(6, 2), hamming_graph(2, 3), bricklayer(20, 3)])
def test_degree_bracket_and_global_bound(g):
    lam = principal_eigenvalue_power(g).lam
    deg = g.degrees()
    assert deg.mean() - 1e-12 <= lam <= deg.max() + 1e-12
    assert lam <= g.d * (g.a - 1) + 1e-12


def test_robustness_examples():
    assert abs(robustness(hamming_graph(3, 2)) - 1) < 1e-12
    assert abs(robustness(bricklayer(4), 2, 2) - 1) < 1e-12
    assert abs(robustness(bricklayer(5), 3, 2) - LAMBDA_5 / 3) < 1e-11
    assert abs(robustness(bricklayer(5), 3, 2) - 0.71193) < 1e-5
