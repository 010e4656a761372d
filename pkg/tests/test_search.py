import itertools
import json
import math
import random

import networkx as nx
import pytest

from neutralnet.search import (
    apply_automorphism,
    canonical_form,
    connected_classes,
    exhaustive_max_eig,
    mask_to_labels,
    sample_max_eig,
    star_vs_bricklayer_table,
    unrestricted_max_eig,
    vertex_permutation_table,
)

from oracles import bricklayer_eigenvalue, largest_eigenvalue, reference_graph


def brute_orbit_min(labels, d):
    """Least sorted image over coordinate permutations and complementations, by brute force."""
    best = None
    for perm in itertools.permutations(range(d)):
        for mask in range(2**d):
            img = []
            for v in labels:
                w = 0
                for i in range(d):
                    if v >> i & 1:
                        w |= 1 << perm[i]
                img.append(w ^ mask)
            img = tuple(sorted(img))
            best = img if best is None or img < best else best
    return best


# -- canonical forms -----------------------------------------------------------

def test_canonical_examples():
    assert canonical_form({1}, 2) == (0,)
    assert canonical_form({0, 3}, 2) == (0, 3)
    assert canonical_form({0, 1, 2, 4}, 3) == (0, 1, 2, 4)


def test_group_size():
    for d in range(1, 5):
        table = vertex_permutation_table(d)
        assert table.shape == (math.factorial(d) * 2**d, 2**d)
        assert len({tuple(r) for r in table}) == table.shape[0]


def test_table_rows_are_automorphisms():
    d = 4
    cube = {(u, v) for u in range(16) for v in range(16) if (u ^ v).bit_count() == 1}
    for row in vertex_permutation_table(d):
        assert {(row[u], row[v]) for u, v in cube} == cube


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_canonical_constant_on_orbits(d):
    rng = random.Random(d)
    size = vertex_permutation_table(d).shape[0]
    for _ in range(200):
        s = rng.sample(range(2**d), rng.randint(1, 2**d))
        img = apply_automorphism(s, d, rng.randrange(size))
        assert canonical_form(s, d) == canonical_form(img, d)


@pytest.mark.parametrize("d", [2, 3])
def test_canonical_matches_brute_force(d):
    rng = random.Random(11)
    for _ in range(40):
        s = rng.sample(range(2**d), rng.randint(1, 2**d))
        c = canonical_form(s, d)
        assert c == brute_orbit_min(s, d)
        assert canonical_form(c, d) == c


def test_canonical_rejects_out_of_range():
    with pytest.raises(ValueError):
        canonical_form({8}, 3)


# -- exhaustive search ---------------------------------------------------------

def test_exhaustive_examples():
    r = exhaustive_max_eig(3, 4)
    assert r.best_lambda == pytest.approx(2, abs=1e-12) and r.is_bricklayer
    assert nx.is_isomorphic(reference_graph(3, 2, r.witness), nx.cycle_graph(4))
    r = exhaustive_max_eig(4, 8)
    assert r.best_lambda == pytest.approx(3, abs=1e-12) and r.is_bricklayer
    assert nx.is_isomorphic(reference_graph(4, 2, r.witness), nx.hypercube_graph(3))
    r = exhaustive_max_eig(2, 3)
    assert r.best_lambda == pytest.approx(math.sqrt(2), abs=1e-12) and r.explored == 1


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_bricklayer_graphs_are_optimal(d):
    for n in range(1, 2**d + 1):
        r = exhaustive_max_eig(d, n)
        assert abs(r.best_lambda - bricklayer_eigenvalue(n)) <= 1e-9
        assert r.is_bricklayer and r.witness == tuple(range(n))


def test_class_counts_against_networkx():
    # connected induced subgraphs of Q_3 up to symmetry, counted independently
    d = 3
    classes = connected_classes(d)
    for n in range(1, 9):
        found = set()
        for s in itertools.combinations(range(8), n):
            if nx.is_connected(reference_graph(d, 2, s)):
                found.add(brute_orbit_min(s, d))
        assert len(classes[n - 1]) == len(found)
        assert {mask_to_labels(m) for m in classes[n - 1]} == found


def test_connected_search_matches_unrestricted_d3():
    best = unrestricted_max_eig(3)
    for n in range(1, 9):
        assert abs(best[n] - exhaustive_max_eig(3, n).best_lambda) <= 1e-9


def test_disconnected_lambda_is_component_max():
    rng = random.Random(5)
    checked = 0
    while checked < 100:
        s = rng.sample(range(32), rng.randint(2, 12))
        g = reference_graph(5, 2, s)
        if nx.is_connected(g):
            continue
        comps = [largest_eigenvalue(5, 2, c) for c in nx.connected_components(g)]
        assert abs(largest_eigenvalue(5, 2, s) - max(comps)) < 1e-9
        checked += 1


def test_exhaustive_bounds():
    with pytest.raises(ValueError):
        exhaustive_max_eig(5, 3)
    with pytest.raises(ValueError):
        exhaustive_max_eig(3, 9)


# -- sampling ------------------------------------------------------------------

def test_sampling_never_beats_bricklayer():
    r = sample_max_eig(5, 8, 10_000, seed=1)
    assert r.explored == 10_000
    assert r.best_lambda <= 3 + 1e-9
    assert r.best_lambda >= math.sqrt(3)  # at least the unit ball B(3,1)


@pytest.mark.parametrize("d,n", [(3, 5), (4, 6), (4, 11), (6, 12)])
def test_sampling_sound(d, n):
    r = sample_max_eig(d, n, 2000, seed=d * n)
    assert r.best_lambda <= bricklayer_eigenvalue(n) + 1e-9
    assert len(r.witness) == n and nx.is_connected(reference_graph(d, 2, r.witness))
    assert abs(largest_eigenvalue(d, 2, r.witness) - r.best_lambda) < 1e-9


def test_sampling_empty():
    r = sample_max_eig(6, 10, 0, seed=3)
    assert r.explored == 0 and r.best_lambda is None and r.witness == ()


def test_sampling_deterministic_and_worker_independent():
    a = sample_max_eig(5, 9, 2500, seed=42)
    assert a == sample_max_eig(5, 9, 2500, seed=42)
    assert a == sample_max_eig(5, 9, 2500, seed=42, workers=3)
    assert a.to_json() == sample_max_eig(5, 9, 2500, seed=42).to_json()


def test_record_json():
    obj = json.loads(exhaustive_max_eig(3, 4).to_json())
    assert obj == {"d": 3, "n": 4, "best_lambda": 2.0, "witness": [0, 1, 2, 3],
                   "is_bricklayer": True, "explored": 3}


# -- unit balls ----------------------------------------------------------------

def test_ball_table():
    rows = {r.d: r for r in star_vs_bricklayer_table([4, 16, 19])}
    assert rows[19].ball_wins and rows[19].ball_lambda == pytest.approx(4.3589, abs=1e-4)
    assert rows[19].log_bound == pytest.approx(4.3219, abs=1e-4)
    assert not rows[16].ball_wins and rows[16].ball_lambda == pytest.approx(4, abs=1e-12)
    assert not rows[4].ball_wins and rows[4].log_bound == pytest.approx(2.3219, abs=1e-4)
    assert star_vs_bricklayer_table(19)[0].n == 20
