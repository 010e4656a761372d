"""Searches for the induced subgraph of the hypercube Q_d with the largest
principal eigenvalue at a fixed vertex count.

Connected subgraphs suffice: the eigenvalue of a disconnected graph is that
of its best component, which is itself a connected candidate with fewer
vertices, and the bricklayer eigenvalues increase strictly with n.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .graphs import bricklayer
from .spectra import ball_eigenvalue_reduced, principal_eigenvalue_power

TIE_TOL = 1e-9
EXHAUSTIVE_MAX_D = 4
CANONICAL_MAX_D = 6
SAMPLES_PER_STREAM = 1000


@dataclass(frozen=True)
class SearchRecord:
    d: int
    n: int
    best_lambda: float | None
    witness: tuple[int, ...]
    is_bricklayer: bool
    explored: int

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "best_lambda": self.best_lambda,
            "witness": list(self.witness),
            "is_bricklayer": self.is_bricklayer,
            "explored": self.explored,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# -- hypercube automorphisms ---------------------------------------------------

@lru_cache(maxsize=None)
def vertex_permutation_table(d: int) -> np.ndarray:
    """Row g maps each vertex v of Q_d to its image under automorphism g.

    Automorphisms are a coordinate permutation followed by XOR with a mask;
    there are d! * 2^d of them.
    """
    if d > CANONICAL_MAX_D:
        raise ValueError(f"automorphism tables are limited to d <= {CANONICAL_MAX_D}")
    size = 1 << d
    verts = np.arange(size)
    bits = (verts[:, None] >> np.arange(d)) & 1
    rows = []
    for perm in permutations(range(d)):
        img = (bits << np.array(perm)).sum(axis=1)
        rows.append(img)
    perm_rows = np.array(rows, dtype=np.int64)
    table = (perm_rows[:, None, :] ^ verts[None, :, None]).reshape(-1, size)
    table.setflags(write=False)
    return table


def apply_automorphism(labels, d: int, g: int) -> frozenset[int]:
    table = vertex_permutation_table(d)
    return frozenset(int(table[g, v]) for v in labels)


def canonical_form(labels, d: int) -> tuple[int, ...]:
    """Lexicographically least sorted image of ``labels`` under Aut(Q_d)."""
    labels = sorted(int(v) for v in labels)
    if not labels:
        return ()
    if any(not 0 <= v < (1 << d) for v in labels):
        raise ValueError(f"labels must lie in [0, 2^{d})")
    images = np.sort(vertex_permutation_table(d)[:, labels], axis=1)
    best = np.lexsort(images.T[::-1])[0]
    return tuple(int(x) for x in images[best])


class _MaskCanonicalizer:
    """Canonical forms of vertex sets encoded as bitmasks, for d <= 4.

    A set is lexicographically smaller than another of the same size exactly
    when its bit-reversed mask is larger, so the canonical image is the one
    with the largest reversed mask.  Byte lookup tables give the reversed
    image of a mask under every automorphism at once.
    """

    def __init__(self, d: int):
        self.d = d
        self.size = 1 << d
        table = vertex_permutation_table(d)
        self.chunk = min(8, self.size)
        self.n_chunks = self.size // self.chunk
        ngroup = table.shape[0]
        lut = np.zeros((self.n_chunks, ngroup, 1 << self.chunk), dtype=np.int64)
        byte_vals = np.arange(1 << self.chunk)
        for c in range(self.n_chunks):
            for b in range(self.chunk):
                v = c * self.chunk + b
                rev_bit = (1 << (self.size - 1 - table[:, v]))[:, None]
                has = ((byte_vals >> b) & 1).astype(bool)[None, :]
                lut[c] |= np.where(has, rev_bit, 0)
        self.lut = lut
        self.low = (1 << self.chunk) - 1

    def reverse(self, mask: int) -> int:
        out = 0
        for v in range(self.size):
            if mask >> v & 1:
                out |= 1 << (self.size - 1 - v)
        return out

    def canonical(self, mask: int) -> int:
        acc = self.lut[0][:, mask & self.low]
        for c in range(1, self.n_chunks):
            acc = acc | self.lut[c][:, (mask >> (c * self.chunk)) & self.low]
        return self.reverse(int(acc.max()))


def mask_to_labels(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def labels_to_mask(labels) -> int:
    m = 0
    for v in labels:
        m |= 1 << int(v)
    return m


def _neighbor_mask(mask: int, d: int) -> int:
    out = 0
    for v in mask_to_labels(mask):
        for b in range(d):
            out |= 1 << (v ^ (1 << b))
    return out & ~mask


def _subset_lambda(labels, d: int) -> float:
    labels = list(labels)
    k = len(labels)
    if k == 1:
        return 0.0
    arr = np.array(labels, dtype=np.int64)
    xor = arr[:, None] ^ arr[None, :]
    # exactly one differing bit: nonzero power of two
    a = ((xor != 0) & ((xor & (xor - 1)) == 0)).astype(float)
    return float(np.linalg.eigvalsh(a)[-1])


@lru_cache(maxsize=None)
def connected_classes(d: int) -> tuple[tuple[int, ...], ...]:
    """Canonical masks of connected induced subgraphs of Q_d, grouped by size.

    Entry n-1 holds the classes with n vertices.  Each level is grown from the
    canonical representatives of the previous one by adding a vertex adjacent
    to the set, deduplicated by canonical form.
    """
    if not 1 <= d <= EXHAUSTIVE_MAX_D:
        raise ValueError(f"exhaustive enumeration supports 1 <= d <= {EXHAUSTIVE_MAX_D}")
    canon = _MaskCanonicalizer(d)
    levels = [(1,)]  # vertex 0 represents every single-vertex set
    for _ in range(1, 1 << d):
        nxt: set[int] = set()
        for rep in levels[-1]:
            frontier = _neighbor_mask(rep, d)
            while frontier:
                low = frontier & -frontier
                frontier ^= low
                nxt.add(canon.canonical(rep | low))
        levels.append(tuple(sorted(nxt, key=lambda m: mask_to_labels(m))))
    return tuple(levels)


def _better(lam, key, best_lam, best_key):
    """Keep the larger eigenvalue; near-ties go to the lexicographically least set."""
    if lam > best_lam + TIE_TOL:
        return lam, key
    if abs(lam - best_lam) <= TIE_TOL and key < best_key:
        return max(lam, best_lam), key
    return best_lam, best_key


def _best_of(candidates, d: int):
    best_lam, best_key = -math.inf, None
    for labels in candidates:
        best_lam, best_key = _better(_subset_lambda(labels, d), labels, best_lam, best_key)
    return best_lam, best_key


def bricklayer_lambda(n: int) -> float:
    return principal_eigenvalue_power(bricklayer(n)).lam


def exhaustive_max_eig(d: int, n: int) -> SearchRecord:
    """Best connected induced n-vertex subgraph of Q_d over all symmetry classes."""
    if not 1 <= n <= 1 << d:
        raise ValueError(f"n must lie in [1, 2^{d}]")
    classes = connected_classes(d)[n - 1]
    candidates = [mask_to_labels(m) for m in classes]
    best_lam, witness = _best_of(candidates, d)
    target = canonical_form(range(n), d)
    return SearchRecord(d, n, best_lam, witness, canonical_form(witness, d) == target, len(classes))


def unrestricted_max_eig(d: int) -> dict[int, float]:
    """Best eigenvalue per size over every vertex subset of Q_d (connected or not)."""
    if d > 4:
        raise ValueError("brute force over all subsets is limited to d <= 4")
    size = 1 << d
    best: dict[int, float] = {}
    for mask in range(1, 1 << size):
        labels = mask_to_labels(mask)
        lam = _subset_lambda(labels, d)
        k = len(labels)
        if lam > best.get(k, -math.inf):
            best[k] = lam
    return best


# -- random growth sampling ----------------------------------------------------

def _grow(rng: np.random.Generator, d: int, n: int) -> tuple[int, ...]:
    start = int(rng.integers(1 << d))
    chosen = {start}
    boundary = {start ^ (1 << b) for b in range(d)}
    while len(chosen) < n:
        pool = sorted(boundary)
        v = pool[int(rng.integers(len(pool)))]
        chosen.add(v)
        boundary.discard(v)
        for b in range(d):
            w = v ^ (1 << b)
            if w not in chosen:
                boundary.add(w)
    return tuple(sorted(chosen))


def _sample_stream(seed_seq: np.random.SeedSequence, d: int, n: int, count: int):
    rng = np.random.default_rng(seed_seq)
    best_lam, best_key = -math.inf, None
    for _ in range(count):
        labels = _grow(rng, d, n)
        best_lam, best_key = _better(_subset_lambda(labels, d), labels, best_lam, best_key)
    return best_lam, best_key


def sample_max_eig(d: int, n: int, samples: int, seed: int, workers: int = 1) -> SearchRecord:
    """Best eigenvalue over ``samples`` randomly grown connected n-vertex subgraphs.

    Growth: start at a uniform vertex, then repeatedly add a uniform vertex
    from the set's outer boundary.  Samples are drawn in fixed-size streams
    spawned from ``seed``, so the record does not depend on ``workers``.
    """
    if not 1 <= n <= 1 << d:
        raise ValueError(f"n must lie in [1, 2^{d}]")
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    if samples == 0:
        return SearchRecord(d, n, None, (), False, 0)
    n_streams = -(-samples // SAMPLES_PER_STREAM)
    seqs = np.random.SeedSequence(seed).spawn(n_streams)
    counts = [SAMPLES_PER_STREAM] * (n_streams - 1) + [samples - SAMPLES_PER_STREAM * (n_streams - 1)]
    jobs = list(zip(seqs, counts))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda job: _sample_stream(job[0], d, n, job[1]), jobs))
    else:
        results = [_sample_stream(s, d, n, c) for s, c in jobs]
    best_lam, best_key = -math.inf, None
    for lam, key in results:
        best_lam, best_key = _better(lam, key, best_lam, best_key)
    ties = abs(best_lam - bricklayer_lambda(n)) <= TIE_TOL
    return SearchRecord(d, n, best_lam, best_key, ties, samples)


# -- unit balls against the logarithmic bound -----------------------------------

@dataclass(frozen=True)
class BallRow:
    d: int
    n: int
    ball_lambda: float
    log_bound: float
    ball_wins: bool


def star_vs_bricklayer_table(d_values) -> list[BallRow]:
    """For n = d + 1 compare lambda(B_{d,1}) = sqrt(d) with the bound log2 n."""
    if isinstance(d_values, int):
        d_values = [d_values]
    rows = []
    for d in d_values:
        if d < 1:
            raise ValueError("d must be at least 1")
        lam = ball_eigenvalue_reduced(d, 1).lam
        bound = math.log2(d + 1)
        rows.append(BallRow(d, d + 1, lam, bound, lam > bound))
    return rows
