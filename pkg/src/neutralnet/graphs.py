"""Hamming graphs and the induced subgraphs studied on them.

Vertices of H_{d,a} are integers in [0, a**d), read as d-digit base-a strings.
Two vertices are adjacent when their strings differ in exactly one digit.
Every graph here is an induced subgraph of some H_{d,a}, stored as a sorted
label array plus CSR adjacency (positional indices into the label array).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

MAX_VERTICES = 1 << 24


class CapacityError(ValueError):
    """Raised when a graph would exceed the materialization guard."""


def _check_alphabet(d: int, a: int) -> None:
    if d < 1:
        raise ValueError(f"string length d must be positive, got {d}")
    if a < 2:
        raise ValueError(f"alphabet size a must be at least 2, got {a}")


def min_dimension(n: int, a: int = 2) -> int:
    """Least d >= 1 with a**d >= n."""
    d, size = 1, a
    while size < n:
        d += 1
        size *= a
    return d


def digits(label: int, d: int, a: int) -> list[int]:
    """Base-a digits of ``label``, least significant first."""
    out = []
    for _ in range(d):
        label, r = divmod(label, a)
        out.append(r)
    return out


def differ_in_one_digit(u: int, v: int, a: int = 2) -> bool:
    """Edge predicate of the Hamming graph."""
    if u == v:
        return False
    if a == 2:
        return (u ^ v).bit_count() == 1
    mismatches = 0
    while u or v:
        u, ru = divmod(u, a)
        v, rv = divmod(v, a)
        if ru != rv:
            mismatches += 1
            if mismatches == 2:
                return False
    return mismatches == 1


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Induced subgraph of H_{d,a} on a sorted set of integer labels."""

    d: int
    a: int
    labels: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    d_overridden: bool = False
    _index: dict = field(default=None, repr=False, compare=False)

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def adjacency_lists(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.num_vertices)]

    def index_of(self, label: int) -> int:
        return self._index[int(label)]

    def edges(self) -> list[tuple[int, int]]:
        """Index pairs (i, j) with i < j, lexicographically sorted."""
        out = []
        for i in range(self.num_vertices):
            for j in self.neighbors(i):
                if i < j:
                    out.append((i, int(j)))
        return out

    def label_set(self) -> frozenset[int]:
        return frozenset(int(x) for x in self.labels)

    def same_as(self, other: "LabeledGraph") -> bool:
        """Label-set and edge-set equality (ignores the embedding dimension)."""
        return (
            self.a == other.a
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def to_json(self) -> str:
        payload = {
            "d": self.d,
            "a": self.a,
            "labels": [int(x) for x in self.labels],
            "edges": [list(e) for e in self.edges()],
        }
        return json.dumps(payload, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "LabeledGraph":
        obj = json.loads(text)
        g = induced_subgraph(obj["d"], obj["a"], obj["labels"])
        if sorted(tuple(e) for e in obj.get("edges", g.edges())) != g.edges():
            raise ValueError("edge list does not match the induced subgraph on the labels")
        return g


@dataclass(frozen=True, eq=False)
class StarGraph:
    """K_{1,n}: vertex 0 is the center, vertices 1..n are leaves."""

    leaves: int
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def num_vertices(self) -> int:
        return self.leaves + 1

    @property
    def num_edges(self) -> int:
        return self.leaves

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def adjacency_lists(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.num_vertices)]

    def edges(self) -> list[tuple[int, int]]:
        return [(0, j) for j in range(1, self.leaves + 1)]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _build(d: int, a: int, labels: np.ndarray, d_overridden: bool = False) -> LabeledGraph:
    n = len(labels)
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds the guard of {MAX_VERTICES}")
    rows, cols = [], []
    place = 1
    for _ in range(d if n else 0):
        digit = (labels // place) % a
        for shift in range(1, a):
            nd = (digit + shift) % a
            nbr = labels + (nd - digit) * place
            pos = np.searchsorted(labels, nbr)
            pos_c = np.minimum(pos, n - 1)
            hit = labels[pos_c] == nbr
            rows.append(np.nonzero(hit)[0])
            cols.append(pos_c[hit])
        place *= a
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    order = np.lexsort((c, r))
    r, c = r[order], c[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, r + 1, 1)
    np.cumsum(indptr, out=indptr)
    index = {int(x): i for i, x in enumerate(labels)}
    return LabeledGraph(
        d=d,
        a=a,
        labels=_frozen(labels),
        indptr=_frozen(indptr),
        indices=_frozen(c.astype(np.int64)),
        d_overridden=d_overridden,
        _index=index,
    )


def induced_subgraph(d: int, a: int, labels) -> LabeledGraph:
    """Subgraph of H_{d,a} induced by ``labels``."""
    _check_alphabet(d, a)
    raw = [int(x) for x in labels]
    if len(set(raw)) != len(raw):
        raise ValueError("duplicate labels")
    top = a ** d
    for x in raw:
        if not 0 <= x < top:
            raise ValueError(f"label {x} outside [0, {a}**{d})")
    if len(raw) > MAX_VERTICES:
        raise CapacityError(f"{len(raw)} vertices exceeds the guard of {MAX_VERTICES}")
    arr = np.array(sorted(raw), dtype=np.int64)
    return _build(d, a, arr)


def hamming_graph(d: int, a: int = 2) -> LabeledGraph:
    _check_alphabet(d, a)
    if a ** d > MAX_VERTICES:
        raise CapacityError(f"H_{{{d},{a}}} has {a ** d} vertices; guard is {MAX_VERTICES}")
    return _build(d, a, np.arange(a ** d, dtype=np.int64))


def bricklayer(n: int, a: int = 2, d: int | None = None) -> LabeledGraph:
    """G_{n,a}: the subgraph of H_{d,a} induced by labels 0..n-1.

    ``d`` defaults to the least dimension holding n labels. A larger ``d``
    adds no edges but is recorded, since it changes robustness normalization.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if a < 2:
        raise ValueError(f"alphabet size a must be at least 2, got {a}")
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds the guard of {MAX_VERTICES}")
    dmin = min_dimension(n, a)
    if d is None:
        d = dmin
    elif d < dmin:
        raise ValueError(f"d={d} cannot hold {n} labels in base {a}")
    return _build(d, a, np.arange(n, dtype=np.int64), d_overridden=d != dmin)


def hamming_ball(d: int, r: int) -> LabeledGraph:
    """B_{d,r}: binary strings within Hamming distance r of the origin."""
    _check_alphabet(d, 2)
    if not 0 <= r <= d:
        raise ValueError(f"radius must lie in [0, {d}], got {r}")
    size = sum(comb(d, i) for i in range(r + 1))
    if size > MAX_VERTICES:
        raise CapacityError(f"B_{{{d},{r}}} has {size} vertices; guard is {MAX_VERTICES}")
    labels = []
    for i in range(r + 1):
        for bits in combinations(range(d), i):
            labels.append(sum(1 << b for b in bits))
    return _build(d, 2, np.array(sorted(labels), dtype=np.int64))


def star(n: int) -> StarGraph:
    if n < 1:
        raise ValueError(f"a star needs at least one leaf, got {n}")
    indptr = np.concatenate(([0, n], np.arange(n + 1, 2 * n + 1))).astype(np.int64)
    indices = np.concatenate((np.arange(1, n + 1), np.zeros(n, dtype=np.int64))).astype(np.int64)
    return StarGraph(leaves=n, indptr=_frozen(indptr), indices=_frozen(indices))


def cartesian_product_k2(g: LabeledGraph, new_digit: str = "low") -> LabeledGraph:
    """G □ K_2 embedded in H_{d+1,2}.

    With ``new_digit="low"`` every label q becomes 2q and 2q+1, which maps
    G_n onto G_{2n} label for label. ``"high"`` uses q and q + 2**d instead;
    the two embeddings are isomorphic.
    """
    if g.a != 2:
        raise ValueError("cartesian_product_k2 needs a binary graph")
    labels = g.labels
    if new_digit == "low":
        new = np.sort(np.concatenate((2 * labels, 2 * labels + 1)))
    elif new_digit == "high":
        new = np.concatenate((labels, labels + (1 << g.d)))
    else:
        raise ValueError(f"new_digit must be 'low' or 'high', got {new_digit!r}")
    return _build(g.d + 1, 2, new.astype(np.int64))


def connected_components(g) -> list[list[int]]:
    """Vertex-index lists, each sorted, ordered by smallest member."""
    n = g.num_vertices
    seen = np.zeros(n, dtype=bool)
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(int(v))
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g) -> bool:
    return g.num_vertices > 0 and len(connected_components(g)) == 1


def subgraph_on_indices(g: LabeledGraph, idx) -> LabeledGraph:
    """Induced subgraph on a subset of g's vertex positions."""
    return induced_subgraph(g.d, g.a, [int(g.labels[i]) for i in idx])
