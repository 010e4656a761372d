"""Principal eigenvalues of Hamming subgraphs by independent routes.

* ``principal_eigenvalue_power`` -- shifted power iteration on A + I.
* ``ball_eigenvalue_reduced`` -- the (r+1)-state distance-class matrix of a ball.
* ``char_poly_exact`` + ``principal_eigenvalue_char_poly`` -- exact integer
  characteristic polynomial, largest root located with Sturm sequences.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg
import scipy.sparse

from .graphs import connected_components
from .polynomials import Polynomial, largest_real_root

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6
CHAR_POLY_GUARD = 32


class ConvergenceError(RuntimeError):
    """Power iteration ran out of iterations; ``last`` holds the final iterate."""

    def __init__(self, message: str, last: "SpectralResult"):
        super().__init__(message)
        self.last = last


@dataclass(frozen=True)
class DistanceProfile:
    """Eigenvector entry per Hamming distance from the origin, w[0] = 1."""

    d: int
    w: tuple[float, ...]

    def residuals(self, lam: float) -> list[float]:
        d, w = self.d, self.w
        r = len(w) - 1
        if r == 0:
            return [lam * w[0]]
        out = [lam * w[0] - d * w[1]]
        for k in range(1, r):
            out.append(lam * w[k] - k * w[k - 1] - (d - k) * w[k + 1])
        out.append(lam * w[r] - r * w[r - 1])
        return out


@dataclass(frozen=True)
class SpectralResult:
    lam: float
    eigenvector: np.ndarray = field(repr=False)
    residual: float
    method: str
    iterations: int = 0
    profile: DistanceProfile | None = None

    def to_dict(self, include_vector: bool = False) -> dict:
        out = {
            "lambda": float(self.lam),
            "residual": float(self.residual),
            "method": self.method,
            "iterations": int(self.iterations),
        }
        if include_vector:
            out["eigenvector"] = [float(x) for x in self.eigenvector]
        return out

    def to_json(self, include_vector: bool = False) -> str:
        return json.dumps(self.to_dict(include_vector))


@dataclass(frozen=True)
class HypercubeSpectrum:
    d: int
    pairs: tuple[tuple[int, int], ...]

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.pairs)


def adjacency_matrix(g, idx=None) -> scipy.sparse.csr_matrix:
    """Sparse adjacency, optionally restricted to vertex positions ``idx``."""
    n = g.num_vertices
    data = np.ones(len(g.indices))
    a = scipy.sparse.csr_matrix((data, g.indices, g.indptr), shape=(n, n))
    if idx is not None:
        idx = np.asarray(idx)
        a = a[idx][:, idx]
    return a


def dense_adjacency(g) -> np.ndarray:
    n = g.num_vertices
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        a[i, g.neighbors(i)] = 1
    return a


def _power_component(a, tol: float, max_iter: int) -> tuple[float, np.ndarray, float, int]:
    n = a.shape[0]
    if n == 1:
        return 0.0, np.ones(1), 0.0, 0
    x = np.full(n, 1.0 / math.sqrt(n))
    ax = a @ x
    lam = float(x @ ax)
    res = float(np.linalg.norm(ax - lam * x))
    it = 0
    while res > tol:
        if it >= max_iter:
            return lam, x, res, it
        y = ax + x  # shift by the identity: the Perron value dominates in magnitude
        x = y / np.linalg.norm(y)
        ax = a @ x
        lam = float(x @ ax)
        res = float(np.linalg.norm(ax - lam * x))
        it += 1
    return lam, x, res, it


def principal_eigenvalue_power(g, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Largest adjacency eigenvalue by power iteration, component by component."""
    if g.num_vertices == 0:
        raise ValueError("empty graph")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = adjacency_matrix(g)
    best = None
    total_iter = 0
    for comp in connected_components(g):
        sub = a[comp][:, comp] if len(comp) < g.num_vertices else a
        lam, x, res, it = _power_component(sub, tol, max_iter)
        total_iter += it
        if best is None or lam > best[0]:
            best = (lam, comp, x, res)
        if res > tol:
            vec = np.zeros(g.num_vertices)
            vec[comp] = np.abs(x)
            last = SpectralResult(lam, vec, res, "power", total_iter)
            raise ConvergenceError(f"residual {res:.3e} > {tol:.1e} after {it} iterations", last)
    lam, comp, x, res = best
    vec = np.zeros(g.num_vertices)
    vec[comp] = np.abs(x)
    return SpectralResult(lam, vec, res, "power", total_iter)


def principal_eigenvalue_dense(g) -> SpectralResult:
    """LAPACK route for small graphs; used inside searches over many classes."""
    a = dense_adjacency(g).astype(float)
    vals, vecs = np.linalg.eigh(a)
    lam = float(vals[-1])
    x = np.abs(vecs[:, -1])
    res = float(np.linalg.norm(a @ x - lam * x))
    return SpectralResult(lam, x, res, "dense", 0)


def hypercube_spectrum(d: int) -> HypercubeSpectrum:
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    return HypercubeSpectrum(d, tuple((d - 2 * i, math.comb(d, i)) for i in range(d + 1)))


def distance_class_matrix(d: int, r: int) -> np.ndarray:
    """T with T[k][k-1] = k and T[k][k+1] = d - k on states 0..r."""
    t = np.zeros((r + 1, r + 1))
    for k in range(r + 1):
        if k > 0:
            t[k, k - 1] = k
        if k < r:
            t[k, k + 1] = d - k
    return t


def ball_eigenvalue_reduced(d: int, r: int, tol: float = DEFAULT_TOL) -> SpectralResult:
    """Principal eigenvalue of B_{d,r} from the distance-class reduction.

    The returned eigenvector lives on the r+1 distance classes (entry k is
    w_k * sqrt(C(d, k)), unit norm); ``profile`` holds the per-vertex values w_k.
    """
    if not 0 <= r <= d:
        raise ValueError(f"radius must lie in [0, {d}], got {r}")
    if r == 0:
        return SpectralResult(0.0, np.ones(1), 0.0, "distance_class", 0, DistanceProfile(d, (1.0,)))
    # symmetrized: off-diagonal sqrt(T[k][k+1] T[k+1][k]) = sqrt((d-k)(k+1))
    off = np.sqrt([(d - k) * (k + 1) for k in range(r)], dtype=float)
    vals, vecs = scipy.linalg.eigh_tridiagonal(np.zeros(r + 1), off, select="i", select_range=(r, r))
    lam = float(vals[0])
    u = np.abs(vecs[:, 0])
    u /= np.linalg.norm(u)
    s = np.diag(off, 1) + np.diag(off, -1)
    res = float(np.linalg.norm(s @ u - lam * u))
    scale = np.sqrt([math.comb(d, k) for k in range(r + 1)], dtype=float)
    w = u / scale
    w = w / w[0]
    if res > tol:
        raise ConvergenceError(f"distance-class residual {res:.3e} > {tol:.1e}",
                               SpectralResult(lam, u, res, "distance_class", 1))
    return SpectralResult(lam, u, res, "distance_class", 1, DistanceProfile(d, tuple(float(v) for v in w)))


def expand_profile(g, profile: DistanceProfile) -> np.ndarray:
    """Per-vertex eigenvector of a ball from its distance profile (unit norm)."""
    pc = np.array([bin(int(x)).count("1") for x in g.labels])
    v = np.array(profile.w)[pc]
    return v / np.linalg.norm(v)


# -- exact characteristic polynomials ---------------------------------------

def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


_PRIMES: list[int] = []


def _prime(i: int) -> int:
    # primes just below 2**26 keep every int64 product-sum below 2**63
    while len(_PRIMES) <= i:
        cand = (_PRIMES[-1] if _PRIMES else (1 << 26)) - 1
        while not _is_prime(cand):
            cand -= 1
        _PRIMES.append(cand)
    return _PRIMES[i]


def _charpoly_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomial mod p via Hessenberg reduction; low -> high."""
    h = a % p
    n = h.shape[0]
    for j in range(n - 2):
        nz = np.flatnonzero(h[j + 1:, j])
        if len(nz) == 0:
            continue
        piv = j + 1 + nz[0]
        if piv != j + 1:
            h[[piv, j + 1], :] = h[[j + 1, piv], :]
            h[:, [piv, j + 1]] = h[:, [j + 1, piv]]
        inv = pow(int(h[j + 1, j]), p - 2, p)
        u = (h[j + 2:, j] * inv) % p
        if not u.any():
            continue
        h[j + 2:, :] = (h[j + 2:, :] - np.outer(u, h[j + 1, :]) % p) % p
        h[:, j + 1] = (h[:, j + 1] + (h[:, j + 2:] @ u) % p) % p
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur - (int(h[m - 1, m - 1]) * prev) % p) % p
        coef = np.zeros(m - 1, dtype=np.int64)
        t = 1
        for i in range(m - 1, 0, -1):
            t = (t * int(h[i, i - 1])) % p
            if t == 0:
                break
            coef[i - 1] = (int(h[i - 1, m - 1]) * t) % p
        if coef.any():
            cur = (cur - (coef @ polys[: m - 1]) % p) % p
        polys[m] = cur
    return polys[n]


def _coefficient_bound(n: int, max_degree: int) -> int:
    # |e_j(eigenvalues)| <= C(n, j) * rho^j and rho <= max degree
    return max(math.comb(n, j) * max_degree**j for j in range(n + 1))


def _char_poly_modular(a: np.ndarray) -> list[int]:
    n = a.shape[0]
    bound = 2 * _coefficient_bound(n, int(a.sum(axis=1).max(initial=0))) + 1
    modulus = 1
    residues = [0] * (n + 1)
    i = 0
    while modulus <= bound:
        p = _prime(i)
        i += 1
        cp = _charpoly_mod(a.astype(np.int64).copy(), p)
        # Garner step: lift residues mod `modulus` to mod `modulus * p`
        inv = pow(modulus % p, p - 2, p)
        for k in range(n + 1):
            delta = ((int(cp[k]) - residues[k]) * inv) % p
            residues[k] += modulus * delta
        modulus *= p
    half = modulus // 2
    return [c - modulus if c > half else c for c in residues]


def _char_poly_trace(a: np.ndarray) -> list[int]:
    """Faddeev-LeVerrier over the integers; every division is exact."""
    n = a.shape[0]
    A = a.astype(object)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = np.zeros((n, n), dtype=object)
    eye = np.identity(n, dtype=object)
    for k in range(1, n + 1):
        m = A.dot(m) + coeffs[n - k + 1] * eye
        tr = int(np.trace(A.dot(m)))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs[n - k] = -tr // k
    return coeffs


def char_poly_exact(g, method: str = "modular", max_vertices: int = CHAR_POLY_GUARD) -> Polynomial:
    """det(xI - A) with exact integer coefficients.

    ``modular`` reduces A to Hessenberg form modulo primes near 2**26 and
    recombines by CRT until the coefficient bound is covered. ``trace`` is
    the Faddeev-LeVerrier recursion in Python integers.
    """
    n = g.num_vertices
    if n > max_vertices:
        raise ValueError(f"{n} vertices exceeds the exact-arithmetic guard of {max_vertices}")
    if n == 0:
        return Polynomial([1])
    a = dense_adjacency(g)
    if method == "modular":
        coeffs = _char_poly_modular(a)
    elif method == "trace":
        coeffs = _char_poly_trace(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Polynomial(coeffs)


def principal_eigenvalue_char_poly(g, tol: float = 1e-13, max_vertices: int = CHAR_POLY_GUARD) -> SpectralResult:
    """Largest root of the exact characteristic polynomial."""
    cp = char_poly_exact(g, max_vertices=max_vertices)
    deg = g.degrees()
    hi = int(deg.max()) if len(deg) else 0
    if hi == 0:
        lam = 0.0
    else:
        lo = Fraction(int(deg.sum()), len(deg)) - Fraction(1, 2)
        lam = largest_real_root(cp, float(lo), hi, tol)
    a = dense_adjacency(g).astype(float)
    # eigenvector: right singular vector of A - lam I with the smallest singular value
    _, _, vt = np.linalg.svd(a - lam * np.eye(len(a)))
    x = np.abs(vt[-1])
    x /= np.linalg.norm(x)
    res = float(np.linalg.norm(a @ x - lam * x))
    return SpectralResult(lam, x, res, "char_poly", 0)


def robustness(g, d: int | None = None, a: int | None = None, lam: float | None = None) -> float:
    """lambda / (d (a - 1)): long-run fraction of neutral mutations."""
    d = g.d if d is None else d
    a = g.a if a is None else a
    if lam is None:
        lam = principal_eigenvalue_power(g).lam
    return lam / (d * (a - 1))
