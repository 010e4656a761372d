"""Deterministic mutation-selection dynamics on a neutral network.

Each generation every genotype reproduces at rate ``f``; a fraction
``mu * d * (a - 1)`` of offspring mutate, spread evenly over the ``d(a-1)``
one-letter neighbours.  Offspring landing off the network are lost.  The
long-run population-weighted robustness converges to ``lambda / (d(a-1))``.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

SMALL_RATE = 0.1
STABLE_REL_CHANGE = 1e-10


class DegenerateStateError(RuntimeError):
    """The population died out or was never positive."""


def _embedding(g, d, a) -> tuple[int, int]:
    d = getattr(g, "d", None) if d is None else d
    a = getattr(g, "a", 2) if a is None else a
    if d is None:
        raise ValueError("the graph does not record d; pass it explicitly")
    return d, a


@dataclass(frozen=True)
class MutationParams:
    mu: float = 0.01
    f: float = 1.0

    def __post_init__(self):
        if not 0 <= self.mu <= 1:
            raise ValueError("mu must lie in [0, 1]")
        if not self.f > 0:
            raise ValueError("f must be positive")

    def check(self, d: int, a: int) -> float:
        """Return the total mutation weight mu*d*(a-1), rejecting values above 1."""
        load = self.mu * d * (a - 1)
        if load > 1:
            raise ValueError(f"mu*d*(a-1) = {load:g} exceeds 1; the no-mutation weight would be negative")
        if load > SMALL_RATE:
            warnings.warn(f"mu*d*(a-1) = {load:g} is not small; the linear mutation model is a rough approximation",
                          stacklevel=2)
        return load


@dataclass(frozen=True)
class PopulationState:
    n: np.ndarray
    generation: int = 0
    log_scale: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.n, dtype=float)
        if v.ndim != 1 or not np.all(np.isfinite(v)) or np.any(v < 0) or not np.any(v > 0):
            raise DegenerateStateError("population must be finite, nonnegative and not all zero")
        object.__setattr__(self, "n", v)

    @classmethod
    def uniform(cls, size: int) -> "PopulationState":
        return cls(np.full(size, 1.0 / size))

    def normalized(self) -> np.ndarray:
        return self.n / np.linalg.norm(self.n)

    def log_total(self) -> float:
        """Natural log of the unnormalized total population."""
        return self.log_scale + math.log(self.n.sum())


def genotype_robustness(g, d: int | None = None, a: int | None = None) -> np.ndarray:
    d, a = _embedding(g, d, a)
    return np.asarray(g.degrees(), dtype=float) / (d * (a - 1))


def _adjacent_sum(g, v: np.ndarray) -> np.ndarray:
    counts = np.diff(g.indptr)
    rows = np.repeat(np.arange(len(counts)), counts)
    return np.bincount(rows, weights=v[g.indices], minlength=len(counts))


def mutation_matrix_apply(g, d, a, mu: float, v) -> np.ndarray:
    """(1 - mu*d*(a-1)) v + mu A v, without forming A."""
    v = np.asarray(v, dtype=float)
    return (1 - mu * d * (a - 1)) * v + mu * _adjacent_sum(g, v)


@dataclass
class Trajectory:
    generation: list[int] = field(default_factory=list)
    measured_robustness: list[float] = field(default_factory=list)
    growth_factor: list[float] = field(default_factory=list)
    log_scale: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.generation)

    def append(self, gen: int, rob: float, growth: float, log_scale: float) -> None:
        self.generation.append(gen)
        self.measured_robustness.append(rob)
        self.growth_factor.append(growth)
        self.log_scale.append(log_scale)

    def rows(self):
        return zip(self.generation, self.measured_robustness, self.growth_factor, self.log_scale)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["generation", "measured_robustness", "growth_factor", "log_scale"])
        for gen, rob, growth, ls in self.rows():
            w.writerow([gen, repr(rob), repr(growth), repr(ls)])
        return buf.getvalue()


def measured_robustness(g, state: PopulationState, d: int | None = None, a: int | None = None) -> float:
    total = state.n.sum()
    if not total > 0:
        raise DegenerateStateError("population total is zero")
    return float(genotype_robustness(g, d, a) @ state.n / total)


def evolve(g, params: MutationParams, n0: PopulationState | None = None, t: int = 10_000,
           d: int | None = None, a: int | None = None) -> tuple[PopulationState, Trajectory]:
    """Run ``t`` generations of n <- f M n, renormalizing to unit total each step.

    The log of each step's scale factor accumulates in ``log_scale`` so the
    unnormalized population is recoverable without overflow.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    d, a = _embedding(g, d, a)
    params.check(d, a)
    state = n0 if n0 is not None else PopulationState.uniform(g.num_vertices)
    if len(state.n) != g.num_vertices:
        raise ValueError("population vector length does not match the graph")
    r = genotype_robustness(g, d, a)
    traj = Trajectory()
    v = state.n
    log_scale = state.log_scale
    total = v.sum()
    for step in range(1, t + 1):
        w = params.f * mutation_matrix_apply(g, d, a, params.mu, v)
        new_total = w.sum()
        if not new_total > 0 or not math.isfinite(new_total):
            raise DegenerateStateError(f"population vanished at generation {state.generation + step}")
        growth = new_total / total
        v = w / new_total
        log_scale += math.log(new_total)
        total = 1.0
        traj.append(state.generation + step, float(r @ v), float(growth), log_scale)
    if t == 0:
        return state, traj
    return PopulationState(v, state.generation + t, log_scale), traj


def effective_growth(trajectory: Trajectory, rel_change: float = STABLE_REL_CHANGE) -> float:
    """The per-generation growth factor once it has stopped changing."""
    g = trajectory.growth_factor
    if len(g) < 2:
        raise ValueError("trajectory too short to judge stabilization")
    last, prev = g[-1], g[-2]
    if abs(last - prev) > rel_change * abs(last):
        raise ValueError(f"growth factor has not stabilized (relative change {abs(last - prev) / abs(last):.3g})")
    return last


def predicted_growth(lam: float, d: int, a: int, params: MutationParams) -> float:
    """f (1 - mu d (a-1) (1 - lambda / (d (a-1))))."""
    m = d * (a - 1)
    return params.f * (1 - params.mu * m * (1 - lam / m))
